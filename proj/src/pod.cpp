#include "swsindy/pod.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "swsindy/error.hpp"

namespace swsindy {

PodBasis::PodBasis(Eigen::MatrixXd modes) : modes_(std::move(modes)) {
  if (modes_.cols() > 0) {
    const Eigen::MatrixXd gram = modes_.transpose() * modes_;
    const double drift =
        (gram - Eigen::MatrixXd::Identity(modes_.cols(), modes_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (drift > 1e-8)
      throw std::invalid_argument("mode columns are not orthonormal");
  }
}

Eigen::VectorXd PodBasis::project(
    const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != modes_.rows())
    throw std::invalid_argument("vector length does not match the basis");
  return modes_.transpose() * v;
}

double PodBasis::residual(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != modes_.rows() && mode_count() > 0)
    throw std::invalid_argument("vector length does not match the basis");
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  if (mode_count() == 0) return 1.0;
  const Eigen::VectorXd rejection = v - modes_ * (modes_.transpose() * v);
  return rejection.norm() / norm;
}

bool PodBasis::maybe_add_mode(const Eigen::Ref<const Eigen::VectorXd>& v,
                              double eps_residual) {
  if (residual(v) <= eps_residual) return false;
  Eigen::VectorXd rejection = v;
  if (mode_count() > 0) {
    rejection -= modes_ * (modes_.transpose() * v);
    // Second orthogonalization pass keeps the basis orthonormal to machine
    // precision as it grows.
    rejection -= modes_ * (modes_.transpose() * rejection);
  }
  const double norm = rejection.norm();
  if (norm == 0.0) return false;
  modes_.conservativeResize(v.size(), mode_count() + 1);
  modes_.col(mode_count() - 1) = rejection / norm;
  return true;
}

WindowSvd init_from_window(const Eigen::Ref<const Eigen::MatrixXd>& window,
                           double eps_spectral) {
  if (window.rows() < 1 || window.cols() < 1)
    throw std::invalid_argument("seed window is empty");
  if (!(eps_spectral >= 0.0))
    throw std::invalid_argument("spectral threshold must be non-negative");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(window,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < sigma.size() && sigma(keep) >= eps_spectral) ++keep;
  if (keep == 0)
    throw ConfigError(
        "spectral threshold rejects every mode of the seed window");

  Eigen::MatrixXd modes = svd.matrixU().leftCols(keep);
  Eigen::MatrixXd seed(keep, window.cols());
  for (Eigen::Index l = 0; l < keep; ++l)
    seed.row(l) = sigma(l) * svd.matrixV().col(l).transpose();

  // Canonical mode sign: the entry of largest magnitude is positive.
  for (Eigen::Index l = 0; l < keep; ++l) {
    Eigen::Index at = 0;
    modes.col(l).cwiseAbs().maxCoeff(&at);
    if (modes(at, l) < 0.0) {
      modes.col(l) = -modes.col(l);
      seed.row(l) = -seed.row(l);
    }
  }

  WindowSvd out;
  out.basis = PodBasis(modes);
  out.singular_values = sigma;
  out.temporal_seed = std::move(seed);
  return out;
}

StreamingPod::StreamingPod(Eigen::Index window, double eps_spectral,
                           double eps_residual, ReinitPolicy reinit)
    : window_(window),
      eps_spectral_(eps_spectral),
      eps_residual_(eps_residual),
      reinit_(reinit) {
  if (window < 1) throw std::invalid_argument("window must be positive");
  if (!(eps_spectral >= 0.0) || !(eps_residual >= 0.0))
    throw std::invalid_argument("thresholds must be non-negative");
  if (reinit_.enabled && reinit_.mode_cap < 1)
    throw std::invalid_argument("reinit cap must be positive");
}

const PodBasis& StreamingPod::basis() const {
  if (!seeded_) throw std::logic_error("basis requested before seeding");
  return basis_;
}

const Eigen::MatrixXd& StreamingPod::window_seed() const {
  if (!seeded_) throw std::logic_error("seed requested before seeding");
  return window_seed_;
}

const Eigen::VectorXd& StreamingPod::window_singular_values() const {
  if (!seeded_) throw std::logic_error("spectrum requested before seeding");
  return window_singular_values_;
}

void StreamingPod::trace(double residual) {
  if (!record_trace_) return;
  residual_trace_.push_back(residual);
  mode_count_trace_.push_back(
      seeded_ ? static_cast<int>(basis_.mode_count()) : 0);
}

PodEvent StreamingPod::force_seed() {
  if (seeded_)
    throw std::logic_error("force_seed is only valid before the first seed");
  if (fill_ < 1) throw std::logic_error("no snapshots buffered yet");
  const Eigen::Index keep = fill_;
  buffer_.conservativeResize(buffer_.rows(), keep);
  const auto event = seed_from_buffer();
  return *event;
}

std::optional<PodEvent> StreamingPod::seed_from_buffer() {
  const WindowSvd svd = init_from_window(buffer_, eps_spectral_);
  basis_ = svd.basis;
  window_seed_ = svd.temporal_seed;
  window_singular_values_ = svd.singular_values;
  birth_indices_.assign(static_cast<std::size_t>(basis_.mode_count()), seen_);
  const bool was_reinit = reinit_pending_;
  seeded_ = true;
  collecting_ = false;
  reinit_pending_ = false;
  fill_ = 0;
  return PodEvent{was_reinit ? PodEvent::Kind::kReinitCompleted
                             : PodEvent::Kind::kSeeded,
                  seen_, basis_.mode_count()};
}

std::optional<PodEvent> StreamingPod::push(
    const Eigen::Ref<const Eigen::VectorXd>& v) {
  ++seen_;
  if (collecting_) {
    if (buffer_.cols() != window_) buffer_.resize(v.size(), window_);
    if (v.size() != buffer_.rows())
      throw std::invalid_argument("snapshot dimension changed mid-stream");
    buffer_.col(fill_++) = v;
    std::optional<PodEvent> event;
    if (fill_ == window_) event = seed_from_buffer();
    trace(std::numeric_limits<double>::quiet_NaN());
    return event;
  }

  const double residual = basis_.residual(v);
  std::optional<PodEvent> event;
  if (basis_.maybe_add_mode(v, eps_residual_)) {
    birth_indices_.push_back(seen_);
    event = PodEvent{PodEvent::Kind::kModeAdded, seen_, basis_.mode_count()};
    if (reinit_.enabled && basis_.mode_count() > reinit_.mode_cap) {
      // Overgrown: restart collection at the offending snapshot and relax
      // the residual threshold for the re-seeded process.
      collecting_ = true;
      reinit_pending_ = true;
      fill_ = 0;
      buffer_.col(fill_++) = v;
      eps_residual_ = reinit_.eps_residual;
      event = PodEvent{PodEvent::Kind::kReinitStarted, seen_,
                       basis_.mode_count()};
    }
  }
  trace(residual);
  return event;
}

}  // namespace swsindy
