#include "swsindy/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "swsindy/error.hpp"

namespace swsindy {

namespace {

void validate(const SurrogateModel& model) {
  const Eigen::Index modes = model.mode_count();
  if (modes < 1) throw std::invalid_argument("surrogate model has no modes");
  if (model.basis.dim() != modes)
    throw std::invalid_argument(
        "dictionary dimension differs from the mode count");
  if (static_cast<Eigen::Index>(model.coefficients.size()) != modes)
    throw std::invalid_argument("one coefficient vector per mode required");
  for (const auto& c : model.coefficients)
    if (c.size() != model.basis.size())
      throw std::invalid_argument(
          "coefficient length differs from the dictionary size");
  if (!(model.dt > 0.0) || !std::isfinite(model.dt))
    throw std::invalid_argument("snapshot spacing must be positive and finite");
  if (model.n_snapshots < 1)
    throw std::invalid_argument("nothing to reconstruct");
  for (const auto& samples : {model.restarts, model.seams})
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (samples[i].snapshot <= samples[i - 1].snapshot)
        throw std::invalid_argument("stored samples must be time-ordered");
}

}  // namespace

SurrogateModel surrogate_from_archive(const Archive& archive,
                                      const OdeOptions& ode) {
  SurrogateModel model{archive.basis,
                       {},
                       archive.mode_birth,
                       archive.restarts,
                       archive.seams,
                       archive.dt,
                       archive.n_snapshots,
                       ode};
  model.coefficients.reserve(archive.coefficients.size());
  for (const auto& c : archive.coefficients) model.coefficients.push_back(c.dense);
  return model;
}

Eigen::MatrixXd evolve_surrogate(const SurrogateModel& model) {
  validate(model);
  const Eigen::Index modes = model.mode_count();
  const std::int64_t n = model.n_snapshots;

  // Restart values win over a seam stored at the same snapshot: restarts are
  // the designated reset points, seams only cover births between them.
  std::map<std::int64_t, const Eigen::VectorXd*> resets;
  for (const auto& s : model.seams) resets[s.snapshot] = &s.values;
  for (const auto& s : model.restarts) resets[s.snapshot] = &s.values;

  // A mode stays pinned at zero until the first stored sample at or after
  // its birth; with none it never activates.
  std::vector<std::int64_t> activation(static_cast<std::size_t>(modes),
                                       std::numeric_limits<std::int64_t>::max());
  for (Eigen::Index m = 0; m < modes; ++m) {
    const auto it =
        resets.lower_bound(model.mode_birth[static_cast<std::size_t>(m)]);
    if (it != resets.end())
      activation[static_cast<std::size_t>(m)] = it->first;
  }

  Eigen::VectorXd mask = Eigen::VectorXd::Zero(modes);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(modes);
  Eigen::VectorXd phi(model.basis.size());

  const auto arrive = [&](std::int64_t snapshot) {
    for (Eigen::Index m = 0; m < modes; ++m)
      if (activation[static_cast<std::size_t>(m)] <= snapshot) mask[m] = 1.0;
    const auto it = resets.find(snapshot);
    if (it == resets.end()) return;
    const Eigen::VectorXd& stored = *it->second;
    y.head(stored.size()) = stored;
    y.tail(modes - stored.size()).setZero();
  };

  OdeRhs rhs = [&](double, const Eigen::VectorXd& state, Eigen::VectorXd& out) {
    model.basis.eval(state, phi);
    for (Eigen::Index m = 0; m < modes; ++m)
      out[m] = mask[m] == 0.0
                   ? 0.0
                   : model.coefficients[static_cast<std::size_t>(m)].dot(phi);
  };
  AdaptiveRk45 integrator(rhs, model.ode);

  Eigen::MatrixXd temporal(modes, n);
  arrive(1);
  temporal.col(0) = y;
  for (std::int64_t snapshot = 2; snapshot <= n; ++snapshot) {
    const double t0 = static_cast<double>(snapshot - 2) * model.dt;
    const double t1 = static_cast<double>(snapshot - 1) * model.dt;
    integrator.advance(t0, t1, y);
    arrive(snapshot);
    temporal.col(snapshot - 1) = y;
  }
  return temporal;
}

void synthesize(const Eigen::Ref<const Eigen::MatrixXd>& temporal,
                const Eigen::Ref<const Eigen::MatrixXd>& modes,
                const std::function<void(std::int64_t,
                                         const Eigen::VectorXd&)>& sink) {
  if (modes.cols() != temporal.rows())
    throw std::invalid_argument(
        "spatial mode count differs from the temporal row count");
  Eigen::VectorXd frame(modes.rows());
  for (Eigen::Index n = 0; n < temporal.cols(); ++n) {
    frame.noalias() = modes * temporal.col(n);
    sink(n + 1, frame);
  }
}

SnapshotStream reconstruct_stream(const Archive& archive,
                                  const OdeOptions& ode) {
  const Eigen::MatrixXd temporal =
      evolve_surrogate(surrogate_from_archive(archive, ode));
  SnapshotStream out;
  out.dt = archive.dt;
  out.frames.reserve(static_cast<std::size_t>(temporal.cols()));
  if (!archive.pod_enabled) {
    for (Eigen::Index n = 0; n < temporal.cols(); ++n)
      out.frames.push_back(temporal.col(n));
    return out;
  }
  synthesize(temporal, archive.spatial_modes,
             [&out](std::int64_t, const Eigen::VectorXd& frame) {
               out.frames.push_back(frame);
             });
  return out;
}

SnapshotStream project_stream(const SnapshotStream& truth,
                              const Eigen::Ref<const Eigen::MatrixXd>& modes) {
  SnapshotStream out;
  out.dt = truth.dt;
  out.frames.reserve(truth.frames.size());
  for (const auto& frame : truth.frames) {
    if (frame.size() != modes.rows())
      throw std::invalid_argument("frame dimension differs from the modes");
    out.frames.push_back(modes * (modes.transpose() * frame));
  }
  return out;
}

ErrorMetrics error_metrics(const SnapshotStream& truth,
                           const SnapshotStream& approx,
                           const SnapshotStream& projected) {
  const std::size_t n = truth.frames.size();
  if (approx.frames.size() != n || projected.frames.size() != n)
    throw std::invalid_argument("metric streams differ in length");

  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  ErrorMetrics metrics;
  metrics.total.reserve(n);
  metrics.projection.reserve(n);
  metrics.fit_excess.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd& u = truth.frames[i];
    const Eigen::VectorXd& a = approx.frames[i];
    const Eigen::VectorXd& p = projected.frames[i];
    if (a.size() != u.size() || p.size() != u.size())
      throw std::invalid_argument("metric streams differ in dimension");
    const double truth_norm = u.norm();
    const double projected_norm = p.norm();
    const double total_gap = (a - u).norm();
    metrics.total.push_back(
        truth_norm == 0.0 ? kNan : 100.0 * total_gap / truth_norm);
    metrics.projection.push_back(
        projected_norm == 0.0 ? kNan : 100.0 * (a - p).norm() / projected_norm);
    metrics.fit_excess.push_back(
        truth_norm == 0.0
            ? kNan
            : 100.0 * (total_gap - (u - p).norm()) / truth_norm);
  }
  return metrics;
}

}  // namespace swsindy
