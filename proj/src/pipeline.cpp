#include "swsindy/pipeline.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "swsindy/error.hpp"
#include "swsindy/quadrature.hpp"
#include "swsindy/wsindy.hpp"

namespace swsindy {

namespace {

void validate(const PipelineConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt))
    throw ConfigError("snapshot spacing must be positive and finite");
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon))
    throw ConfigError("test dictionary horizon must be positive and finite");
  if (config.test_pair_count < 0)
    throw ConfigError("test dictionary pair count must be nonnegative");
  if (config.degree < 0) throw ConfigError("dictionary degree must be nonnegative");
  if (config.restart_stride < 0)
    throw ConfigError("restart stride must be nonnegative");
  if (!config.pod_enabled) return;
  if (config.window < 1) throw ConfigError("seed window must hold at least one snapshot");
  if (config.eps_spectral < 0.0 || !std::isfinite(config.eps_spectral))
    throw ConfigError("spectral threshold must be nonnegative and finite");
  if (!(config.eps_residual > 0.0) || !std::isfinite(config.eps_residual))
    throw ConfigError("residual threshold must be positive and finite");
  if (config.reinit.enabled)
    throw ConfigError(
        "basis re-seeding discards already closed segments and cannot be "
        "combined with segmented compression");
}

bool restart_due(std::int64_t snapshot, std::int64_t stride) {
  if (snapshot == 1) return true;
  return stride > 0 && (snapshot - 1) % stride == 0;
}

// One trapezoid-weighted weak-form segment.  Opening a segment charges the
// first snapshot half a step; closing repairs the overshoot on the last one,
// so a single-snapshot segment nets zero weight and zero boundary terms.
class OpenSegment {
 public:
  OpenSegment(const FourierTestBasis& test, const MonomialBasis& basis,
              std::int64_t first_snapshot, double t, const Eigen::VectorXd& nu,
              double dt)
      : acc_(test, basis, nu.size()),
        weights_(dt),
        first_(first_snapshot),
        last_t_(t),
        last_nu_(nu) {
    acc_.begin_segment(t, nu);
    acc_.update(t, nu, weights_.next());
  }

  void feed(double t, const Eigen::VectorXd& nu) {
    acc_.update(t, nu, weights_.next());
    last_t_ = t;
    last_nu_ = nu;
  }

  ProblemSegment close(std::int64_t last_snapshot) {
    acc_.update(last_t_, last_nu_, weights_.closing_correction());
    acc_.end_segment(last_t_, last_nu_);
    return {acc_.features(), acc_.targets(), first_, last_snapshot};
  }

 private:
  WeakFormAccumulator acc_;
  TrapezoidWeights weights_;
  std::int64_t first_;
  double last_t_;
  Eigen::VectorXd last_nu_;
};

// Bookkeeping shared by both projection paths.
struct Recorder {
  const PipelineConfig& config;
  std::vector<RestartSample> restarts;
  std::vector<RestartSample> seams;
  std::vector<RestartSample> temporal;

  // A seam sample already stores the state at its snapshot, so a
  // stride-coincident restart there would be redundant and is skipped.
  void note(std::int64_t snapshot, const Eigen::VectorXd& nu, bool seam) {
    if (config.record_temporal) temporal.push_back({snapshot, nu});
    if (seam)
      seams.push_back({snapshot, nu});
    else if (restart_due(snapshot, config.restart_stride))
      restarts.push_back({snapshot, nu});
  }
};

double snapshot_time(std::int64_t snapshot, double dt) {
  return static_cast<double>(snapshot - 1) * dt;
}

void check_horizon(double t, const FourierTestBasis& test) {
  if (t <= test.horizon() + test.boundary_slack()) return;
  std::ostringstream msg;
  msg << "snapshot at t = " << t << " falls outside the test dictionary horizon "
      << test.horizon();
  throw ConfigError(msg.str());
}

CompressionResult run_identity(SnapshotSource& source,
                               const PipelineConfig& config,
                               const FourierTestBasis& test) {
  Recorder rec{config, {}, {}, {}};
  std::optional<MonomialBasis> basis;
  std::optional<OpenSegment> segment;
  Eigen::Index state_dim = 0;
  std::int64_t n = 0;
  while (auto frame = source()) {
    ++n;
    const double t = snapshot_time(n, config.dt);
    check_horizon(t, test);
    if (n == 1) {
      state_dim = frame->size();
      basis.emplace(static_cast<int>(state_dim), config.policy, config.degree);
      segment.emplace(test, *basis, 1, t, *frame, config.dt);
    } else {
      segment->feed(t, *frame);
    }
    rec.note(n, *frame, false);
  }
  if (n == 0) throw ConfigError("snapshot stream is empty");

  std::vector<ProblemSegment> segments;
  segments.push_back(segment->close(n));
  std::vector<std::int64_t> mode_birth(static_cast<std::size_t>(state_dim), 1);

  return CompressionResult{
      ProblemSet{std::move(*basis), test, std::move(segments),
                 std::move(mode_birth), config.dt, n, false},
      Eigen::MatrixXd(0, 0),
      std::move(rec.restarts),
      std::move(rec.seams),
      config.restart_stride,
      state_dim,
      false,
      Eigen::VectorXd(0),
      {},
      {},
      std::move(rec.temporal)};
}

CompressionResult run_projected(SnapshotSource& source,
                                const PipelineConfig& config,
                                const FourierTestBasis& test) {
  Recorder rec{config, {}, {}, {}};
  StreamingPod pod(config.window, config.eps_spectral, config.eps_residual,
                   config.reinit);
  pod.record_trace(config.record_trace);

  std::optional<MonomialBasis> basis;
  std::optional<OpenSegment> segment;
  std::vector<ProblemSegment> segments;
  std::vector<std::int64_t> mode_birth;
  Eigen::Index state_dim = 0;
  std::int64_t n = 0;
  bool truncated = false;

  // The temporal coefficients of the buffered window become known all at once
  // when the seed factorization completes; replay them in stream order.
  auto feed_seed_window = [&] {
    const Eigen::MatrixXd& seed = pod.window_seed();
    basis.emplace(static_cast<int>(seed.rows()), config.policy, config.degree);
    mode_birth.assign(static_cast<std::size_t>(seed.rows()), 1);
    for (Eigen::Index j = 0; j < seed.cols(); ++j) {
      const std::int64_t snap = j + 1;
      const double t = snapshot_time(snap, config.dt);
      const Eigen::VectorXd nu = seed.col(j);
      if (j == 0)
        segment.emplace(test, *basis, 1, t, nu, config.dt);
      else
        segment->feed(t, nu);
      rec.note(snap, nu, false);
    }
  };

  while (auto frame = source()) {
    ++n;
    const double t = snapshot_time(n, config.dt);
    check_horizon(t, test);
    if (n == 1) state_dim = frame->size();

    const auto event = pod.push(*frame);
    if (!pod.seeded()) continue;
    if (event && event->kind == PodEvent::Kind::kSeeded) {
      feed_seed_window();
      continue;
    }

    if (event && event->kind == PodEvent::Kind::kModeAdded) {
      // The segment with the old dictionary ends at the previous snapshot;
      // this one reopens the weak form in the grown coordinates.
      segments.push_back(segment->close(n - 1));
      basis->extend(static_cast<int>(pod.basis().mode_count()));
      mode_birth.push_back(n);
      const Eigen::VectorXd nu = pod.basis().project(*frame);
      segment.emplace(test, *basis, n, t, nu, config.dt);
      rec.note(n, nu, true);
    } else {
      const Eigen::VectorXd nu = pod.basis().project(*frame);
      segment->feed(t, nu);
      rec.note(n, nu, false);
    }
  }
  if (n == 0) throw ConfigError("snapshot stream is empty");
  if (!pod.seeded()) {
    pod.force_seed();
    truncated = true;
    feed_seed_window();
  }
  segments.push_back(segment->close(n));

  return CompressionResult{
      ProblemSet{std::move(*basis), test, std::move(segments),
                 std::move(mode_birth), config.dt, n, true},
      pod.basis().modes(),
      std::move(rec.restarts),
      std::move(rec.seams),
      config.restart_stride,
      state_dim,
      truncated,
      pod.window_singular_values(),
      pod.residual_trace(),
      pod.mode_count_trace(),
      std::move(rec.temporal)};
}

}  // namespace

Eigen::Index ProblemSet::feature_entry_count() const {
  Eigen::Index total = 0;
  for (const ProblemSegment& s : segments) total += s.features.size();
  return total;
}

Eigen::Index ProblemSet::target_entry_count() const {
  Eigen::Index total = 0;
  for (const ProblemSegment& s : segments) total += s.targets.size();
  return total;
}

CompressionResult process_stream(SnapshotSource source,
                                 const PipelineConfig& config) {
  validate(config);
  FourierTestBasis test(config.test_pair_count, config.horizon);
  return config.pod_enabled ? run_projected(source, config, test)
                            : run_identity(source, config, test);
}

BlockSystem build_block_system(const ProblemSet& problems) {
  const auto& segments = problems.segments;
  if (segments.empty())
    throw std::invalid_argument("problem set holds no segments");
  const Eigen::Index k = segments.front().features.rows();
  const Eigen::Index n_segments = static_cast<Eigen::Index>(segments.size());
  const Eigen::Index width = segments.back().features.cols();
  const Eigen::Index modes = segments.back().targets.cols();

  BlockSystem system;
  system.block_rows = k;
  system.features = Eigen::MatrixXd::Zero(n_segments * k, width);
  system.segment_cols.reserve(static_cast<std::size_t>(n_segments));
  for (Eigen::Index m = 0; m < n_segments; ++m) {
    const ProblemSegment& s = segments[static_cast<std::size_t>(m)];
    if (s.features.rows() != k || s.targets.rows() != k)
      throw std::invalid_argument("segments disagree on test dictionary size");
    if (m > 0) {
      const ProblemSegment& prev = segments[static_cast<std::size_t>(m - 1)];
      if (s.features.cols() < prev.features.cols() ||
          s.targets.cols() < prev.targets.cols())
        throw std::invalid_argument("segment dictionaries must only grow");
    }
    system.features.block(m * k, 0, k, s.features.cols()) = s.features;
    system.segment_cols.push_back(s.features.cols());
  }

  // A mode contributes target rows only from the segment it first appears in;
  // earlier segments never observed it.
  system.targets.reserve(static_cast<std::size_t>(modes));
  system.birth_segment.reserve(static_cast<std::size_t>(modes));
  for (Eigen::Index mode = 0; mode < modes; ++mode) {
    Eigen::Index birth = 0;
    while (segments[static_cast<std::size_t>(birth)].targets.cols() <= mode)
      ++birth;
    Eigen::VectorXd stacked((n_segments - birth) * k);
    for (Eigen::Index m = birth; m < n_segments; ++m)
      stacked.segment((m - birth) * k, k) =
          segments[static_cast<std::size_t>(m)].targets.col(mode);
    system.targets.push_back(std::move(stacked));
    system.birth_segment.push_back(static_cast<int>(birth));
  }
  return system;
}

std::vector<SparseCoefficients> solve_block_system(
    const BlockSystem& system, const std::vector<FitConfig>& configs) {
  const std::size_t modes = system.targets.size();
  if (configs.size() != 1 && configs.size() != modes)
    throw ConfigError(
        "fit configuration must be shared or given once per mode");

  std::vector<SparseCoefficients> fits;
  fits.reserve(modes);
  for (std::size_t mode = 0; mode < modes; ++mode) {
    const FitConfig& cfg = configs.size() == 1 ? configs.front() : configs[mode];
    const Eigen::Index skip = system.birth_segment[mode] * system.block_rows;
    const Eigen::MatrixXd rows =
        system.features.bottomRows(system.features.rows() - skip);
    fits.push_back(stlsq(rows, system.targets[mode], cfg));
  }
  return fits;
}

}  // namespace swsindy
