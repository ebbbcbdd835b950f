#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace swsindy {

// Orthonormal spatial basis grown one mode at a time.  Appending never
// reorders or rescales existing modes, so temporal coefficient indices stay
// aligned across growth events.
class PodBasis {
 public:
  PodBasis() = default;
  explicit PodBasis(Eigen::MatrixXd modes);

  Eigen::Index state_dim() const { return modes_.rows(); }
  Eigen::Index mode_count() const { return modes_.cols(); }
  const Eigen::MatrixXd& modes() const { return modes_; }

  // Temporal coefficients P^T v.
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  // Relative rejection ||(I - P P^T) v|| / ||v||; zero vectors score zero.
  double residual(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  // Appends the normalized rejection of v when its residual exceeds
  // eps_residual; returns whether a mode was added.
  bool maybe_add_mode(const Eigen::Ref<const Eigen::VectorXd>& v,
                      double eps_residual);

 private:
  Eigen::MatrixXd modes_;  // S x L
};

struct WindowSvd {
  PodBasis basis;
  Eigen::VectorXd singular_values;  // all window singular values, descending
  Eigen::MatrixXd temporal_seed;    // L x p0: scaled right factor Sigma V^T
};

// Thin SVD of a seed window whose columns are snapshots; keeps every mode
// with a singular value >= eps_spectral.  Mode signs are canonicalized so the
// entry of largest magnitude is positive.  Throws ConfigError when the
// threshold rejects the whole window.
WindowSvd init_from_window(const Eigen::Ref<const Eigen::MatrixXd>& window,
                           double eps_spectral);

struct ReinitPolicy {
  bool enabled = false;
  Eigen::Index mode_cap = 0;   // re-seed once the count exceeds this
  double eps_residual = 0.15;  // relaxed threshold applied afterwards
};

struct PodEvent {
  enum class Kind { kSeeded, kModeAdded, kReinitStarted, kReinitCompleted };
  Kind kind;
  std::int64_t snapshot;    // 1-based index that produced the event
  Eigen::Index mode_count;  // count after the event
};

// One-pass basis tracker: buffers the first `window` snapshots, seeds by SVD,
// then appends at most one mode per later snapshot when the residual exceeds
// the threshold.  Crossing the reinit cap discards the basis, collects a
// fresh window starting at the offending snapshot, re-seeds, and relaxes the
// residual threshold; residual checks stay suspended while collecting.
class StreamingPod {
 public:
  StreamingPod(Eigen::Index window, double eps_spectral, double eps_residual,
               ReinitPolicy reinit = {});

  std::optional<PodEvent> push(const Eigen::Ref<const Eigen::VectorXd>& v);

  // Seeds from a partially filled initial window (stream ended early).
  // Only valid before the first seeding.
  PodEvent force_seed();

  bool seeded() const { return seeded_; }
  bool collecting() const { return collecting_; }
  std::int64_t snapshots_seen() const { return seen_; }
  Eigen::Index window() const { return window_; }
  double residual_threshold() const { return eps_residual_; }

  const PodBasis& basis() const;
  // Temporal seed and spectrum of the most recent window SVD.
  const Eigen::MatrixXd& window_seed() const;
  const Eigen::VectorXd& window_singular_values() const;
  const std::vector<std::int64_t>& birth_indices() const {
    return birth_indices_;
  }

  void record_trace(bool on) { record_trace_ = on; }
  const std::vector<double>& residual_trace() const { return residual_trace_; }
  const std::vector<int>& mode_count_trace() const {
    return mode_count_trace_;
  }

 private:
  std::optional<PodEvent> seed_from_buffer();
  void trace(double residual);

  Eigen::Index window_;
  double eps_spectral_;
  double eps_residual_;
  ReinitPolicy reinit_;

  Eigen::MatrixXd buffer_;  // S x window, filled while collecting
  Eigen::Index fill_ = 0;
  bool collecting_ = true;
  bool seeded_ = false;
  bool reinit_pending_ = false;  // current collection is a re-seed
  std::int64_t seen_ = 0;

  PodBasis basis_;
  Eigen::MatrixXd window_seed_;
  Eigen::VectorXd window_singular_values_;
  std::vector<std::int64_t> birth_indices_;

  bool record_trace_ = false;
  std::vector<double> residual_trace_;
  std::vector<int> mode_count_trace_;
};

}  // namespace swsindy
