#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "swsindy/bases.hpp"
#include "swsindy/pod.hpp"
#include "swsindy/regression.hpp"
#include "swsindy/stream.hpp"

namespace swsindy {

struct PipelineConfig {
  double dt = 0.0;
  double horizon = 0.0;     // T of the test dictionary
  int test_pair_count = 0;  // sine/cosine pairs; dictionary size 2k+1
  DegreePolicy policy = DegreePolicy::kTotalDegree;
  int degree = 2;

  bool pod_enabled = true;
  Eigen::Index window = 0;  // seed window length
  double eps_spectral = 0.0;
  double eps_residual = 0.1;
  ReinitPolicy reinit;  // accepted in config but rejected for compression

  std::int64_t restart_stride = 0;  // 0: record only the first snapshot
  bool record_trace = false;        // residual / mode-count diagnostics
  bool record_temporal = false;     // full temporal coefficients (tests)
};

// One closed weak-form block.  The segment covers snapshots
// [first_snapshot, last_snapshot]; a mode addition at snapshot n closes the
// running segment at n - 1 and the seam snapshot n opens the next one.
struct ProblemSegment {
  Eigen::MatrixXd features;  // K x J_m
  Eigen::MatrixXd targets;   // K x L_m
  std::int64_t first_snapshot = 0;
  std::int64_t last_snapshot = 0;
};

struct RestartSample {
  std::int64_t snapshot = 0;
  Eigen::VectorXd values;  // temporal coefficients at that snapshot
};

struct ProblemSet {
  MonomialBasis basis;          // final projection dictionary
  FourierTestBasis test_basis;  // shared across segments
  std::vector<ProblemSegment> segments;
  std::vector<std::int64_t> mode_birth;  // 1-based; seed modes are born at 1
  double dt = 0.0;
  std::int64_t n_snapshots = 0;
  bool pod_enabled = true;

  Eigen::Index mode_count() const {
    return static_cast<Eigen::Index>(mode_birth.size());
  }
  Eigen::Index feature_entry_count() const;
  Eigen::Index target_entry_count() const;
};

struct CompressionResult {
  ProblemSet problems;
  Eigen::MatrixXd spatial_modes;        // S x L; 0 x 0 when pod is disabled
  std::vector<RestartSample> restarts;  // snapshot 1 plus stride points
  std::vector<RestartSample> seams;     // one per added mode
  std::int64_t restart_stride = 0;
  Eigen::Index state_dim = 0;
  bool truncated_seed = false;  // stream ended inside the seed window
  Eigen::VectorXd seed_singular_values;

  std::vector<double> residual_trace;
  std::vector<int> mode_count_trace;
  std::vector<RestartSample> temporal_trace;
};

// Single-pass compression front end: tracks the basis, projects snapshots,
// and assembles one weak-form problem per constant-dimension segment.
CompressionResult process_stream(SnapshotSource source,
                                 const PipelineConfig& config);

// Segment problems stacked into one block lower-triangular feature matrix.
// Later segments use wider dictionaries; earlier row blocks are zero-padded
// on the right, which encodes that pre-extension segments never excite the
// appended terms.
struct BlockSystem {
  Eigen::MatrixXd features;              // (M+1)K x J_M
  std::vector<Eigen::VectorXd> targets;  // per mode, stacked from birth
  std::vector<int> birth_segment;        // per mode, 0-based segment index
  Eigen::Index block_rows = 0;           // K
  std::vector<Eigen::Index> segment_cols;

  Eigen::Index segment_count() const {
    return static_cast<Eigen::Index>(segment_cols.size());
  }
};

BlockSystem build_block_system(const ProblemSet& problems);

// Ridge-thresholded fit per mode over the rows from its birth segment down.
// `configs` holds either one shared entry or one entry per mode.
std::vector<SparseCoefficients> solve_block_system(
    const BlockSystem& system, const std::vector<FitConfig>& configs);

}  // namespace swsindy
