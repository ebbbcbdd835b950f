#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "swsindy/bases.hpp"
#include "swsindy/codec.hpp"
#include "swsindy/ode.hpp"
#include "swsindy/pipeline.hpp"
#include "swsindy/stream.hpp"

namespace swsindy {

// The fitted per-mode dynamics plus the stored samples that anchor them.
// Restart samples reset the whole live state when their snapshot is reached;
// seam samples do the same at mode births.  A mode holds exactly zero until
// the first stored sample at or after its birth supplies a value.
struct SurrogateModel {
  MonomialBasis basis;                        // over the final mode count
  std::vector<Eigen::VectorXd> coefficients;  // per mode, dense, basis width
  std::vector<std::int64_t> mode_birth;       // 1-based snapshot indices
  std::vector<RestartSample> restarts;
  std::vector<RestartSample> seams;
  double dt = 0.0;
  std::int64_t n_snapshots = 0;
  OdeOptions ode;

  Eigen::Index mode_count() const {
    return static_cast<Eigen::Index>(mode_birth.size());
  }
};

SurrogateModel surrogate_from_archive(const Archive& archive,
                                      const OdeOptions& ode = {});

// Integrates the surrogate dynamics across the original snapshot grid and
// returns the temporal coefficients as a mode_count x n_snapshots matrix.
// Unborn modes are pinned to zero, stored samples reset the state in place,
// and integration failures surface as ReconstructionError with the time.
Eigen::MatrixXd evolve_surrogate(const SurrogateModel& model);

// Emits one synthesized snapshot at a time: sink(n, modes * temporal.col).
// Never materializes the full field, so the caller chooses what to keep.
void synthesize(const Eigen::Ref<const Eigen::MatrixXd>& temporal,
                const Eigen::Ref<const Eigen::MatrixXd>& modes,
                const std::function<void(std::int64_t,
                                         const Eigen::VectorXd&)>& sink);

// Full decompression into memory.  With projection disabled the temporal
// coefficients already are the state and pass through unchanged.
SnapshotStream reconstruct_stream(const Archive& archive,
                                  const OdeOptions& ode = {});

// Projection of every frame onto the archive's spatial modes, the best
// approximation the stored basis allows; the yardstick the surrogate is
// measured against.
SnapshotStream project_stream(const SnapshotStream& truth,
                              const Eigen::Ref<const Eigen::MatrixXd>& modes);

// Per-snapshot percentages over the spatial Euclidean norm:
//   total:      100 |approx - truth| / |truth|
//   projection: 100 |approx - projected| / |projected|
//   fit_excess: 100 (|approx - truth| - |truth - projected|) / |truth|
// Entries are NaN where the denominator vanishes.
struct ErrorMetrics {
  std::vector<double> total;
  std::vector<double> projection;
  std::vector<double> fit_excess;
};

ErrorMetrics error_metrics(const SnapshotStream& truth,
                           const SnapshotStream& approx,
                           const SnapshotStream& projected);

}  // namespace swsindy
