#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "swsindy/bases.hpp"
#include "swsindy/quadrature.hpp"
#include "swsindy/stream.hpp"

namespace swsindy {

// One-pass weak-form accumulator over one stream segment [t_a, t_b].
// Feeding snapshots with external quadrature weights w_n builds
//   features(k, j) = sum_n w_n phi_j(u_n) psi_k(t_n)
//   targets(k, s)  = -sum_n w_n u_n(s) dpsi_k(t_n) + u_n(s) psi_k(t_n)|_a^b
// so after end_segment() each target column approximates the weak derivative
// inner products <du_s/dt, psi_k> over the segment, integrated by parts.
// The boundary terms make this valid for test functions that do not vanish
// at the segment ends.
//
// Memory holds only the two matrices and per-snapshot scratch, independent of
// segment length.  Distinct accumulators share no state.
class WeakFormAccumulator {
 public:
  WeakFormAccumulator(FourierTestBasis test_basis, MonomialBasis projection,
                      Eigen::Index state_dim);

  // Opening boundary term at the segment's first snapshot.  Does not apply a
  // quadrature weight; pair it with an update() at the same snapshot.
  void begin_segment(double t, const Eigen::Ref<const Eigen::VectorXd>& state);
  void update(double t, const Eigen::Ref<const Eigen::VectorXd>& state,
              double weight);
  // Closing boundary term; seals the accumulator.
  void end_segment(double t, const Eigen::Ref<const Eigen::VectorXd>& state);

  bool sealed() const noexcept { return stage_ == Stage::kSealed; }
  std::int64_t update_count() const noexcept { return updates_; }

  const Eigen::MatrixXd& features() const { return features_; }  // K x J
  const Eigen::MatrixXd& targets() const { return targets_; }    // K x S

  Eigen::Index test_size() const { return features_.rows(); }
  Eigen::Index projection_size() const { return features_.cols(); }
  Eigen::Index state_dim() const { return targets_.cols(); }

  const FourierTestBasis& test_basis() const { return test_; }
  const MonomialBasis& projection_basis() const { return projection_; }

  // Allocated footprint in bytes; constant in the number of updates.
  std::size_t byte_footprint() const;

 private:
  enum class Stage { kFresh, kOpen, kSealed };

  void require(Stage stage, const char* what) const;
  void check_state(const Eigen::Ref<const Eigen::VectorXd>& state) const;

  FourierTestBasis test_;
  MonomialBasis projection_;
  Eigen::MatrixXd features_;
  Eigen::MatrixXd targets_;
  Eigen::VectorXd psi_;
  Eigen::VectorXd dpsi_;
  Eigen::VectorXd phi_;
  Stage stage_ = Stage::kFresh;
  std::int64_t updates_ = 0;
};

struct AssembledProblem {
  Eigen::MatrixXd features;  // K x J
  Eigen::MatrixXd targets;   // K x S
  std::int64_t n_snapshots = 0;
};

// Streams a whole snapshot sequence through a single trapezoid-weighted
// segment: first sample at weight dt/2, later samples at dt, with the
// overshoot on the final sample repaired once the stream end is known.
AssembledProblem assemble_stream(SnapshotSource source, double dt,
                                 const FourierTestBasis& test_basis,
                                 const MonomialBasis& projection);

}  // namespace swsindy
