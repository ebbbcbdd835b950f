#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace swsindy {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  // 0: derived from the first slope
  std::int64_t max_steps = 50'000'000;
};

// Writes dy/dt into the third argument.
using OdeRhs =
    std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Adaptive Dormand-Prince 5(4) integrator.  The step size persists across
// advance() calls so grid-marching drivers keep their adapted step, while the
// cached slope is refreshed whenever the caller may have replaced the state.
// Failure to continue (step underflow, non-finite state, step budget) throws
// ReconstructionError carrying the failing time.
class AdaptiveRk45 {
 public:
  explicit AdaptiveRk45(OdeRhs rhs, OdeOptions options = {});

  // Advances y in place from t0 to t1 >= t0.
  void advance(double t0, double t1, Eigen::VectorXd& y);

  std::int64_t steps_taken() const noexcept { return steps_; }
  std::int64_t steps_rejected() const noexcept { return rejected_; }

 private:
  double error_norm(const Eigen::VectorXd& y, const Eigen::VectorXd& y_new,
                    const Eigen::VectorXd& err) const;

  OdeRhs rhs_;
  OdeOptions options_;
  double h_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t rejected_ = 0;
  Eigen::VectorXd k_[7];
  Eigen::VectorXd scratch_;
};

// One-shot convenience wrapper.
Eigen::VectorXd integrate(const OdeRhs& rhs, Eigen::VectorXd y0, double t0,
                          double t1, const OdeOptions& options = {});

}  // namespace swsindy
