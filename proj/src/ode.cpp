#include "swsindy/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "swsindy/error.hpp"

namespace swsindy {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
     -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Fifth-order weights equal the last tableau row (first-same-as-last), and
// kE holds the difference against the embedded fourth-order weights.
constexpr double kE[7] = {71.0 / 57600,       0.0,         -71.0 / 16695,
                          71.0 / 1920,        -17253.0 / 339200,
                          22.0 / 525,         -1.0 / 40};

}  // namespace

AdaptiveRk45::AdaptiveRk45(OdeRhs rhs, OdeOptions options)
    : rhs_(std::move(rhs)), options_(options) {
  if (!(options_.rel_tol > 0.0) || !(options_.abs_tol > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (options_.max_steps < 1)
    throw std::invalid_argument("step budget must be positive");
}

double AdaptiveRk45::error_norm(const Eigen::VectorXd& y,
                                const Eigen::VectorXd& y_new,
                                const Eigen::VectorXd& err) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double scale =
        options_.abs_tol +
        options_.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
    const double r = err(i) / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(y.size()));
}

void AdaptiveRk45::advance(double t0, double t1, Eigen::VectorXd& y) {
  if (t1 < t0) throw std::invalid_argument("integration must move forward");
  if (t1 == t0) return;
  const Eigen::Index dim = y.size();
  for (auto& k : k_) k.resize(dim);
  scratch_.resize(dim);

  double t = t0;
  rhs_(t, y, k_[0]);  // the caller may have replaced y since the last call
  if (!k_[0].allFinite() || !y.allFinite())
    throw ReconstructionError("non-finite state or slope", t);

  if (h_ <= 0.0) {
    if (options_.initial_step > 0.0) {
      h_ = options_.initial_step;
    } else {
      const double scale = options_.abs_tol +
                           options_.rel_tol * y.cwiseAbs().maxCoeff();
      const double slope = k_[0].cwiseAbs().maxCoeff();
      h_ = slope > 0.0 ? 0.01 * scale / slope : 1e-6 * (t1 - t0);
      h_ = std::min(std::max(h_, 1e-12 * (t1 - t0)), t1 - t0);
    }
  }

  Eigen::VectorXd y_new(dim), err(dim);
  while (t < t1) {
    if (steps_ + rejected_ > options_.max_steps)
      throw ReconstructionError("step budget exhausted", t);
    const double h_min =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
    double h = std::min(h_, t1 - t);
    if (h < h_min) h = h_min;
    const bool clipped = (h >= t1 - t);

    for (int stage = 1; stage < 7; ++stage) {
      scratch_ = y;
      for (int j = 0; j < stage; ++j)
        scratch_ += (h * kA[stage][j]) * k_[j];
      rhs_(t + kC[stage] * h, scratch_, k_[stage]);
    }
    // Stage 7 input equals the fifth-order result.
    y_new = scratch_;
    err.setZero();
    for (int j = 0; j < 7; ++j) err += (h * kE[j]) * k_[j];

    if (!y_new.allFinite() || !err.allFinite())
      throw ReconstructionError("solution became non-finite", t);

    const double norm = error_norm(y, y_new, err);
    if (norm <= 1.0) {
      t = clipped ? t1 : t + h;
      y.swap(y_new);
      k_[0].swap(k_[6]);  // first-same-as-last
      ++steps_;
      const double grow =
          norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
      h_ = h * std::min(5.0, std::max(0.2, grow));
    } else {
      ++rejected_;
      if (h <= h_min)
        throw ReconstructionError("step size underflow", t);
      h_ = h * std::max(0.2, 0.9 * std::pow(norm, -0.2));
    }
  }
}

Eigen::VectorXd integrate(const OdeRhs& rhs, Eigen::VectorXd y0, double t0,
                          double t1, const OdeOptions& options) {
  AdaptiveRk45 solver(rhs, options);
  solver.advance(t0, t1, y0);
  return y0;
}

}  // namespace swsindy
