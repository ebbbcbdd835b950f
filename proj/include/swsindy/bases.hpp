#pragma once

#include <Eigen/Dense>

#include <json.hpp>
#include <string>
#include <vector>

namespace swsindy {

enum class DegreePolicy {
  kTotalDegree,  // sum of exponents <= degree
  kMaxDegree,    // every exponent <= degree
};

std::string to_string(DegreePolicy policy);
DegreePolicy degree_policy_from_string(const std::string& name);

// Multivariate monomial dictionary over a state vector.  Terms are ordered by
// total degree, ties broken by descending lexicographic exponent tuple, so a
// degree-1 max-degree basis in three variables reads
//   1, u1, u2, u3, u1*u2, u1*u3, u2*u3, u1*u2*u3.
// extend() appends the terms introduced by new trailing state dimensions
// without disturbing existing column indices, which keeps coefficient vectors
// from earlier fits aligned.
class MonomialBasis {
 public:
  MonomialBasis(int dim, DegreePolicy policy, int degree);

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  DegreePolicy policy() const noexcept { return policy_; }
  Eigen::Index size() const {
    return static_cast<Eigen::Index>(exponents_.size());
  }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  // Grows the state dimension to new_dim (> dim()) and appends the new
  // terms; returns the number of appended terms.
  Eigen::Index extend(int new_dim);

  void eval(const Eigen::Ref<const Eigen::VectorXd>& state,
            Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& state) const;

  // Descriptor round trip reproduces the exact term ordering, including the
  // extension history.
  nlohmann::json descriptor() const;
  static MonomialBasis from_descriptor(const nlohmann::json& desc);

 private:
  int dim_;
  DegreePolicy policy_;
  int degree_;
  std::vector<int> dim_history_;
  std::vector<std::vector<int>> exponents_;
};

// Orthonormal Fourier dictionary on [0, T]:
//   sqrt(2/T) sin(2 pi k t / T),  k = 1..pair_count,
//   sqrt(2/T) cos(2 pi k t / T),  k = 1..pair_count,
//   1 / sqrt(T),
// in that member order, size 2*pair_count + 1.  Evaluations accept t within
// a slack of 1e-9 * max(T, 1) beyond the endpoints and throw otherwise.
class FourierTestBasis {
 public:
  FourierTestBasis(int pair_count, double horizon);

  int pair_count() const noexcept { return pair_count_; }
  double horizon() const noexcept { return horizon_; }
  Eigen::Index size() const { return 2 * pair_count_ + 1; }
  double boundary_slack() const;

  void eval(double t, Eigen::Ref<Eigen::VectorXd> out) const;
  void eval_derivative(double t, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd eval(double t) const;
  Eigen::VectorXd eval_derivative(double t) const;

  nlohmann::json descriptor() const;
  static FourierTestBasis from_descriptor(const nlohmann::json& desc);

 private:
  void check_domain(double t) const;

  int pair_count_;
  double horizon_;
};

}  // namespace swsindy
