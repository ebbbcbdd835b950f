#include "swsindy/bases.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

namespace {

using swsindy::DegreePolicy;
using swsindy::FourierTestBasis;
using swsindy::MonomialBasis;

long binom(int n, int k) {
  long v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

TEST(MonomialBasis, MaxDegreeOneOrderingAndValues) {
  MonomialBasis basis(3, DegreePolicy::kMaxDegree, 1);
  ASSERT_EQ(basis.size(), 8);
  const std::vector<std::vector<int>> expected = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
      {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  EXPECT_EQ(basis.exponents(), expected);

  Eigen::VectorXd state(3);
  state << 1.0, 2.0, 3.0;
  const Eigen::VectorXd vals = basis.eval(state);
  Eigen::VectorXd want(8);
  want << 1, 1, 2, 3, 2, 3, 6, 6;
  EXPECT_TRUE(vals.isApprox(want));
}

TEST(MonomialBasis, TotalDegreeOrdering) {
  MonomialBasis basis(2, DegreePolicy::kTotalDegree, 2);
  const std::vector<std::vector<int>> expected = {
      {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(basis.exponents(), expected);

  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd vals = basis.eval(origin);
  EXPECT_DOUBLE_EQ(vals(0), 1.0);
  EXPECT_DOUBLE_EQ(vals.tail(5).norm(), 0.0);
}

TEST(MonomialBasis, TotalDegreeCounts) {
  for (int d : {3, 8, 14, 16}) {
    MonomialBasis basis(d, DegreePolicy::kTotalDegree, 2);
    EXPECT_EQ(basis.size(), binom(d + 2, 2));
  }
  MonomialBasis cubic(3, DegreePolicy::kTotalDegree, 3);
  EXPECT_EQ(cubic.size(), binom(6, 3));
  MonomialBasis box(3, DegreePolicy::kMaxDegree, 2);
  EXPECT_EQ(box.size(), 27);
}

TEST(MonomialBasis, ExtensionPreservesExistingColumns) {
  MonomialBasis basis(14, DegreePolicy::kTotalDegree, 2);
  ASSERT_EQ(basis.size(), 120);
  const auto before = basis.exponents();

  const Eigen::Index added = basis.extend(15);
  EXPECT_EQ(added, 16);
  EXPECT_EQ(basis.size(), 136);
  for (std::size_t j = 0; j < before.size(); ++j) {
    auto padded = before[j];
    padded.resize(15, 0);
    EXPECT_EQ(basis.exponents()[j], padded) << "column " << j;
  }
  // Every appended term involves the new coordinate.
  for (std::size_t j = 120; j < 136; ++j)
    EXPECT_NE(basis.exponents()[j][14], 0);

  EXPECT_EQ(basis.extend(16), 17);
  EXPECT_EQ(basis.size(), 153);
}

TEST(MonomialBasis, ExtendedEvalAgreesOnOldColumns) {
  std::mt19937 rng(23u);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  MonomialBasis old_basis(5, DegreePolicy::kTotalDegree, 2);
  MonomialBasis new_basis = old_basis;
  new_basis.extend(7);

  Eigen::VectorXd state(5);
  for (int i = 0; i < 5; ++i) state(i) = dist(rng);
  Eigen::VectorXd extended(7);
  extended.head(5) = state;
  extended(5) = dist(rng);
  extended(6) = dist(rng);

  const Eigen::VectorXd old_vals = old_basis.eval(state);
  const Eigen::VectorXd new_vals = new_basis.eval(extended);
  for (Eigen::Index j = 0; j < old_basis.size(); ++j)
    EXPECT_DOUBLE_EQ(new_vals(j), old_vals(j));
}

TEST(MonomialBasis, ExtensionDiffersFromFreshConstructionOrdering) {
  // Re-sorting on extension would move u3 ahead of u1^2; appending keeps all
  // original indices stable.  The fresh basis interleaves instead.
  MonomialBasis extended(2, DegreePolicy::kTotalDegree, 2);
  extended.extend(3);
  MonomialBasis fresh(3, DegreePolicy::kTotalDegree, 2);
  ASSERT_EQ(extended.size(), fresh.size());
  EXPECT_NE(extended.exponents(), fresh.exponents());
  EXPECT_EQ(extended.exponents()[3], (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(fresh.exponents()[3], (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(fresh.exponents()[4], (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(extended.exponents()[4], (std::vector<int>{1, 1, 0}));
  EXPECT_EQ(extended.exponents()[6], (std::vector<int>{0, 0, 1}));
}

TEST(MonomialBasis, DescriptorRoundTripReproducesOrdering) {
  MonomialBasis basis(2, DegreePolicy::kTotalDegree, 2);
  basis.extend(3);
  basis.extend(5);
  const MonomialBasis rebuilt =
      MonomialBasis::from_descriptor(basis.descriptor());
  EXPECT_EQ(rebuilt.exponents(), basis.exponents());
  EXPECT_EQ(rebuilt.dim(), basis.dim());
}

TEST(MonomialBasis, ArgumentValidation) {
  EXPECT_THROW(MonomialBasis(0, DegreePolicy::kTotalDegree, 2),
               std::invalid_argument);
  EXPECT_THROW(MonomialBasis(3, DegreePolicy::kTotalDegree, -1),
               std::invalid_argument);
  MonomialBasis basis(3, DegreePolicy::kMaxDegree, 1);
  EXPECT_THROW(basis.extend(3), std::invalid_argument);
  EXPECT_THROW(basis.extend(2), std::invalid_argument);
  EXPECT_THROW(basis.eval(Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST(FourierTestBasis, SizeAndEndpointValues) {
  const double T = 10.0;
  FourierTestBasis basis(20, T);
  ASSERT_EQ(basis.size(), 41);

  const Eigen::VectorXd at0 = basis.eval(0.0);
  const double amp = std::sqrt(2.0 / T);
  for (int k = 0; k < 20; ++k) {
    EXPECT_NEAR(at0(k), 0.0, 1e-14);            // sines
    EXPECT_NEAR(at0(20 + k), amp, 1e-14);       // cosines
  }
  EXPECT_NEAR(at0(40), 1.0 / std::sqrt(T), 1e-15);

  // All members are T-periodic, so the stream endpoints agree.
  const Eigen::VectorXd atT = basis.eval(T);
  EXPECT_TRUE(atT.isApprox(at0, 1e-12));
}

TEST(FourierTestBasis, DerivativeMatchesFiniteDifference) {
  const double T = 10.0;
  FourierTestBasis basis(20, T);
  std::mt19937 rng(5u);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  const double h = 1e-5 * T;
  for (int trial = 0; trial < 10; ++trial) {
    const double t = dist(rng) * T;
    const Eigen::VectorXd fd =
        (basis.eval(t + h) - basis.eval(t - h)) / (2 * h);
    const Eigen::VectorXd an = basis.eval_derivative(t);
    const double scale = an.cwiseAbs().maxCoeff();
    EXPECT_LE((fd - an).cwiseAbs().maxCoeff(), 1e-6 * scale);
  }
  // The constant member has zero slope.
  EXPECT_DOUBLE_EQ(basis.eval_derivative(0.3 * T)(40), 0.0);
}

TEST(FourierTestBasis, MembersAreOrthonormal) {
  const double T = 4.0;
  FourierTestBasis basis(6, T);
  const int n = 4097;
  const double dt = T / (n - 1);
  const Eigen::Index K = basis.size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd psi(K);
  for (int i = 0; i < n; ++i) {
    basis.eval(i * dt, psi);
    const double w = (i == 0 || i == n - 1) ? 0.5 * dt : dt;
    gram += w * psi * psi.transpose();
  }
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff(),
            1e-4);
}

TEST(FourierTestBasis, DomainChecksWithEndpointSlack) {
  const double T = 10.0;
  FourierTestBasis basis(3, T);
  const double slack = basis.boundary_slack();
  EXPECT_NO_THROW(basis.eval(T + 0.5 * slack));
  EXPECT_NO_THROW(basis.eval(-0.5 * slack));
  EXPECT_THROW(basis.eval(T + 10 * slack), std::invalid_argument);
  EXPECT_THROW(basis.eval(-10 * slack), std::invalid_argument);
  EXPECT_THROW(basis.eval(T + 1.0), std::invalid_argument);
}

TEST(FourierTestBasis, ConstantOnlyBasis) {
  FourierTestBasis basis(0, 2.0);
  ASSERT_EQ(basis.size(), 1);
  EXPECT_NEAR(basis.eval(1.0)(0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(basis.eval_derivative(1.0)(0), 0.0);
}

TEST(FourierTestBasis, DescriptorRoundTrip) {
  FourierTestBasis basis(99, 1e4);
  const FourierTestBasis rebuilt =
      FourierTestBasis::from_descriptor(basis.descriptor());
  EXPECT_EQ(rebuilt.pair_count(), 99);
  EXPECT_DOUBLE_EQ(rebuilt.horizon(), 1e4);
}

TEST(FourierTestBasis, ArgumentValidation) {
  EXPECT_THROW(FourierTestBasis(-1, 1.0), std::invalid_argument);
  EXPECT_THROW(FourierTestBasis(3, 0.0), std::invalid_argument);
  EXPECT_THROW(FourierTestBasis(3, -2.0), std::invalid_argument);
}

}  // namespace
