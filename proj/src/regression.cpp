#include "swsindy/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace swsindy {

Eigen::VectorXd ridge_solve(const Eigen::Ref<const Eigen::MatrixXd>& features,
                            const Eigen::Ref<const Eigen::VectorXd>& targets,
                            double lambda) {
  if (features.rows() != targets.size())
    throw std::invalid_argument("feature rows do not match target length");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("ridge penalty must be non-negative");
  const Eigen::Index n = features.rows();
  const Eigen::Index j = features.cols();
  if (lambda == 0.0)
    return features.colPivHouseholderQr().solve(targets);
  Eigen::MatrixXd stacked(n + j, j);
  stacked.topRows(n) = features;
  stacked.bottomRows(j) =
      std::sqrt(lambda) * Eigen::MatrixXd::Identity(j, j);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + j);
  rhs.head(n) = targets;
  return stacked.colPivHouseholderQr().solve(rhs);
}

SparseCoefficients stlsq(const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const Eigen::Ref<const Eigen::VectorXd>& targets,
                         const FitConfig& config) {
  if (features.rows() != targets.size())
    throw std::invalid_argument("feature rows do not match target length");
  if (config.threshold < 0.0)
    throw std::invalid_argument("threshold must be non-negative");
  const Eigen::Index j = features.cols();
  const int budget =
      config.max_iterations > 0 ? config.max_iterations : static_cast<int>(j);

  std::vector<Eigen::Index> active(static_cast<std::size_t>(j));
  for (Eigen::Index c = 0; c < j; ++c) active[static_cast<std::size_t>(c)] = c;

  SparseCoefficients result;
  result.dense = Eigen::VectorXd::Zero(j);

  Eigen::VectorXd coeffs;
  while (true) {
    if (active.empty()) {
      result.emptied = true;
      break;
    }
    Eigen::MatrixXd sub(features.rows(),
                        static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c)
      sub.col(static_cast<Eigen::Index>(c)) = features.col(active[c]);
    coeffs = ridge_solve(sub, targets, config.lambda);

    std::size_t weakest = 0;
    for (std::size_t c = 1; c < active.size(); ++c)
      if (std::abs(coeffs(static_cast<Eigen::Index>(c))) <
          std::abs(coeffs(static_cast<Eigen::Index>(weakest))))
        weakest = c;
    const bool below =
        std::abs(coeffs(static_cast<Eigen::Index>(weakest))) <
        config.threshold;
    if (!below || result.iterations >= budget) {
      for (std::size_t c = 0; c < active.size(); ++c)
        result.dense(active[c]) = coeffs(static_cast<Eigen::Index>(c));
      result.support = active;
      break;
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(weakest));
    ++result.iterations;
  }
  return result;
}

}  // namespace swsindy
