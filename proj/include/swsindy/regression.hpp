#pragma once

#include <Eigen/Dense>

#include <vector>

namespace swsindy {

struct FitConfig {
  double lambda = 0.0;     // ridge penalty weight
  double threshold = 0.0;  // smallest coefficient magnitude kept
  int max_iterations = 0;  // pruning rounds; 0 means the feature count
};

struct SparseCoefficients {
  Eigen::VectorXd dense;              // full length, zero off the support
  std::vector<Eigen::Index> support;  // ascending column indices
  int iterations = 0;                 // pruning rounds performed
  bool emptied = false;               // every column fell below the threshold

  Eigen::Index nonzero_count() const {
    return static_cast<Eigen::Index>(support.size());
  }
};

// Least squares with an optional ridge penalty, solved as a stacked QR of
// [features; sqrt(lambda) I] so the penalty enters every solve identically.
Eigen::VectorXd ridge_solve(const Eigen::Ref<const Eigen::MatrixXd>& features,
                            const Eigen::Ref<const Eigen::VectorXd>& targets,
                            double lambda);

// Sequentially thresholded least squares.  Each round re-solves the ridge
// problem on the surviving columns and removes the single column whose
// coefficient magnitude is smallest and below the threshold (lowest index on
// ties).  Stops when every survivor clears the threshold, the support
// empties (emptied flag, not an error), or the iteration budget runs out.
SparseCoefficients stlsq(const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const Eigen::Ref<const Eigen::VectorXd>& targets,
                         const FitConfig& config);

}  // namespace swsindy
