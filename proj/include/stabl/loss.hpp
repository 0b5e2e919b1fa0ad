#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace stabl {

// One-hot importance-weighted loss estimate: `value` at `arm`, zero elsewhere.
// Kept sparse in hot paths; densified only for tests.
struct SparseLossEstimate {
  int arm = 0;
  double value = 0.0;
  int n = 1;
};

inline SparseLossEstimate sparse_loss_estimate(int arm, double observed_loss,
                                               double prob, int n) {
  if (prob <= 0.0) {
    throw std::invalid_argument("sparse_loss_estimate: probability must be > 0");
  }
  if (prob > 1.0) {
    throw std::invalid_argument("sparse_loss_estimate: probability must be <= 1");
  }
  if (observed_loss < 0.0 || observed_loss > 1.0) {
    throw std::invalid_argument("sparse_loss_estimate: loss must lie in [0, 1]");
  }
  if (arm < 0 || arm >= n) {
    throw std::invalid_argument("sparse_loss_estimate: arm out of range");
  }
  return SparseLossEstimate{arm, observed_loss / prob, n};
}

inline Eigen::VectorXd to_dense(const SparseLossEstimate& estimate) {
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(estimate.n);
  dense[estimate.arm] = estimate.value;
  return dense;
}

}  // namespace stabl
