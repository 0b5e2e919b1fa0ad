#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "stabl/rng.hpp"

namespace stabl {

inline constexpr double kDistributionTolerance = 1e-9;
inline constexpr double kWeightFloor = 1e-300;

// Probability vector over n arms; the currency between experts, the
// meta-learner, and the samplers. Construction validates the invariants.
class ArmDistribution {
 public:
  explicit ArmDistribution(Eigen::VectorXd probs) : probs_(std::move(probs)) {
    if (probs_.size() < 1) {
      throw std::invalid_argument("ArmDistribution: need at least one arm");
    }
    if ((probs_.array() < 0.0).any()) {
      throw std::invalid_argument("ArmDistribution: negative probability");
    }
    if (std::abs(probs_.sum() - 1.0) > kDistributionTolerance) {
      throw std::invalid_argument("ArmDistribution: probabilities must sum to 1");
    }
  }

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int arm) const { return probs_[arm]; }
  const Eigen::VectorXd& probs() const { return probs_; }

 private:
  Eigen::VectorXd probs_;
};

inline ArmDistribution uniform_distribution(int n) {
  if (n < 1) throw std::invalid_argument("uniform_distribution: n must be >= 1");
  return ArmDistribution(Eigen::VectorXd::Constant(n, 1.0 / n));
}

// Inverse-CDF sampling with a single uniform draw. Zero-probability arms are
// skipped, so degenerate distributions resolve exactly and ties at CDF
// boundaries go to the lower feasible index.
inline int sample_arm(const ArmDistribution& dist, SplitMix64& rng) {
  const double u = rng.uniform();
  const int n = dist.size();
  double cdf = 0.0;
  int last_positive = -1;
  for (int i = 0; i < n; ++i) {
    const double p = dist[i];
    if (p <= 0.0) continue;
    last_positive = i;
    cdf += p;
    if (u <= cdf) return i;
  }
  // Rounding can leave the total a hair below 1; the draw belongs to the last
  // arm with mass.
  return last_positive;
}

}  // namespace stabl
