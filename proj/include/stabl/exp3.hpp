#pragma once

#include <algorithm>
#include <cmath>

#include "stabl/distribution.hpp"
#include "stabl/loss.hpp"

namespace stabl {

// Multiplicative-weights learner with a general (caller-built) loss estimator.
struct Exp3State {
  ArmDistribution weights;
  double eta;
  int n;
};

inline Exp3State make_exp3(int n, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("make_exp3: eta must be > 0");
  return Exp3State{uniform_distribution(n), eta, n};
}

// log n in rate formulas is the natural log; n <= 1 falls back to a positive
// dummy rate (single-arm behavior is rate-independent and log 1 = 0 would
// violate the eta > 0 invariant).
inline double safe_log_arms(int n) {
  return n > 1 ? std::log(static_cast<double>(n)) : 1.0;
}

// Multiply the estimated arm's weight by exp(-eta * value), renormalize.
// Weights are clamped at 1e-300 so exp underflow on long horizons cannot zero
// them out; clamping preserves ordering.
inline Exp3State exp3_update(const Exp3State& state, const SparseLossEstimate& estimate) {
  if (estimate.n != state.n) {
    throw std::invalid_argument("exp3_update: arm-count mismatch");
  }
  if (!std::isfinite(estimate.value)) {
    throw std::domain_error("exp3_update: non-finite loss estimate");
  }
  if (estimate.value < 0.0) {
    throw std::domain_error("exp3_update: negative loss estimate");
  }
  Eigen::VectorXd y = state.weights.probs();
  y[estimate.arm] *= std::exp(-state.eta * estimate.value);
  y = y.cwiseMax(kWeightFloor);
  y /= y.sum();
  return Exp3State{ArmDistribution(std::move(y)), state.eta, state.n};
}

inline double exp3_baseline_eta(int n, long horizon) {
  return std::sqrt(safe_log_arms(n) / (static_cast<double>(horizon) * n));
}

inline double exp3_baseline_gamma(int n, long horizon) {
  return std::min(1.0, std::sqrt(n * safe_log_arms(n) / static_cast<double>(horizon)));
}

// Classic EXP3 baseline for experiments: one fixed rate over the whole
// horizon, uniform exploration mixing (the mixing floors the importance
// weights), and the played arm doubling as the observed arm.
class Exp3Baseline {
 public:
  Exp3Baseline(int n, long horizon)
      : state_(make_exp3(n, exp3_baseline_eta(n, horizon))),
        gamma_(exp3_baseline_gamma(n, horizon)) {}

  ArmDistribution play_distribution() const {
    Eigen::VectorXd q =
        (1.0 - gamma_) * state_.weights.probs().array() + gamma_ / state_.n;
    return ArmDistribution(std::move(q));
  }

  int choose(SplitMix64& rng) const { return sample_arm(play_distribution(), rng); }

  void update(int arm, double loss) {
    const ArmDistribution q = play_distribution();
    state_ = exp3_update(state_, sparse_loss_estimate(arm, loss, q[arm], state_.n));
  }

  const Exp3State& state() const { return state_; }
  double gamma() const { return gamma_; }

 private:
  Exp3State state_;
  double gamma_;
};

}  // namespace stabl
