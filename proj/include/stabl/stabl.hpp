#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "stabl/distribution.hpp"
#include "stabl/errors.hpp"
#include "stabl/exp3.hpp"
#include "stabl/loss.hpp"
#include "stabl/rng.hpp"
#include "stabl/schedule.hpp"

namespace stabl {

enum class StablVariant { kFull, kNaiveObservation, kSingleScale };

// The multiplicative meta factor is floored at a tiny positive value: the
// naive-observation ablation has no observation floor, so its r_tilde is only
// bounded below by -n and 1 + eta_k * r_tilde can go non-positive. The full
// variant never hits the floor (eta_k <= 1/(4B) and r_tilde >= -2B give a
// factor >= 1/2).
inline constexpr double kMetaFactorFloor = 1e-12;

// Meta rate: min{1/(2 sqrt n), 1/sqrt(n * scale), 1/(4B)}. The 1/(4B) cap is
// what the meta-weight positivity argument needs.
inline double eta_k(int n, long scale, int B) {
  const double dn = static_cast<double>(n);
  return std::min({1.0 / (2.0 * std::sqrt(dn)),
                   1.0 / std::sqrt(dn * static_cast<double>(scale)),
                   1.0 / (4.0 * static_cast<double>(B))});
}

// Per-expert EXP3 rate: the general-estimator rate at C = 2B (the observation
// distribution's importance-weight bound) with the expert's own scale as its
// horizon, since each expert restarts once per interval of its scale.
inline double stabl_expert_rate(int n, long scale, int B) {
  return std::sqrt(safe_log_arms(n) /
                   (static_cast<double>(scale) * n * 2.0 * B));
}

// P(t)_i = max_k v_ki^2 / (2 sum_j max_k v_kj^2) + sum_k v_ki / (2B).
// The second term floors every expert's distribution at 1/(2B); the first
// term concentrates queries where some expert is confident.
inline ArmDistribution observation_distribution(
    const std::vector<ArmDistribution>& expert_dists) {
  if (expert_dists.empty()) {
    throw std::invalid_argument("observation_distribution: need at least one expert");
  }
  const int n = expert_dists.front().size();
  Eigen::VectorXd max_sq = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  for (const ArmDistribution& dist : expert_dists) {
    if (dist.size() != n) {
      throw std::invalid_argument("observation_distribution: arm-count mismatch");
    }
    max_sq = max_sq.cwiseMax(dist.probs().array().square().matrix());
    total += dist.probs();
  }
  const double B = static_cast<double>(expert_dists.size());
  Eigen::VectorXd p = max_sq / (2.0 * max_sq.sum()) + total / (2.0 * B);
  return ArmDistribution(std::move(p));
}

// Full learner state. Expert k's distribution is v(t,k); meta weight w_t(k)
// starts at eta_k and stays strictly positive.
struct StablState {
  IntervalSchedule schedule;
  int n = 0;
  long t = 1;  // 1-based round
  StablVariant variant = StablVariant::kFull;
  std::vector<Exp3State> experts;
  Eigen::VectorXd meta_weights;
  Eigen::VectorXd eta_meta;
};

inline StablState make_stabl(
    int n, long T, StablVariant variant = StablVariant::kFull,
    const std::optional<std::vector<long>>& explicit_scales = std::nullopt) {
  if (n < 1) throw std::invalid_argument("make_stabl: n must be >= 1");
  StablState state;
  state.schedule = build_schedule(T, explicit_scales);
  state.n = n;
  state.variant = variant;
  const int B = state.schedule.B();
  if (variant == StablVariant::kSingleScale && B != 1) {
    throw std::invalid_argument("make_stabl: single-scale variant needs exactly one scale");
  }
  state.meta_weights.resize(B);
  state.eta_meta.resize(B);
  state.experts.reserve(B);
  for (int k = 0; k < B; ++k) {
    const long scale = state.schedule.scales[k];
    state.experts.push_back(make_exp3(n, stabl_expert_rate(n, scale, B)));
    state.eta_meta[k] = eta_k(n, scale, B);
    state.meta_weights[k] = state.eta_meta[k];  // w_1(k) = eta_k
  }
  return state;
}

// Play mixture sum_k (w_t(k)/W_t) v(t,k).
inline ArmDistribution meta_play_distribution(const StablState& state) {
  const double W = state.meta_weights.sum();
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(state.n);
  for (int k = 0; k < state.schedule.B(); ++k) {
    mix += (state.meta_weights[k] / W) * state.experts[k].weights.probs();
  }
  return ArmDistribution(std::move(mix));
}

// r_tilde(k) = <estimate, play mixture> - <estimate, expert k>; one-hot
// estimates collapse both inner products to the estimated arm.
inline double r_tilde(const SparseLossEstimate& estimate,
                      const ArmDistribution& play_dist,
                      const ArmDistribution& expert_dist) {
  return estimate.value * (play_dist[estimate.arm] - expert_dist[estimate.arm]);
}

namespace detail {

// Shared t -> t+1 meta transition given this round's r_tilde values: experts
// whose scale divides t+1 restart (meta weight back to eta_k, distribution
// back to uniform); everyone else multiplies by 1 + eta_k * r_tilde(k).
inline void apply_meta_transition(StablState& state, const Eigen::VectorXd& r) {
  for (int k = 0; k < state.schedule.B(); ++k) {
    if ((state.t + 1) % state.schedule.scales[k] == 0) {
      state.meta_weights[k] = state.eta_meta[k];
      state.experts[k] = make_exp3(state.n, state.experts[k].eta);
    } else {
      const double factor = std::max(1.0 + state.eta_meta[k] * r[k], kMetaFactorFloor);
      state.meta_weights[k] = std::max(state.meta_weights[k] * factor, kWeightFloor);
    }
  }
  state.t += 1;
}

inline Eigen::VectorXd r_tilde_all(const StablState& state,
                                   const SparseLossEstimate& estimate,
                                   const ArmDistribution& play_dist) {
  Eigen::VectorXd r(state.schedule.B());
  for (int k = 0; k < state.schedule.B(); ++k) {
    r[k] = r_tilde(estimate, play_dist, state.experts[k].weights);
  }
  return r;
}

}  // namespace detail

// The meta layer's t -> t+1 transition alone (no expert EXP3 updates):
// restarts for every scale dividing t+1, multiplicative updates elsewhere.
inline StablState meta_update(const StablState& state, const SparseLossEstimate& estimate) {
  StablState next = state;
  const ArmDistribution play = meta_play_distribution(state);
  const Eigen::VectorXd r = detail::r_tilde_all(state, estimate, play);
  detail::apply_meta_transition(next, r);
  return next;
}

// What one round announces and from which distributions the arms were drawn.
struct RoundDecision {
  int play_arm = 0;
  int observe_arm = 0;
  ArmDistribution play_dist;
  ArmDistribution observe_dist;
};

// Feedback callback: given the announced arms, returns the loss for each.
using RevealFn = std::function<std::map<int, double>(const std::vector<int>&)>;

// One full round: announce (x_t, x'_t) drawn from independent streams, obtain
// the two revealed losses, build the one-hot estimate from x'_t, update every
// expert at its own rate, then run the meta transition. The played loss is
// accounting-only; all learning flows through the observation draw.
inline RoundDecision stabl_round(StablState& state, RunStreams& rng, const RevealFn& reveal) {
  if (state.t > state.schedule.horizon) {
    throw std::invalid_argument("stabl_round: horizon exhausted");
  }
  ArmDistribution play_dist = meta_play_distribution(state);
  std::vector<ArmDistribution> expert_dists;
  expert_dists.reserve(state.experts.size());
  for (const Exp3State& expert : state.experts) expert_dists.push_back(expert.weights);
  ArmDistribution observe_dist = state.variant == StablVariant::kNaiveObservation
                                     ? uniform_distribution(state.n)
                                     : observation_distribution(expert_dists);

  const int play_arm = sample_arm(play_dist, rng.play);
  const int observe_arm = sample_arm(observe_dist, rng.observe);

  const std::map<int, double> losses = reveal({play_arm, observe_arm});
  if (!losses.count(play_arm) || !losses.count(observe_arm)) {
    throw ProtocolError("stabl_round: feedback missing for an announced arm");
  }

  const SparseLossEstimate estimate = sparse_loss_estimate(
      observe_arm, losses.at(observe_arm), observe_dist[observe_arm], state.n);
  const Eigen::VectorXd r = detail::r_tilde_all(state, estimate, play_dist);
  for (Exp3State& expert : state.experts) expert = exp3_update(expert, estimate);
  detail::apply_meta_transition(state, r);

  return RoundDecision{play_arm, observe_arm, std::move(play_dist), std::move(observe_dist)};
}

}  // namespace stabl
