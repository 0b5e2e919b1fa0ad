#include "stabl/bco.hpp"

#include <cmath>

#include "stabl/stabl.hpp"

namespace stabl {
namespace {

double checked_loss(const BcoOracle& oracle, const Eigen::VectorXd& point,
                    BcoRoundRecord& record) {
  const double value = oracle(point);
  if (!std::isfinite(value)) {
    throw std::domain_error("bco_round: oracle returned a non-finite loss");
  }
  if (value < 0.0) {
    throw ProtocolError("bco_round: oracle returned a negative loss");
  }
  record.queried_points.push_back(point);
  record.observed_losses.push_back(value);
  return value;
}

// Same restart/multiplicative meta rule as the MAB learner; a restarted
// expert re-enters at the domain center, which is always feasible.
void apply_meta_transition(BcoState& state, const Eigen::VectorXd& r) {
  for (int k = 0; k < state.schedule.B(); ++k) {
    if ((state.t + 1) % state.schedule.scales[k] == 0) {
      state.meta_weights[k] = state.eta_meta[k];
      state.experts[k].x = Eigen::VectorXd::Zero(state.domain.dim);
    } else {
      const double factor = std::max(1.0 + state.eta_meta[k] * r[k], kMetaFactorFloor);
      state.meta_weights[k] = std::max(state.meta_weights[k] * factor, kWeightFloor);
    }
  }
  state.t += 1;
}

}  // namespace

BcoRoundRecord bco_round(BcoState& state, RunStreams& rng, const BcoOracle& oracle) {
  if (state.t > state.schedule.horizon) {
    throw std::invalid_argument("bco_round: horizon exhausted");
  }
  const int B = state.schedule.B();
  const int d = state.domain.dim;
  const Eigen::VectorXd p = state.meta_weights / state.meta_weights.sum();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < B; ++k) x += p[k] * state.experts[k].x;

  BcoRoundRecord record;
  record.played_point = x;

  if (state.mode == BcoMode::kThreeQuery) {
    // The expert to probe is sampled uniformly (that is what makes the B
    // importance factor unbiased); p(t) only weights the played point.
    const int kt = std::min(B - 1, static_cast<int>(rng.play.uniform() * B));
    record.sampled_expert = kt;
    const Eigen::VectorXd u = sample_unit_sphere(d, rng.observe);
    const Eigen::VectorXd probe = state.experts[kt].x;
    record.loss_played = checked_loss(oracle, x, record);
    const double loss_perturbed = checked_loss(oracle, probe + state.delta * u, record);
    const double loss_at_point = checked_loss(oracle, probe, record);

    const Eigen::VectorXd grad =
        bco_gradient_estimate(loss_perturbed, loss_at_point, u, d, B, state.delta);
    state.experts[kt] = ogd_step(state.experts[kt], grad, state.domain, state.delta);

    const BcoLossEstimates est = bco_loss_estimates(loss_at_point, kt, B, p);
    const Eigen::VectorXd r = Eigen::VectorXd::Constant(B, est.mixture) - est.per_expert;
    apply_meta_transition(state, r);
  } else {
    const Eigen::VectorXd u = sample_unit_sphere(d, rng.observe);
    record.loss_played = checked_loss(oracle, x, record);
    const double loss_perturbed = checked_loss(oracle, x + state.delta * u, record);

    // One shared gradient estimate at x_t; every expert updates against the
    // linear surrogate g . x, whose meta zero-sum is exact by linearity.
    const Eigen::VectorXd g =
        bco_gradient_estimate(loss_perturbed, record.loss_played, u, d, 1, state.delta);
    Eigen::VectorXd r(B);
    const double surrogate_at_play = g.dot(x);
    for (int k = 0; k < B; ++k) r[k] = surrogate_at_play - g.dot(state.experts[k].x);
    for (BcoExpertState& expert : state.experts) {
      expert = ogd_step(expert, g, state.domain, state.delta);
    }
    apply_meta_transition(state, r);
  }
  return record;
}

}  // namespace stabl
