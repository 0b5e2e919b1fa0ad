#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "stabl/errors.hpp"
#include "stabl/rng.hpp"
#include "stabl/schedule.hpp"

namespace stabl {

enum class BcoMode { kThreeQuery, kTwoQuerySurrogate };

// Convex body K with r*Ball <= K <= D*Ball. The built-in model is the D-ball
// itself; custom bodies plug in a projection onto K that must be idempotent
// and non-expansive.
struct BallSandwichedDomain {
  int dim = 0;
  double inner_radius = 0.0;  // r
  double outer_radius = 0.0;  // D
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project;  // onto K; empty = ball

  double kappa() const { return outer_radius / inner_radius; }
};

inline BallSandwichedDomain make_ball_domain(int dim, double inner_radius,
                                             double outer_radius) {
  if (dim < 1) throw std::invalid_argument("make_ball_domain: dimension must be >= 1");
  if (inner_radius <= 0.0) {
    throw std::invalid_argument("make_ball_domain: inner radius must be > 0");
  }
  if (outer_radius < inner_radius) {
    throw std::invalid_argument("make_ball_domain: need inner_radius <= outer_radius");
  }
  return BallSandwichedDomain{dim, inner_radius, outer_radius, nullptr};
}

// Uniform unit vector via normalized Gaussians.
inline Eigen::VectorXd sample_unit_sphere(int d, SplitMix64& rng) {
  if (d < 1) throw std::invalid_argument("sample_unit_sphere: dimension must be >= 1");
  Eigen::VectorXd u(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) u[i] = standard_normal(rng);
    norm = u.norm();
  } while (norm < 1e-12);
  return u / norm;
}

// Projection onto the shrunk domain K-hat = (1 - kappa*delta) K. For any
// convex K, the projection onto a scaled copy is the scaled projection:
// Pi_{aK}(x) = a * Pi_K(x/a).
inline Eigen::VectorXd project_shrunk(const Eigen::VectorXd& x,
                                      const BallSandwichedDomain& domain, double delta) {
  if (!(delta > 0.0) || delta >= 1.0 / domain.kappa()) {
    throw std::invalid_argument("project_shrunk: need 0 < delta < 1/kappa");
  }
  const double shrink = 1.0 - domain.kappa() * delta;
  if (domain.project) {
    return shrink * domain.project(x / shrink);
  }
  const double radius = domain.outer_radius * shrink;
  const double norm = x.norm();
  if (norm > radius) return x * (radius / norm);
  return x;
}

// Spherical gradient estimate for the sampled expert:
// (d * B / delta) * (loss(A + delta*u) - loss(A)) * u; all other experts get
// the zero vector. B is the importance factor for uniform expert sampling.
inline Eigen::VectorXd bco_gradient_estimate(double loss_at_perturbed,
                                             double loss_at_point,
                                             const Eigen::VectorXd& u, int d, int B,
                                             double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("bco_gradient_estimate: delta must be > 0");
  if (u.size() != d) throw std::invalid_argument("bco_gradient_estimate: dimension mismatch");
  return (static_cast<double>(d) * B / delta) * (loss_at_perturbed - loss_at_point) * u;
}

struct BcoLossEstimates {
  Eigen::VectorXd per_expert;  // B * loss at the sampled expert, 0 elsewhere
  double mixture;              // meta-distribution-weighted sum
};

inline BcoLossEstimates bco_loss_estimates(double loss_at_point, int sampled_k, int B,
                                           const Eigen::VectorXd& meta_dist) {
  if (meta_dist.size() != B) {
    throw std::invalid_argument("bco_loss_estimates: meta distribution size mismatch");
  }
  if (sampled_k < 0 || sampled_k >= B) {
    throw std::invalid_argument("bco_loss_estimates: sampled expert out of range");
  }
  Eigen::VectorXd per_expert = Eigen::VectorXd::Zero(B);
  per_expert[sampled_k] = static_cast<double>(B) * loss_at_point;
  const double mixture = meta_dist.dot(per_expert);
  return BcoLossEstimates{std::move(per_expert), mixture};
}

// OGD expert for one scale; the point lives in the shrunk domain.
struct BcoExpertState {
  Eigen::VectorXd x;
  double eta = 0.0;
  long scale = 1;
};

inline BcoExpertState ogd_step(const BcoExpertState& state, const Eigen::VectorXd& grad,
                               const BallSandwichedDomain& domain, double delta) {
  BcoExpertState next = state;
  next.x = project_shrunk(state.x - state.eta * grad, domain, delta);
  return next;
}

struct BcoState {
  IntervalSchedule schedule;
  BallSandwichedDomain domain;
  BcoMode mode = BcoMode::kThreeQuery;
  double lipschitz = 1.0;   // G
  double loss_bound = 1.0;  // declared sup of the oracle, used by the eta cap
  double delta = 0.0;       // smoothing radius, fixed at 1/(kappa T)
  long t = 1;
  std::vector<BcoExpertState> experts;
  Eigen::VectorXd meta_weights;
  Eigen::VectorXd eta_meta;
};

// OGD step size per scale: D / (d G sqrt(scale) log2 T).
inline double bco_expert_eta(const BallSandwichedDomain& domain, double lipschitz,
                             long scale, long horizon) {
  return domain.outer_radius /
         (domain.dim * lipschitz * std::sqrt(static_cast<double>(scale)) *
          std::log2(static_cast<double>(horizon)));
}

// Meta rate per scale: (1/GD) min{1/2, sqrt(log2 T / scale)}, capped at
// 1/(2 G D B max(1, loss_bound)) for meta-weight positivity.
inline double bco_eta_k(const BallSandwichedDomain& domain, double lipschitz,
                        long scale, long horizon, int B, double loss_bound) {
  const double GD = lipschitz * domain.outer_radius;
  const double base =
      std::min(0.5, std::sqrt(std::log2(static_cast<double>(horizon)) /
                              static_cast<double>(scale))) /
      GD;
  const double cap = 1.0 / (2.0 * GD * B * std::max(1.0, loss_bound));
  return std::min(base, cap);
}

inline BcoState make_bco(const BallSandwichedDomain& domain, long T, double lipschitz,
                         BcoMode mode,
                         const std::optional<std::vector<long>>& explicit_scales = std::nullopt,
                         double loss_bound = 1.0) {
  if (lipschitz <= 0.0) throw std::invalid_argument("make_bco: Lipschitz bound must be > 0");
  if (loss_bound <= 0.0) throw std::invalid_argument("make_bco: loss bound must be > 0");
  // Perturbed queries A + delta*u must stay inside K: the ball model needs
  // kappa*D >= 1; a custom body needs D >= 1 (then u/kappa lies in rB, a
  // subset of K, and A + delta*u is a convex combination of K points).
  if (domain.project ? domain.outer_radius < 1.0
                     : domain.kappa() * domain.outer_radius < 1.0) {
    throw std::invalid_argument(
        "make_bco: domain too small for feasible perturbed queries");
  }
  BcoState state;
  state.schedule = build_schedule(T, explicit_scales);
  state.domain = domain;
  state.mode = mode;
  state.lipschitz = lipschitz;
  state.loss_bound = loss_bound;
  state.delta = 1.0 / (domain.kappa() * static_cast<double>(T));
  const int B = state.schedule.B();
  state.meta_weights.resize(B);
  state.eta_meta.resize(B);
  state.experts.reserve(B);
  for (int k = 0; k < B; ++k) {
    const long scale = state.schedule.scales[k];
    state.experts.push_back(BcoExpertState{Eigen::VectorXd::Zero(domain.dim),
                                           bco_expert_eta(domain, lipschitz, scale, T),
                                           scale});
    state.eta_meta[k] = bco_eta_k(domain, lipschitz, scale, T, B, loss_bound);
    state.meta_weights[k] = state.eta_meta[k];
  }
  return state;
}

// Loss oracle: deterministic function of the queried point for round t.
using BcoOracle = std::function<double(const Eigen::VectorXd&)>;

struct BcoRoundRecord {
  Eigen::VectorXd played_point;                 // x_t = sum_k p(t)_k A_k(t)
  int sampled_expert = -1;                      // k_t (three-query mode only)
  std::vector<Eigen::VectorXd> queried_points;  // announced, in order
  std::vector<double> observed_losses;          // oracle values for them
  double loss_played = 0.0;                     // suffered loss, queried_points[0]
};

BcoRoundRecord bco_round(BcoState& state, RunStreams& rng, const BcoOracle& oracle);

}  // namespace stabl
