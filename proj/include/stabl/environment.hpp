#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stabl/errors.hpp"
#include "stabl/rng.hpp"

namespace stabl {

// Piecewise-stationary reward environment: base rewards uniform on [0, 0.5),
// one boosted arm per segment (+boost), losses are 1 - reward. The matrix is
// generated once per seed before round 1 (oblivious adversary).
struct PiecewiseExpertEnv {
  int n = 0;
  long T = 0;
  std::vector<long> change_points;  // 0-based rounds where the boosted arm advances
  double boost = 0.0;
  Eigen::MatrixXd rewards;  // T x n, all entries in [0, 1]

  // Segment index (mod n) of 0-based round t0.
  int boosted_arm(long t0) const {
    int segment = 0;
    for (long cp : change_points) {
      if (cp <= t0) ++segment;
    }
    return segment % n;
  }

  double reward(long t0, int arm) const { return rewards(t0, arm); }
  double loss(long t0, int arm) const { return 1.0 - rewards(t0, arm); }
};

PiecewiseExpertEnv generate_piecewise(int n, long T, std::vector<long> change_points,
                                      double boost, std::uint64_t seed);

// Loss matrix from CSV with header `t,arm_0,...,arm_{n-1}`; values in [0, 1].
Eigen::MatrixXd load_csv_loss_matrix(const std::string& path);

// Per-round record of what a learner announced and was shown.
struct QueryTranscript {
  struct Round {
    long t0 = 0;                    // 0-based round
    std::vector<int> announced;     // raw announce order, duplicates kept
    std::map<int, double> revealed; // distinct arms only (set semantics)
  };
  std::vector<Round> rounds;
};

// Two-phase query protocol for MAB runs: losses are revealed only for
// announced arms, once per round, at most `budget` distinct arms.
class MabQuerySession {
 public:
  MabQuerySession(std::function<double(long, int)> loss_fn, long T, int budget = 2)
      : loss_fn_(std::move(loss_fn)), revealed_(static_cast<size_t>(T), false),
        budget_(budget) {}

  std::map<int, double> reveal(long t0, const std::vector<int>& announced);

  const QueryTranscript& transcript() const { return transcript_; }

 private:
  std::function<double(long, int)> loss_fn_;
  std::vector<bool> revealed_;
  int budget_;
  QueryTranscript transcript_;
};

// Fixed quadratic loss |x - center|^2 for BCO sanity experiments.
struct QuadraticBcoEnv {
  Eigen::VectorXd center;

  double eval(const Eigen::VectorXd& x) const { return (x - center).squaredNorm(); }
};

}  // namespace stabl
