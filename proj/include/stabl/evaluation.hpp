#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "stabl/errors.hpp"
#include "stabl/schedule.hpp"

namespace stabl {

// One finished run: the loss matrix it was evaluated against (not owned),
// the played arms, and the per-round suffered loss.
struct RunRecord {
  const Eigen::MatrixXd* losses = nullptr;  // T x n
  std::vector<int> plays;                   // 0-based arms, length T
  std::vector<double> suffered;             // loss(t, plays[t])
  std::uint64_t seed = 0;
  std::string algorithm;
};

// Player's cumulative loss on the 1-based inclusive interval [j, s] minus the
// best fixed arm's cumulative loss there.
double static_regret(const RunRecord& record, long j, long s);

struct SaRegretResult {
  double value = 0.0;
  long start = 1;  // 1-based inclusive maximizing interval
  long end = 1;
};

// Exact max static regret over all T(T+1)/2 intervals via per-arm prefix
// sums. Ties break toward the earliest start, then the shortest interval.
// Refuses instances whose interval scan exceeds `op_budget` elementary ops.
SaRegretResult sa_regret_exact(const RunRecord& record, double op_budget = 1e10);

struct ScaleRegret {
  long scale = 0;
  double max_regret = 0.0;
  long start = 1;
  long end = 1;
};

// Max static regret per scale over the complete blocks [(q-1)s+1, qs].
std::vector<ScaleRegret> sa_regret_geometric(const RunRecord& record,
                                             const IntervalSchedule& schedule);

// Trailing moving average: output[t] = mean over [max(1, t-window+1), t].
std::vector<double> moving_average(const std::vector<double>& series, long window);

}  // namespace stabl
