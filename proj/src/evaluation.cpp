#include "stabl/evaluation.hpp"

#include <limits>
#include <stdexcept>

namespace stabl {
namespace {

void check_record(const RunRecord& record) {
  if (record.losses == nullptr) {
    throw std::invalid_argument("RunRecord: missing loss matrix");
  }
  const long T = record.losses->rows();
  if (static_cast<long>(record.plays.size()) != T ||
      static_cast<long>(record.suffered.size()) != T) {
    throw std::invalid_argument("RunRecord: plays/suffered length must equal T");
  }
}

// prefix_player[t] / prefix_arm(t, i): sums over the first t rounds.
struct Prefixes {
  std::vector<double> player;
  Eigen::MatrixXd arms;  // (T+1) x n
};

Prefixes build_prefixes(const RunRecord& record) {
  const long T = record.losses->rows();
  const long n = record.losses->cols();
  Prefixes p;
  p.player.assign(static_cast<size_t>(T) + 1, 0.0);
  p.arms = Eigen::MatrixXd::Zero(T + 1, n);
  for (long t = 1; t <= T; ++t) {
    p.player[static_cast<size_t>(t)] =
        p.player[static_cast<size_t>(t - 1)] + record.suffered[static_cast<size_t>(t - 1)];
    p.arms.row(t) = p.arms.row(t - 1) + record.losses->row(t - 1);
  }
  return p;
}

double interval_regret(const Prefixes& p, long j, long s) {
  const double player =
      p.player[static_cast<size_t>(s)] - p.player[static_cast<size_t>(j - 1)];
  const double best = (p.arms.row(s) - p.arms.row(j - 1)).minCoeff();
  return player - best;
}

}  // namespace

double static_regret(const RunRecord& record, long j, long s) {
  check_record(record);
  const long T = record.losses->rows();
  if (j < 1 || j > s || s > T) {
    throw std::invalid_argument("static_regret: need 1 <= j <= s <= T");
  }
  const Prefixes p = build_prefixes(record);
  return interval_regret(p, j, s);
}

SaRegretResult sa_regret_exact(const RunRecord& record, double op_budget) {
  check_record(record);
  const long T = record.losses->rows();
  const long n = record.losses->cols();
  const double work = 0.5 * static_cast<double>(T) * static_cast<double>(T + 1) *
                      static_cast<double>(n);
  if (work > op_budget) {
    throw BudgetError(
        "sa_regret_exact: interval scan exceeds the op budget; use sa_regret_geometric");
  }

  const Prefixes p = build_prefixes(record);
  SaRegretResult best{-std::numeric_limits<double>::infinity(), 1, 1};
  // j ascending then s ascending plus strict improvement = earliest start,
  // then shortest interval, among the maximizers.
  for (long j = 1; j <= T; ++j) {
    for (long s = j; s <= T; ++s) {
      const double value = interval_regret(p, j, s);
      if (value > best.value) best = SaRegretResult{value, j, s};
    }
  }
  return best;
}

std::vector<ScaleRegret> sa_regret_geometric(const RunRecord& record,
                                             const IntervalSchedule& schedule) {
  check_record(record);
  const long T = record.losses->rows();
  const Prefixes p = build_prefixes(record);
  std::vector<ScaleRegret> table;
  table.reserve(schedule.scales.size());
  for (long scale : schedule.scales) {
    ScaleRegret row{scale, -std::numeric_limits<double>::infinity(), 1, 1};
    for (long q = 1; q * scale <= T; ++q) {
      const long j = (q - 1) * scale + 1;
      const long s = q * scale;
      const double value = interval_regret(p, j, s);
      if (value > row.max_regret) row = ScaleRegret{scale, value, j, s};
    }
    if (scale <= T) table.push_back(row);
  }
  return table;
}

std::vector<double> moving_average(const std::vector<double>& series, long window) {
  const long T = static_cast<long>(series.size());
  if (window < 1 || window > T) {
    throw std::invalid_argument("moving_average: need 1 <= window <= length");
  }
  std::vector<double> prefix(static_cast<size_t>(T) + 1, 0.0);
  for (long t = 0; t < T; ++t) {
    prefix[static_cast<size_t>(t + 1)] = prefix[static_cast<size_t>(t)] + series[static_cast<size_t>(t)];
  }
  std::vector<double> out(static_cast<size_t>(T));
  for (long t = 0; t < T; ++t) {
    const long lo = std::max(0L, t + 1 - window);
    out[static_cast<size_t>(t)] =
        (prefix[static_cast<size_t>(t + 1)] - prefix[static_cast<size_t>(lo)]) /
        static_cast<double>(t + 1 - lo);
  }
  return out;
}

}  // namespace stabl
