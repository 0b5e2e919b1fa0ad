#include <vector>

#include "stabl/evaluation.hpp"
#include "test_support.hpp"

using namespace stabl;

namespace {

RunRecord record_for(const Eigen::MatrixXd& losses, std::vector<int> plays) {
  RunRecord r;
  r.losses = &losses;
  r.plays = std::move(plays);
  r.suffered.reserve(r.plays.size());
  for (size_t t = 0; t < r.plays.size(); ++t) {
    r.suffered.push_back(losses(static_cast<long>(t), r.plays[t]));
  }
  return r;
}

}  // namespace

int main() {
  Eigen::MatrixXd three(3, 2);
  three << 0, 1,
           0, 1,
           1, 0;
  const RunRecord rec3 = record_for(three, {1, 1, 0});

  {  // static regret on hand-checked intervals
    REQUIRE(static_regret(rec3, 1, 3) == 2.0);
    REQUIRE(static_regret(rec3, 1, 2) == 2.0);
    REQUIRE(static_regret(rec3, 3, 3) == 1.0);
    REQUIRE(static_regret(rec3, 2, 2) == 1.0);
    REQUIRE_THROWS_AS(static_regret(rec3, 0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(static_regret(rec3, 2, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(static_regret(rec3, 1, 4), std::invalid_argument);

    RunRecord bad = rec3;
    bad.losses = nullptr;
    REQUIRE_THROWS_AS(static_regret(bad, 1, 1), std::invalid_argument);
    RunRecord short_plays = rec3;
    short_plays.plays.pop_back();
    REQUIRE_THROWS_AS(static_regret(short_plays, 1, 1), std::invalid_argument);
  }

  {  // exact SA regret: maximum 2, earliest start then shortest interval
    const SaRegretResult r = sa_regret_exact(rec3);
    REQUIRE(r.value == 2.0);
    REQUIRE(r.start == 1);
    REQUIRE(r.end == 2);
  }

  {  // op budget refusal
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(10000, 300);
    RunRecord r = record_for(big, std::vector<int>(10000, 0));
    REQUIRE_THROWS_AS(sa_regret_exact(r), BudgetError);  // 1.5e10 ops > 1e10

    Eigen::MatrixXd small = Eigen::MatrixXd::Zero(100, 2);
    RunRecord s = record_for(small, std::vector<int>(100, 0));
    REQUIRE(sa_regret_exact(s).value == 0.0);
    REQUIRE_THROWS_AS(sa_regret_exact(s, 5000.0), BudgetError);  // custom budget
  }

  {  // geometric blocks, hand-checked
    Eigen::MatrixXd four(4, 2);
    four << 0, 1,
            1, 0,
            0, 1,
            1, 0;
    const RunRecord rec = record_for(four, {1, 0, 1, 0});  // suffers 1 each round
    const std::vector<ScaleRegret> table =
        sa_regret_geometric(rec, build_schedule(4, {{2, 4}}));
    REQUIRE(table.size() == 2);
    REQUIRE(table[0].scale == 2);
    REQUIRE(table[0].max_regret == 1.0);
    REQUIRE(table[0].start == 1 && table[0].end == 2);  // earliest maximizing block
    REQUIRE(table[1].scale == 4);
    REQUIRE(table[1].max_regret == 2.0);
    REQUIRE(table[1].start == 1 && table[1].end == 4);
  }

  {  // incomplete trailing blocks are dropped; oversized scales give no row
    Eigen::MatrixXd six = Eigen::MatrixXd::Zero(6, 2);
    six.col(1).setConstant(1.0);
    const RunRecord rec = record_for(six, {1, 1, 1, 1, 1, 1});
    const std::vector<ScaleRegret> table =
        sa_regret_geometric(rec, build_schedule(8, {{4, 8}}));
    REQUIRE(table.size() == 1);  // scale 8 > T = 6: no complete block
    REQUIRE(table[0].scale == 4);
    REQUIRE(table[0].max_regret == 4.0);  // only block [1,4]
    REQUIRE(table[0].start == 1 && table[0].end == 4);
  }

  {  // moving average, hand-checked
    const std::vector<double> ma = moving_average({1.0, 2.0, 3.0}, 2);
    REQUIRE(ma.size() == 3);
    REQUIRE(ma[0] == 1.0 && ma[1] == 1.5 && ma[2] == 2.5);

    const std::vector<double> identity = moving_average({4.0, 5.0, 6.0}, 1);
    REQUIRE(identity == (std::vector<double>{4.0, 5.0, 6.0}));

    const std::vector<double> full = moving_average({2.0, 4.0, 6.0}, 3);
    REQUIRE(full[0] == 2.0 && full[1] == 3.0 && full[2] == 4.0);

    REQUIRE_THROWS_AS(moving_average({1.0}, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(moving_average({1.0}, 2), std::invalid_argument);
  }

  return testsupport::finish("evaluation_test");
}
