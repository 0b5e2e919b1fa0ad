#include "stabl/environment.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace stabl {

PiecewiseExpertEnv generate_piecewise(int n, long T, std::vector<long> change_points,
                                      double boost, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_piecewise: n must be >= 1");
  if (T < 1) throw std::invalid_argument("generate_piecewise: T must be >= 1");
  if (boost < 0.0 || boost > 0.5) {
    throw std::invalid_argument("generate_piecewise: boost must lie in [0, 0.5]");
  }
  long prev = 1;
  for (long cp : change_points) {
    if (cp <= prev || cp >= T) {
      throw std::invalid_argument(
          "generate_piecewise: change points must be strictly increasing inside (1, T)");
    }
    prev = cp;
  }

  PiecewiseExpertEnv env;
  env.n = n;
  env.T = T;
  env.change_points = std::move(change_points);
  env.boost = boost;
  env.rewards.resize(T, n);

  SplitMix64 rng(derive_stream_seed(seed, kEnvironmentStream));
  for (long t0 = 0; t0 < T; ++t0) {
    for (int arm = 0; arm < n; ++arm) {
      env.rewards(t0, arm) = 0.5 * rng.uniform();  // base in [0, 0.5)
    }
    env.rewards(t0, env.boosted_arm(t0)) += boost;  // boosted stays <= 1 exactly
  }
  return env;
}

Eigen::MatrixXd load_csv_loss_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_csv_loss_matrix: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("load_csv_loss_matrix: empty file " + path);
  }
  std::stringstream header(line);
  std::string field;
  std::vector<std::string> columns;
  while (std::getline(header, field, ',')) columns.push_back(field);
  if (columns.empty() || columns.front() != "t") {
    throw std::invalid_argument("load_csv_loss_matrix: header must start with `t`");
  }
  const int n = static_cast<int>(columns.size()) - 1;
  if (n < 1) throw std::invalid_argument("load_csv_loss_matrix: no arm columns");
  for (int i = 0; i < n; ++i) {
    if (columns[i + 1] != "arm_" + std::to_string(i)) {
      throw std::invalid_argument("load_csv_loss_matrix: expected column arm_" +
                                  std::to_string(i));
    }
  }

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> values;
    while (std::getline(row, field, ',')) values.push_back(std::stod(field));
    if (static_cast<int>(values.size()) != n + 1) {
      throw std::invalid_argument("load_csv_loss_matrix: wrong column count on row " +
                                  std::to_string(rows.size() + 1));
    }
    for (int i = 0; i < n; ++i) {
      if (values[i + 1] < 0.0 || values[i + 1] > 1.0) {
        throw std::invalid_argument("load_csv_loss_matrix: losses must lie in [0, 1]");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::invalid_argument("load_csv_loss_matrix: no data rows");

  Eigen::MatrixXd losses(static_cast<long>(rows.size()), n);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (int i = 0; i < n; ++i) losses(static_cast<long>(r), i) = rows[r][i + 1];
  }
  return losses;
}

std::map<int, double> MabQuerySession::reveal(long t0, const std::vector<int>& announced) {
  if (announced.empty()) {
    throw ProtocolError("reveal: empty query set");
  }
  if (t0 < 0 || t0 >= static_cast<long>(revealed_.size())) {
    throw ProtocolError("reveal: round outside the horizon");
  }
  if (revealed_[static_cast<size_t>(t0)]) {
    throw ProtocolError("reveal: round already revealed");
  }
  const std::set<int> distinct(announced.begin(), announced.end());
  if (static_cast<int>(distinct.size()) > budget_) {
    throw ProtocolError("reveal: query budget exceeded");
  }
  std::map<int, double> out;
  for (int arm : distinct) out[arm] = loss_fn_(t0, arm);
  revealed_[static_cast<size_t>(t0)] = true;
  transcript_.rounds.push_back(QueryTranscript::Round{t0, announced, out});
  return out;
}

}  // namespace stabl
