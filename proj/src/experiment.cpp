#include "stabl/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

#include "stabl/bco.hpp"
#include "stabl/environment.hpp"
#include "stabl/evaluation.hpp"
#include "stabl/exp3.hpp"
#include "stabl/stabl.hpp"

namespace stabl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::set<std::string> kMabKinds = {"stabl", "stabl_naive", "stabl_single_scale",
                                         "exp3"};
const std::set<std::string> kBcoKinds = {"bco_three_query", "bco_two_query"};
const std::set<std::string> kRegretModes = {"exact", "geometric", "off"};

// 17 significant digits: round-trip exact for 64-bit floats.
std::string fmt17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double stderr_of(const std::vector<double>& values) {
  const size_t k = values.size();
  if (k < 2) return 0.0;
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(k - 1)) / std::sqrt(static_cast<double>(k));
}

void check_unknown_keys(const json& object, const std::set<std::string>& known,
                        const std::string& where, std::vector<std::string>& errors) {
  for (const auto& item : object.items()) {
    if (!known.count(item.key())) {
      errors.push_back(where + ": unknown field `" + item.key() + "`");
    }
  }
}

void parse_environment(const json& env, ExperimentConfig& cfg,
                       std::vector<std::string>& errors) {
  if (!env.is_object()) {
    errors.push_back("`environment` must be an object");
    return;
  }
  if (!env.contains("kind") || !env["kind"].is_string()) {
    errors.push_back("environment: missing string field `kind`");
    return;
  }
  EnvironmentSpec& spec = cfg.environment;
  spec.kind = env["kind"].get<std::string>();

  if (spec.kind == "piecewise_expert") {
    check_unknown_keys(env, {"kind", "arms", "change_points", "boost"}, "environment",
                       errors);
    if (!env.contains("arms") || !env["arms"].is_number_integer() ||
        env["arms"].get<int>() < 1) {
      errors.push_back("environment: `arms` must be a positive integer");
    } else {
      spec.arms = env["arms"].get<int>();
    }
    if (env.contains("change_points")) {
      if (!env["change_points"].is_array()) {
        errors.push_back("environment: `change_points` must be an array");
      } else {
        long prev = 1;
        for (const auto& cp : env["change_points"]) {
          if (!cp.is_number_integer()) {
            errors.push_back("environment: change points must be integers");
            break;
          }
          const long v = cp.get<long>();
          if (v <= prev) {
            errors.push_back(
                "environment: change points must be strictly increasing and > 1");
          }
          if (cfg.horizon >= 1 && v >= cfg.horizon) {
            errors.push_back("environment: change point " + std::to_string(v) +
                             " >= horizon " + std::to_string(cfg.horizon) +
                             " (change points must lie strictly inside (1, T))");
          }
          spec.change_points.push_back(v);
          prev = v;
        }
      }
    }
    if (env.contains("boost")) {
      if (!env["boost"].is_number() || env["boost"].get<double>() < 0.0 ||
          env["boost"].get<double>() > 0.5) {
        errors.push_back("environment: `boost` must be a number in [0, 0.5]");
      } else {
        spec.boost = env["boost"].get<double>();
      }
    }
  } else if (spec.kind == "csv_loss") {
    check_unknown_keys(env, {"kind", "path"}, "environment", errors);
    if (!env.contains("path") || !env["path"].is_string()) {
      errors.push_back("environment: csv_loss needs a string field `path`");
    } else {
      spec.csv_path = env["path"].get<std::string>();
      if (!fs::exists(spec.csv_path)) {
        errors.push_back("environment: csv file does not exist: " + spec.csv_path);
      }
    }
  } else if (spec.kind == "quadratic_bco") {
    check_unknown_keys(env,
                       {"kind", "dim", "center", "inner_radius", "outer_radius",
                        "lipschitz", "loss_bound"},
                       "environment", errors);
    if (!env.contains("dim") || !env["dim"].is_number_integer() ||
        env["dim"].get<int>() < 1) {
      errors.push_back("environment: `dim` must be a positive integer");
    } else {
      spec.dim = env["dim"].get<int>();
    }
    spec.center = Eigen::VectorXd::Zero(std::max(1, spec.dim));
    if (env.contains("center")) {
      if (!env["center"].is_array() ||
          static_cast<int>(env["center"].size()) != spec.dim) {
        errors.push_back("environment: `center` must be an array of `dim` numbers");
      } else {
        for (int i = 0; i < spec.dim; ++i) {
          if (!env["center"][i].is_number()) {
            errors.push_back("environment: `center` entries must be numbers");
            break;
          }
          spec.center[i] = env["center"][i].get<double>();
        }
      }
    }
    if (env.contains("inner_radius")) {
      if (!env["inner_radius"].is_number() || env["inner_radius"].get<double>() <= 0.0) {
        errors.push_back("environment: `inner_radius` must be > 0");
      } else {
        spec.inner_radius = env["inner_radius"].get<double>();
      }
    }
    if (env.contains("outer_radius")) {
      if (!env["outer_radius"].is_number() || env["outer_radius"].get<double>() <= 0.0) {
        errors.push_back("environment: `outer_radius` must be > 0");
      } else {
        spec.outer_radius = env["outer_radius"].get<double>();
      }
    }
    if (spec.outer_radius < spec.inner_radius) {
      errors.push_back("environment: need inner_radius <= outer_radius");
    } else if (spec.inner_radius > 0.0 &&
               (spec.outer_radius / spec.inner_radius) * spec.outer_radius < 1.0) {
      errors.push_back(
          "environment: kappa * outer_radius must be >= 1 so perturbed queries stay "
          "feasible");
    }
    if (env.contains("lipschitz")) {
      if (!env["lipschitz"].is_number() || env["lipschitz"].get<double>() <= 0.0) {
        errors.push_back("environment: `lipschitz` must be > 0");
      } else {
        spec.lipschitz = env["lipschitz"].get<double>();
      }
    }
    if (env.contains("loss_bound")) {
      if (!env["loss_bound"].is_number() || env["loss_bound"].get<double>() <= 0.0) {
        errors.push_back("environment: `loss_bound` must be > 0");
      } else {
        spec.loss_bound = env["loss_bound"].get<double>();
      }
    }
  } else {
    errors.push_back("environment: unknown kind `" + spec.kind +
                     "` (known: piecewise_expert, csv_loss, quadratic_bco)");
  }
}

void parse_algorithms(const json& root, ExperimentConfig& cfg,
                      std::vector<std::string>& errors) {
  if (!root.contains("algorithms") || !root["algorithms"].is_array() ||
      root["algorithms"].empty()) {
    errors.push_back("`algorithms` must be a non-empty array");
    return;
  }
  const bool bco_env = cfg.environment.kind == "quadratic_bco";
  std::set<std::string> labels;
  int index = 0;
  for (const auto& item : root["algorithms"]) {
    const std::string where = "algorithms[" + std::to_string(index++) + "]";
    if (!item.is_object() || !item.contains("kind") || !item["kind"].is_string()) {
      errors.push_back(where + ": must be an object with a string `kind`");
      continue;
    }
    check_unknown_keys(item, {"kind", "label", "scales"}, where, errors);
    AlgorithmSpec spec;
    spec.kind = item["kind"].get<std::string>();
    const bool mab = kMabKinds.count(spec.kind) > 0;
    const bool bco = kBcoKinds.count(spec.kind) > 0;
    if (!mab && !bco) {
      errors.push_back(where + ": unknown algorithm kind `" + spec.kind + "`");
      continue;
    }
    if (mab && bco_env) {
      errors.push_back(where + ": " + spec.kind + " needs an arm environment");
    }
    if (bco && !bco_env) {
      errors.push_back(where + ": " + spec.kind + " needs a quadratic_bco environment");
    }
    spec.label = item.contains("label") && item["label"].is_string()
                     ? item["label"].get<std::string>()
                     : spec.kind;
    if (spec.label.empty() || spec.label.find('/') != std::string::npos) {
      errors.push_back(where + ": label must be a non-empty path-safe string");
    }
    if (!labels.insert(spec.label).second) {
      errors.push_back(where + ": duplicate algorithm label `" + spec.label +
                       "` (set distinct `label` fields)");
    }
    if (item.contains("scales")) {
      if (spec.kind == "exp3") {
        errors.push_back(where + ": exp3 takes no `scales`");
      } else if (!item["scales"].is_array() || item["scales"].empty()) {
        errors.push_back(where + ": `scales` must be a non-empty array");
      } else {
        std::vector<long> scales;
        long prev = 0;
        bool ok = true;
        for (const auto& s : item["scales"]) {
          if (!s.is_number_integer() || s.get<long>() < 1) {
            errors.push_back(where + ": scales must be positive integers");
            ok = false;
            break;
          }
          const long v = s.get<long>();
          if (v <= prev) {
            errors.push_back(where + ": scales must be strictly increasing");
            ok = false;
            break;
          }
          if (cfg.horizon >= 1 && v > cfg.horizon) {
            errors.push_back(where + ": scale " + std::to_string(v) +
                             " exceeds the horizon");
            ok = false;
            break;
          }
          scales.push_back(v);
          prev = v;
        }
        if (ok) spec.scales = std::move(scales);
      }
    }
    if (spec.kind == "stabl_single_scale" &&
        (!spec.scales.has_value() || spec.scales->size() != 1)) {
      errors.push_back(where + ": stabl_single_scale needs `scales` with exactly one entry");
    }
    cfg.algorithms.push_back(std::move(spec));
  }
}

void parse_seeds(const json& root, ExperimentConfig& cfg,
                 std::vector<std::string>& errors) {
  const bool has_list = root.contains("seeds");
  const bool has_count = root.contains("num_seeds");
  if (has_list && has_count) {
    errors.push_back("specify either `seeds` or `num_seeds`, not both");
    return;
  }
  if (has_list) {
    if (root.contains("base_seed")) {
      errors.push_back("`base_seed` only applies together with `num_seeds`");
    }
    if (!root["seeds"].is_array() || root["seeds"].empty()) {
      errors.push_back("`seeds` must be a non-empty array");
      return;
    }
    for (const auto& s : root["seeds"]) {
      if (!s.is_number_integer() || s.get<long long>() < 0) {
        errors.push_back("`seeds` entries must be non-negative integers");
        return;
      }
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    return;
  }
  if (has_count) {
    if (!root["num_seeds"].is_number_integer() || root["num_seeds"].get<long>() < 1) {
      errors.push_back("`num_seeds` must be a positive integer");
      return;
    }
    std::uint64_t base = 0;
    if (root.contains("base_seed")) {
      if (!root["base_seed"].is_number_integer() ||
          root["base_seed"].get<long long>() < 0) {
        errors.push_back("`base_seed` must be a non-negative integer");
        return;
      }
      base = root["base_seed"].get<std::uint64_t>();
    }
    for (long i = 0; i < root["num_seeds"].get<long>(); ++i) {
      cfg.seeds.push_back(base + static_cast<std::uint64_t>(i));
    }
    return;
  }
  errors.push_back("missing `seeds` (list) or `num_seeds` (count)");
}

json config_to_json(const ExperimentConfig& cfg) {
  json env;
  env["kind"] = cfg.environment.kind;
  if (cfg.environment.kind == "piecewise_expert") {
    env["arms"] = cfg.environment.arms;
    env["change_points"] = cfg.environment.change_points;
    env["boost"] = cfg.environment.boost;
  } else if (cfg.environment.kind == "csv_loss") {
    env["path"] = cfg.environment.csv_path;
  } else if (cfg.environment.kind == "quadratic_bco") {
    env["dim"] = cfg.environment.dim;
    std::vector<double> center(cfg.environment.center.data(),
                               cfg.environment.center.data() + cfg.environment.center.size());
    env["center"] = center;
    env["inner_radius"] = cfg.environment.inner_radius;
    env["outer_radius"] = cfg.environment.outer_radius;
    env["lipschitz"] = cfg.environment.lipschitz;
    env["loss_bound"] = cfg.environment.loss_bound;
  }
  json algos = json::array();
  for (const AlgorithmSpec& a : cfg.algorithms) {
    json item;
    item["kind"] = a.kind;
    item["label"] = a.label;
    if (a.scales.has_value()) item["scales"] = *a.scales;
    algos.push_back(item);
  }
  return json{{"name", cfg.name},
              {"horizon", cfg.horizon},
              {"environment", env},
              {"algorithms", algos},
              {"seeds", cfg.seeds},
              {"moving_average_window", cfg.moving_average_window},
              {"output_dir", cfg.output_dir},
              {"regret_mode", cfg.regret_mode}};
}

struct RunOutput {
  std::vector<double> rewards;  // per round
  double final_cum_reward = 0.0;
  double final_cum_loss = 0.0;
  std::optional<SaRegretResult> sa_exact;
  std::vector<ScaleRegret> sa_geo;
  std::string error;  // empty = success
};

void write_error_json(const fs::path& dir, const std::vector<std::string>& errors) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / "error.json");
  json j{{"schema_version", 1}, {"error", errors.empty() ? "unknown" : errors.front()},
         {"errors", errors}};
  out << j.dump(2) << '\n';
}

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
    out_ << "t,played_arm,observed_arm,reward,loss,cum_reward,cum_loss\n";
  }

  void row(long t, int played, int observed, double reward, double loss,
           double cum_reward, double cum_loss) {
    out_ << t << ',' << played << ',' << observed << ',' << fmt17(reward) << ','
         << fmt17(loss) << ',' << fmt17(cum_reward) << ',' << fmt17(cum_loss) << '\n';
  }

 private:
  std::ofstream out_;
};

RunOutput run_single_mab(const ExperimentConfig& cfg, const AlgorithmSpec& algo,
                         std::uint64_t seed, const fs::path& base) {
  const long T = cfg.horizon;
  Eigen::MatrixXd loss_matrix;
  if (cfg.environment.kind == "piecewise_expert") {
    PiecewiseExpertEnv env = generate_piecewise(cfg.environment.arms, T,
                                                cfg.environment.change_points,
                                                cfg.environment.boost, seed);
    loss_matrix = (1.0 - env.rewards.array()).matrix();
  } else {
    loss_matrix = load_csv_loss_matrix(cfg.environment.csv_path);
    if (loss_matrix.rows() < T) {
      throw std::invalid_argument("csv environment has fewer rows than the horizon");
    }
  }
  const int n = static_cast<int>(loss_matrix.cols());

  MabQuerySession session(
      [&loss_matrix](long t0, int arm) { return loss_matrix(t0, arm); }, T, 2);
  RunStreams streams(seed);
  CsvWriter csv(base / algo.label / ("seed_" + std::to_string(seed) + ".csv"));

  RunOutput out;
  out.rewards.resize(static_cast<size_t>(T));
  std::vector<int> plays(static_cast<size_t>(T));
  std::vector<double> suffered(static_cast<size_t>(T));
  double cum_reward = 0.0;
  double cum_loss = 0.0;
  const auto emit = [&](long t0, int played, int observed) {
    const double loss = loss_matrix(t0, played);
    const double reward = 1.0 - loss;
    cum_reward += reward;
    cum_loss += loss;
    plays[static_cast<size_t>(t0)] = played;
    suffered[static_cast<size_t>(t0)] = loss;
    out.rewards[static_cast<size_t>(t0)] = reward;
    csv.row(t0 + 1, played, observed, reward, loss, cum_reward, cum_loss);
  };

  if (algo.kind == "exp3") {
    Exp3Baseline baseline(n, T);
    for (long t0 = 0; t0 < T; ++t0) {
      const int arm = baseline.choose(streams.play);
      const auto revealed = session.reveal(t0, {arm});
      baseline.update(arm, revealed.at(arm));
      emit(t0, arm, arm);
    }
  } else {
    StablVariant variant = StablVariant::kFull;
    if (algo.kind == "stabl_naive") variant = StablVariant::kNaiveObservation;
    if (algo.kind == "stabl_single_scale") variant = StablVariant::kSingleScale;
    StablState state = make_stabl(n, T, variant, algo.scales);
    for (long t0 = 0; t0 < T; ++t0) {
      const RoundDecision decision = stabl_round(
          state, streams,
          [&session, t0](const std::vector<int>& arms) { return session.reveal(t0, arms); });
      emit(t0, decision.play_arm, decision.observe_arm);
    }
  }

  out.final_cum_reward = cum_reward;
  out.final_cum_loss = cum_loss;
  if (cfg.regret_mode != "off") {
    RunRecord record{&loss_matrix, std::move(plays), std::move(suffered), seed, algo.label};
    if (cfg.regret_mode == "exact") {
      out.sa_exact = sa_regret_exact(record);
    } else {
      out.sa_geo = sa_regret_geometric(record, build_schedule(T));
    }
  }
  return out;
}

RunOutput run_single_bco(const ExperimentConfig& cfg, const AlgorithmSpec& algo,
                         std::uint64_t seed, const fs::path& base) {
  const long T = cfg.horizon;
  const EnvironmentSpec& env = cfg.environment;
  const QuadraticBcoEnv quadratic{env.center};
  const BallSandwichedDomain domain =
      make_ball_domain(env.dim, env.inner_radius, env.outer_radius);
  const BcoMode mode = algo.kind == "bco_two_query" ? BcoMode::kTwoQuerySurrogate
                                                    : BcoMode::kThreeQuery;
  BcoState state =
      make_bco(domain, T, env.lipschitz, mode, algo.scales, env.loss_bound);
  RunStreams streams(seed);
  CsvWriter csv(base / algo.label / ("seed_" + std::to_string(seed) + ".csv"));

  RunOutput out;
  out.rewards.resize(static_cast<size_t>(T));
  double cum_reward = 0.0;
  double cum_loss = 0.0;
  for (long t0 = 0; t0 < T; ++t0) {
    const BcoRoundRecord record = bco_round(
        state, streams, [&quadratic](const Eigen::VectorXd& x) { return quadratic.eval(x); });
    // BCO losses are non-negative reals rather than [0,1] rewards; rows carry
    // reward = -loss and the sampled expert index in the arm columns.
    const double loss = record.loss_played;
    const double reward = -loss;
    cum_reward += reward;
    cum_loss += loss;
    out.rewards[static_cast<size_t>(t0)] = reward;
    csv.row(t0 + 1, record.sampled_expert, record.sampled_expert, reward, loss,
            cum_reward, cum_loss);
  }
  out.final_cum_reward = cum_reward;
  out.final_cum_loss = cum_loss;
  return out;
}

RunOutput run_single(const ExperimentConfig& cfg, const AlgorithmSpec& algo,
                     std::uint64_t seed, const fs::path& base) {
  if (kBcoKinds.count(algo.kind)) return run_single_bco(cfg, algo, seed, base);
  return run_single_mab(cfg, algo, seed, base);
}

}  // namespace

ValidationResult validate_config(const std::string& path) {
  ValidationResult result;
  std::vector<std::string>& errors = result.errors;

  std::ifstream in(path);
  if (!in) {
    errors.push_back("cannot open config file: " + path);
    return result;
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    errors.push_back(std::string("JSON parse error: ") + e.what());
    return result;
  }
  if (!root.is_object()) {
    errors.push_back("config root must be an object");
    return result;
  }

  ExperimentConfig cfg;
  check_unknown_keys(root,
                     {"name", "horizon", "environment", "algorithms", "seeds",
                      "num_seeds", "base_seed", "moving_average_window", "output_dir",
                      "regret_mode"},
                     "config", errors);

  if (!root.contains("name") || !root["name"].is_string() ||
      root["name"].get<std::string>().empty()) {
    errors.push_back("missing `name` field (non-empty string)");
  } else {
    cfg.name = root["name"].get<std::string>();
    if (cfg.name.find('/') != std::string::npos) {
      errors.push_back("`name` must not contain `/`");
    }
  }

  if (!root.contains("horizon")) {
    errors.push_back("missing `horizon` field");
  } else if (!root["horizon"].is_number_integer() || root["horizon"].get<long>() < 1) {
    errors.push_back("`horizon` must be a positive integer");
  } else {
    cfg.horizon = root["horizon"].get<long>();
  }

  if (!root.contains("environment")) {
    errors.push_back("missing `environment` object");
  } else {
    parse_environment(root["environment"], cfg, errors);
  }

  parse_algorithms(root, cfg, errors);
  parse_seeds(root, cfg, errors);

  cfg.moving_average_window = std::min<long>(50, std::max<long>(1, cfg.horizon));
  if (root.contains("moving_average_window")) {
    if (!root["moving_average_window"].is_number_integer() ||
        root["moving_average_window"].get<long>() < 1 ||
        (cfg.horizon >= 1 && root["moving_average_window"].get<long>() > cfg.horizon)) {
      errors.push_back("`moving_average_window` must be an integer in [1, horizon]");
    } else {
      cfg.moving_average_window = root["moving_average_window"].get<long>();
    }
  }

  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string() || root["output_dir"].get<std::string>().empty()) {
      errors.push_back("`output_dir` must be a non-empty string");
    } else {
      cfg.output_dir = root["output_dir"].get<std::string>();
    }
  }

  if (root.contains("regret_mode")) {
    if (!root["regret_mode"].is_string() ||
        !kRegretModes.count(root["regret_mode"].get<std::string>())) {
      errors.push_back("`regret_mode` must be one of exact, geometric, off");
    } else {
      cfg.regret_mode = root["regret_mode"].get<std::string>();
    }
  }
  if (cfg.environment.kind == "quadratic_bco" && cfg.regret_mode != "off") {
    errors.push_back("regret evaluation applies to arm environments; use regret_mode off");
  }

  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

int run_experiment(const ExperimentConfig& config, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path base = fs::path(config.output_dir) / config.name;
  try {
    fs::create_directories(base);
    for (const AlgorithmSpec& algo : config.algorithms) {
      fs::create_directories(base / algo.label);
    }
  } catch (const std::exception& e) {
    write_error_json(fs::path(config.output_dir),
                     {std::string("cannot create output directories: ") + e.what()});
    return 1;
  }

  const size_t seeds = config.seeds.size();
  const size_t total = config.algorithms.size() * seeds;
  std::vector<RunOutput> outputs(total);
  std::atomic<size_t> next{0};
  const auto worker_fn = [&]() {
    while (true) {
      const size_t index = next.fetch_add(1);
      if (index >= total) break;
      const AlgorithmSpec& algo = config.algorithms[index / seeds];
      const std::uint64_t seed = config.seeds[index % seeds];
      try {
        outputs[index] = run_single(config, algo, seed, base);
      } catch (const std::exception& e) {
        outputs[index].error = std::string(e.what());
      }
    }
  };

  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(total)));
  if (pool == 1) {
    worker_fn();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(pool));
    for (int i = 0; i < pool; ++i) threads.emplace_back(worker_fn);
    for (std::thread& t : threads) t.join();
  }

  std::vector<std::string> failures;
  for (size_t index = 0; index < total; ++index) {
    if (!outputs[index].error.empty()) {
      const AlgorithmSpec& algo = config.algorithms[index / seeds];
      failures.push_back(algo.label + "/seed_" +
                         std::to_string(config.seeds[index % seeds]) + ": " +
                         outputs[index].error);
    }
  }
  if (!failures.empty()) {
    write_error_json(base, failures);
    return 1;
  }

  // Per-algorithm moving-average curve: mean across seeds, trailing window.
  for (size_t ai = 0; ai < config.algorithms.size(); ++ai) {
    const long T = config.horizon;
    std::vector<double> mean_curve(static_cast<size_t>(T), 0.0);
    for (size_t si = 0; si < seeds; ++si) {
      const std::vector<double> curve = moving_average(
          outputs[ai * seeds + si].rewards, config.moving_average_window);
      for (long t = 0; t < T; ++t) mean_curve[static_cast<size_t>(t)] += curve[static_cast<size_t>(t)];
    }
    std::ofstream ma(base / config.algorithms[ai].label / "moving_average.csv");
    ma << "t,mean_ma_reward\n";
    for (long t = 0; t < T; ++t) {
      ma << (t + 1) << ','
         << fmt17(mean_curve[static_cast<size_t>(t)] / static_cast<double>(seeds)) << '\n';
    }
  }

  json results = json::array();
  for (size_t ai = 0; ai < config.algorithms.size(); ++ai) {
    const AlgorithmSpec& algo = config.algorithms[ai];
    std::vector<double> final_rewards;
    std::vector<double> final_losses;
    for (size_t si = 0; si < seeds; ++si) {
      final_rewards.push_back(outputs[ai * seeds + si].final_cum_reward);
      final_losses.push_back(outputs[ai * seeds + si].final_cum_loss);
    }
    json entry{{"algorithm", algo.label},
               {"kind", algo.kind},
               {"seeds", config.seeds},
               {"final_cum_reward",
                {{"mean", mean_of(final_rewards)},
                 {"stderr", stderr_of(final_rewards)},
                 {"per_seed", final_rewards}}},
               {"final_cum_loss",
                {{"mean", mean_of(final_losses)},
                 {"stderr", stderr_of(final_losses)},
                 {"per_seed", final_losses}}}};
    if (config.regret_mode == "exact") {
      std::vector<double> values;
      json per_seed = json::array();
      for (size_t si = 0; si < seeds; ++si) {
        const SaRegretResult& r = *outputs[ai * seeds + si].sa_exact;
        values.push_back(r.value);
        per_seed.push_back(json{{"seed", config.seeds[si]},
                                {"value", r.value},
                                {"start", r.start},
                                {"end", r.end}});
      }
      entry["sa_regret"] = json{{"mode", "exact"},
                                {"mean", mean_of(values)},
                                {"stderr", stderr_of(values)},
                                {"per_seed", per_seed}};
    } else if (config.regret_mode == "geometric") {
      json per_scale = json::array();
      const size_t scales = outputs[ai * seeds].sa_geo.size();
      for (size_t s = 0; s < scales; ++s) {
        std::vector<double> values;
        for (size_t si = 0; si < seeds; ++si) {
          values.push_back(outputs[ai * seeds + si].sa_geo[s].max_regret);
        }
        per_scale.push_back(json{{"scale", outputs[ai * seeds].sa_geo[s].scale},
                                 {"mean", mean_of(values)},
                                 {"stderr", stderr_of(values)},
                                 {"per_seed", values}});
      }
      entry["sa_regret"] = json{{"mode", "geometric"}, {"per_scale", per_scale}};
    }
    results.push_back(entry);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json summary{{"schema_version", 1},
               {"experiment", config.name},
               {"wall_clock_seconds", wall},
               {"config", config_to_json(config)},
               {"results", results}};
  std::ofstream out(base / "summary.json");
  out << summary.dump(2) << '\n';
  return 0;
}

}  // namespace stabl
