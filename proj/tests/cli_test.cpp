#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stabl/experiment.hpp"
#include "test_support.hpp"

using namespace stabl;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "stabl_cli_test";

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path path = kRoot / name;
  std::ofstream out(path);
  out << body;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool has_error_containing(const ValidationResult& result, const std::string& needle) {
  for (const std::string& error : result.errors) {
    if (error.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string mab_config(const std::string& name, const std::string& out_dir,
                       const std::string& extra = "") {
  return "{\n"
         "  \"name\": \"" + name + "\",\n"
         "  \"horizon\": 8,\n"
         "  \"environment\": {\"kind\": \"piecewise_expert\", \"arms\": 2,"
         " \"change_points\": [4], \"boost\": 0.5},\n"
         "  \"algorithms\": [{\"kind\": \"stabl\"}, {\"kind\": \"exp3\"}],\n"
         "  \"seeds\": [1, 2],\n"
         "  \"moving_average_window\": 4,\n"
         "  \"output_dir\": \"" + out_dir + "\",\n"
         "  \"regret_mode\": \"exact\"" + extra + "\n"
         "}\n";
}

std::vector<std::vector<std::string>> parse_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

int main() {
  fs::remove_all(kRoot);
  fs::create_directories(kRoot);

  {  // a well-formed config validates and normalizes
    const auto path = write_file("good.json", mab_config("smoke", (kRoot / "out_a").string()));
    const ValidationResult result = validate_config(path.string());
    REQUIRE(result.errors.empty());
    REQUIRE(result.config.has_value());
    const ExperimentConfig& cfg = *result.config;
    REQUIRE(cfg.name == "smoke");
    REQUIRE(cfg.horizon == 8);
    REQUIRE(cfg.environment.arms == 2);
    REQUIRE(cfg.environment.change_points == (std::vector<long>{4}));
    REQUIRE(cfg.algorithms.size() == 2);
    REQUIRE(cfg.algorithms[0].label == "stabl");  // label defaults to kind
    REQUIRE(cfg.seeds == (std::vector<std::uint64_t>{1, 2}));
    REQUIRE(cfg.moving_average_window == 4);
    REQUIRE(cfg.regret_mode == "exact");
  }

  {  // window defaults to min(50, horizon)
    const auto path = write_file("defwin.json",
                                 "{\"name\":\"w\",\"horizon\":8,"
                                 "\"environment\":{\"kind\":\"piecewise_expert\",\"arms\":2},"
                                 "\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[1]}");
    const ValidationResult result = validate_config(path.string());
    REQUIRE(result.config.has_value());
    REQUIRE(result.config->moving_average_window == 8);
    REQUIRE(result.config->regret_mode == "off");
    REQUIRE(result.config->output_dir == "out");
  }

  {  // num_seeds + base_seed expansion
    const auto path = write_file("seeds.json",
                                 "{\"name\":\"s\",\"horizon\":8,"
                                 "\"environment\":{\"kind\":\"piecewise_expert\",\"arms\":2},"
                                 "\"algorithms\":[{\"kind\":\"exp3\"}],"
                                 "\"num_seeds\":3,\"base_seed\":10}");
    const ValidationResult result = validate_config(path.string());
    REQUIRE(result.config.has_value());
    REQUIRE(result.config->seeds == (std::vector<std::uint64_t>{10, 11, 12}));
  }

  {  // every malformation is reported, none crashes
    const struct {
      const char* name;
      std::string body;
      const char* needle;
    } cases[] = {
        {"e01.json", "{", "parse error"},
        {"e02.json",
         "{\"name\":\"x\",\"environment\":{\"kind\":\"piecewise_expert\",\"arms\":2},"
         "\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[1]}",
         "horizon"},
        {"e03.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2,\"change_points\":[8]},\"algorithms\":[{\"kind\":\"exp3\"}],"
         "\"seeds\":[1]}",
         "change point"},
        {"e04.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"foo\"}],\"seeds\":[1]}",
         "unknown algorithm kind"},
        {"e05.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"stabl\"},{\"kind\":\"stabl\"}],"
         "\"seeds\":[1]}",
         "duplicate algorithm label"},
        {"e06.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"bco_two_query\"}],\"seeds\":[1]}",
         "quadratic_bco environment"},
        {"e07.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"quadratic_bco\","
         "\"dim\":2},\"algorithms\":[{\"kind\":\"stabl\"}],\"seeds\":[1]}",
         "arm environment"},
        {"e08.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[1],"
         "\"num_seeds\":2}",
         "not both"},
        {"e09.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"quadratic_bco\","
         "\"dim\":2},\"algorithms\":[{\"kind\":\"bco_two_query\"}],\"seeds\":[1],"
         "\"regret_mode\":\"exact\"}",
         "arm environments"},
        {"e10.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[1],"
         "\"moving_average_window\":9}",
         "moving_average_window"},
        {"e11.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[1],"
         "\"regretmode\":\"off\"}",
         "unknown field"},
        {"e12.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"stabl_single_scale\"}],\"seeds\":[1]}",
         "exactly one entry"},
        {"e13.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"stabl\",\"scales\":[4,2]}],"
         "\"seeds\":[1]}",
         "strictly increasing"},
        {"e14.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"exp3\",\"scales\":[4]}],\"seeds\":[1]}",
         "takes no"},
        {"e15.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"csv_loss\","
         "\"path\":\"/nonexistent.csv\"},\"algorithms\":[{\"kind\":\"exp3\"}],"
         "\"seeds\":[1]}",
         "does not exist"},
        {"e16.json",
         "{\"name\":\"x\",\"horizon\":8,\"environment\":{\"kind\":\"piecewise_expert\","
         "\"arms\":2},\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[1],"
         "\"base_seed\":4}",
         "base_seed"},
    };
    for (const auto& c : cases) {
      const auto path = write_file(c.name, c.body);
      const ValidationResult result = validate_config(path.string());
      REQUIRE(!result.config.has_value());
      if (!has_error_containing(result, c.needle)) {
        testsupport::report(__FILE__, __LINE__,
                            std::string(c.name) + ": no error mentioning `" +
                                c.needle + "`");
      }
    }
    const ValidationResult missing = validate_config((kRoot / "nope.json").string());
    REQUIRE(!missing.config.has_value());
    REQUIRE(has_error_containing(missing, "cannot open"));
  }

  {  // end-to-end run: artifacts, shapes, and cumulative consistency
    const auto path = write_file("run_a.json", mab_config("smoke", (kRoot / "out_a").string()));
    const ValidationResult result = validate_config(path.string());
    REQUIRE(result.config.has_value());
    REQUIRE(run_experiment(*result.config, 1) == 0);

    const fs::path base = kRoot / "out_a" / "smoke";
    for (const char* algo : {"stabl", "exp3"}) {
      for (const char* file : {"seed_1.csv", "seed_2.csv", "moving_average.csv"}) {
        REQUIRE(fs::exists(base / algo / file));
      }
    }
    REQUIRE(fs::exists(base / "summary.json"));

    const auto rows = parse_csv(base / "stabl" / "seed_1.csv");
    REQUIRE(rows.size() == 9);  // header + 8 rounds
    REQUIRE(rows[0] ==
            (std::vector<std::string>{"t", "played_arm", "observed_arm", "reward",
                                      "loss", "cum_reward", "cum_loss"}));
    double cum_reward = 0.0;
    for (size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() == 7);
      REQUIRE(std::stol(rows[i][0]) == static_cast<long>(i));
      const double reward = std::stod(rows[i][3]);
      const double loss = std::stod(rows[i][4]);
      REQUIRE(std::fabs(reward + loss - 1.0) <= 1e-12);
      cum_reward += reward;
      REQUIRE(std::fabs(std::stod(rows[i][5]) - cum_reward) <= 1e-12);
    }

    const auto ma = parse_csv(base / "stabl" / "moving_average.csv");
    REQUIRE(ma.size() == 9);
    REQUIRE(ma[0] == (std::vector<std::string>{"t", "mean_ma_reward"}));

    const nlohmann::json summary =
        nlohmann::json::parse(read_file(base / "summary.json"));
    REQUIRE(summary["schema_version"] == 1);
    REQUIRE(summary["experiment"] == "smoke");
    REQUIRE(summary["results"].size() == 2);
    REQUIRE(summary["results"][0]["final_cum_reward"]["per_seed"].size() == 2);
    REQUIRE(summary["results"][0]["sa_regret"]["mode"] == "exact");
    REQUIRE(summary["results"][0]["sa_regret"]["per_seed"].size() == 2);
    REQUIRE(summary["config"]["horizon"] == 8);
  }

  {  // outputs are bit-identical for any worker count and across reruns
    const auto path_b = write_file("run_b.json", mab_config("smoke", (kRoot / "out_b").string()));
    const ValidationResult result_b = validate_config(path_b.string());
    REQUIRE(run_experiment(*result_b.config, 4) == 0);

    const fs::path base_a = kRoot / "out_a" / "smoke";
    const fs::path base_b = kRoot / "out_b" / "smoke";
    for (const char* algo : {"stabl", "exp3"}) {
      for (const char* file : {"seed_1.csv", "seed_2.csv", "moving_average.csv"}) {
        REQUIRE(read_file(base_a / algo / file) == read_file(base_b / algo / file));
      }
    }

    const std::string before = read_file(base_a / "stabl" / "seed_1.csv");
    const auto path_a = write_file("run_a.json", mab_config("smoke", (kRoot / "out_a").string()));
    REQUIRE(run_experiment(*validate_config(path_a.string()).config, 2) == 0);
    REQUIRE(read_file(base_a / "stabl" / "seed_1.csv") == before);
  }

  {  // BCO run: reward = -loss rows, no sampled expert in two-query mode
    const auto path = write_file(
        "bco.json",
        "{\"name\":\"bco\",\"horizon\":16,"
        "\"environment\":{\"kind\":\"quadratic_bco\",\"dim\":2,\"center\":[0.3,0.0],"
        "\"inner_radius\":1.0,\"outer_radius\":1.0,\"lipschitz\":2.6,"
        "\"loss_bound\":1.69},"
        "\"algorithms\":[{\"kind\":\"bco_three_query\"},{\"kind\":\"bco_two_query\"}],"
        "\"num_seeds\":1,\"moving_average_window\":4,"
        "\"output_dir\":\"" + (kRoot / "out_bco").string() + "\"}");
    const ValidationResult result = validate_config(path.string());
    REQUIRE(result.errors.empty());
    REQUIRE(run_experiment(*result.config, 1) == 0);

    const fs::path base = kRoot / "out_bco" / "bco";
    const auto three = parse_csv(base / "bco_three_query" / "seed_0.csv");
    REQUIRE(three.size() == 17);
    for (size_t i = 1; i < three.size(); ++i) {
      REQUIRE(std::stod(three[i][3]) == -std::stod(three[i][4]));
      const int expert = std::stoi(three[i][1]);
      REQUIRE(expert >= 0);
      REQUIRE(three[i][1] == three[i][2]);
    }
    const auto two = parse_csv(base / "bco_two_query" / "seed_0.csv");
    for (size_t i = 1; i < two.size(); ++i) REQUIRE(two[i][1] == "-1");
    const nlohmann::json summary = nlohmann::json::parse(read_file(base / "summary.json"));
    REQUIRE(!summary["results"][0].contains("sa_regret"));
  }

  {  // csv_loss environment: round trip and a horizon overrun at run time
    write_file("loss4.csv", "t,arm_0,arm_1\n1,0.5,0\n2,0.25,1\n3,0,0.5\n4,1,0.25\n");
    const auto good = write_file(
        "csvrun.json",
        "{\"name\":\"csvrun\",\"horizon\":4,"
        "\"environment\":{\"kind\":\"csv_loss\",\"path\":\"" + (kRoot / "loss4.csv").string() + "\"},"
        "\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[3],"
        "\"moving_average_window\":2,"
        "\"output_dir\":\"" + (kRoot / "out_csv").string() + "\"}");
    REQUIRE(run_experiment(*validate_config(good.string()).config, 1) == 0);
    REQUIRE(fs::exists(kRoot / "out_csv" / "csvrun" / "exp3" / "seed_3.csv"));

    const auto overrun = write_file(
        "csvbad.json",
        "{\"name\":\"csvbad\",\"horizon\":8,"
        "\"environment\":{\"kind\":\"csv_loss\",\"path\":\"" + (kRoot / "loss4.csv").string() + "\"},"
        "\"algorithms\":[{\"kind\":\"exp3\"}],\"seeds\":[3],"
        "\"moving_average_window\":2,"
        "\"output_dir\":\"" + (kRoot / "out_err").string() + "\"}");
    const ValidationResult vr = validate_config(overrun.string());
    REQUIRE(vr.config.has_value());  // the file exists; the overrun is a run error
    REQUIRE(run_experiment(*vr.config, 1) == 1);
    const fs::path error_path = kRoot / "out_err" / "csvbad" / "error.json";
    REQUIRE(fs::exists(error_path));
    const nlohmann::json error = nlohmann::json::parse(read_file(error_path));
    REQUIRE(!error["errors"].empty());
  }

  return testsupport::finish("cli_test");
}
