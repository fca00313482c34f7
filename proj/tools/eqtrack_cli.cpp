// eqtrack: run tracking experiments, validate bounds, generate demand data.
//
// Exit codes: 0 ok, 1 validation failed, 2 config error, 3 math precondition
// error, 4 I/O or parse error. Errors are also printed to stderr as one JSON
// object {"error": {"kind": ..., "message": ...}}.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqtrack/experiment.hpp"
#include "eqtrack/io.hpp"
#include "eqtrack/market.hpp"
#include "eqtrack/parallel.hpp"

using namespace eqtrack;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kConfigError = 2;
constexpr int kMathError = 3;
constexpr int kIoError = 4;

int report_error(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump()
            << "\n";
  return code;
}

std::string default_out_dir() {
  const char* env = std::getenv("EQTRACK_OUT_DIR");
  return env && *env ? env : "eqtrack_out";
}

struct Overrides {
  std::optional<std::string> scenario, solver, out;
  std::optional<double> eta;
  std::optional<int> batch_size, horizon, replications, trajectory_files;
  std::optional<std::uint64_t> seed;
  std::vector<double> deltas;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "synthetic-static | synthetic-drift | market | custom");
    cmd->add_option("--solver", solver, "conceptual | stochastic");
    cmd->add_option("--eta", eta, "Step size");
    cmd->add_option("-N,--batch-size", batch_size, "Samples per gradient estimate");
    cmd->add_option("--horizon", horizon, "Number of time steps");
    cmd->add_option("--replications", replications, "Monte Carlo replications");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--deltas", deltas, "Failure probabilities for the high-probability bound");
    cmd->add_option("--trajectory-files", trajectory_files,
                    "Per-replication trajectory CSVs to write");
    cmd->add_option("-o,--out", out, "Output directory (default $EQTRACK_OUT_DIR or eqtrack_out)");
  }

  void apply(json& j) const {
    if (scenario) j["scenario"] = *scenario;
    if (solver) j["solver"] = *solver;
    if (eta) j["eta"] = *eta;
    if (batch_size) j["batch_size"] = *batch_size;
    if (horizon) j["horizon"] = *horizon;
    if (replications) j["replications"] = *replications;
    if (seed) j["seed"] = *seed;
    if (!deltas.empty()) j["deltas"] = deltas;
    if (trajectory_files) j["trajectory_files"] = *trajectory_files;
    if (out) j["out_dir"] = *out;
  }
};

ExperimentConfig load_config(const std::string& path, const Overrides& ov) {
  json j = json::object();
  std::string base = ".";
  if (!path.empty()) {
    const std::string text = read_text_file(path);
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    base = std::filesystem::path(path).parent_path().string();
    if (base.empty()) base = ".";
  }
  ov.apply(j);
  ExperimentConfig cfg = ExperimentConfig::from_json(j, base);
  if (cfg.out_dir.empty()) cfg.out_dir = default_out_dir();
  return cfg;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return report_error(kConfigError, "config_error", e.what());
  } catch (const NotContractive& e) {
    return report_error(kMathError, "not_contractive", e.what());
  } catch (const StepSizeTooLarge& e) {
    return report_error(kMathError, "step_size_too_large", e.what());
  } catch (const MaxItersExceeded& e) {
    return report_error(kMathError, "max_iters_exceeded", e.what());
  } catch (const std::domain_error& e) {
    return report_error(kMathError, "math_error", e.what());
  } catch (const IoError& e) {
    return report_error(kIoError, "io_error", e.what());
  } catch (const ParseError& e) {
    return report_error(kIoError, "parse_error", e.what());
  } catch (const json::exception& e) {
    return report_error(kConfigError, "config_error", e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(kConfigError, "config_error", e.what());
  } catch (const std::out_of_range& e) {
    return report_error(kConfigError, "config_error", e.what());
  } catch (const std::exception& e) {
    return report_error(kMathError, "error", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Track equilibria of decision-dependent stochastic saddle problems"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: OpenMP runtime)");

  std::string config_path;
  Overrides run_ov;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV/JSON artifacts");
  run->add_option("config", config_path, "JSON config file");
  run_ov.add_to(run);

  std::string validate_dir;
  Overrides val_ov;
  auto* validate = app.add_subcommand("validate-bounds", "Check a finished run against its bounds");
  validate->add_option("config", config_path, "JSON config of the run");
  validate->add_option("--dir", validate_dir, "Run directory (instead of a config)");
  val_ov.add_to(validate);

  Overrides insp_ov;
  bool per_slice = false;
  auto* inspect = app.add_subcommand("inspect", "Print the constants of a config's stream");
  inspect->add_option("config", config_path, "JSON config file");
  inspect->add_flag("--per-slice", per_slice, "Include constants for every time step");
  insp_ov.add_to(inspect);

  std::string spec_path, gen_out;
  int days = 365;
  std::uint64_t gen_seed = 42;
  double noise = 1.0;
  auto* gen = app.add_subcommand("gen-demand", "Write synthetic demand CSVs for a market spec");
  gen->add_option("--spec", spec_path, "Market spec JSON (default spec if omitted)");
  gen->add_option("--days", days, "Days per series")->check(CLI::Range(2, 100000));
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--noise", noise, "Noise scale")->check(CLI::NonNegativeNumber);
  gen->add_option("-o,--out", gen_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kConfigError, "usage_error", e.what());
  }
  set_max_threads(threads);

  if (*run) {
    return guarded([&] {
      const ExperimentConfig cfg = load_config(config_path, run_ov);
      const Artifacts artifacts = run_experiment(cfg);
      write_artifacts(artifacts, cfg.out_dir);
      json summary = {{"out_dir", cfg.out_dir}, {"constants", artifacts.manifest["constants"]},
                      {"noise", artifacts.manifest["noise"]}};
      std::cout << summary.dump(2) << "\n";
      return kOk;
    });
  }
  if (*validate) {
    return guarded([&] {
      std::string dir = validate_dir;
      if (dir.empty()) dir = load_config(config_path, val_ov).out_dir;
      const json report = validate_artifacts(dir);
      std::cout << report.dump(2) << "\n";
      return report.at("passed").get<bool>() ? kOk : kValidationFailed;
    });
  }
  if (*inspect) {
    return guarded([&] {
      const ExperimentConfig cfg = load_config(config_path, insp_ov);
      std::cout << inspect_experiment(cfg, per_slice).dump(2) << "\n";
      return kOk;
    });
  }
  return guarded([&] {
    market::MarketSpec spec;
    if (!spec_path.empty()) {
      try {
        spec = market::market_spec_from_json(json::parse(read_text_file(spec_path)));
      } catch (const json::exception& e) {
        throw ConfigError(spec_path + ": " + e.what());
      }
    }
    const std::string dir = gen_out.empty() ? default_out_dir() : gen_out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
    const auto [p1, p2] = market::generate_market_demand(spec, days, gen_seed, noise);
    json files = {{"provider1", json::array()}, {"provider2", json::array()}};
    const auto emit = [&](const std::vector<market::DemandSeries>& series, const std::string& key) {
      for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string name = key + "_station" + std::to_string(i) + ".csv";
        market::write_demand((std::filesystem::path(dir) / name).string(), series[i]);
        files[key].push_back(name);
      }
    };
    emit(p1, "provider1");
    emit(p2, "provider2");
    std::cout << json{{"out_dir", dir}, {"demand", files}}.dump(2) << "\n";
    return kOk;
  });
}
