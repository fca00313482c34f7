#include "eqtrack/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "eqtrack/io.hpp"
#include "eqtrack/market.hpp"
#include "eqtrack/parallel.hpp"
#include "eqtrack/subweibull.hpp"
#include "eqtrack/synthetic.hpp"

namespace eqtrack {

using nlohmann::json;

namespace {

constexpr int kDefaultTrajectoryFiles = 100;

const std::set<std::string> kTopKeys{
    "scenario", "solver",   "eta",        "batch_size", "seed",  "enforce_cap",
    "horizon",  "replications", "deltas", "z0",         "nu",    "theta",
    "theta_grid", "trajectory_files", "out_dir", "oracle", "synthetic", "market", "problem"};
const std::set<std::string> kOracleKeys{"eta", "tolerance", "max_iters"};
const std::set<std::string> kSyntheticKeys{"mu0", "eps", "sigma", "half_width", "period",
                                           "amplitude"};
const std::set<std::string> kMarketKeys{
    "stations_provider1", "stations_provider2", "gamma1", "gamma2", "c", "midpoint", "c_table",
    "price_bound", "days", "day", "noise_sigma", "demand_seed", "demand_noise", "normalize",
    "normalize_by", "demand"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

json block(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.params.contains(name) ? cfg.params.at(name) : json::object();
}

std::string resolve(const std::string& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

std::vector<market::DemandSeries> load_series(const json& paths, const std::string& base,
                                              const std::string& what) {
  if (!paths.is_array()) throw ConfigError("market.demand." + what + " must be a list of paths");
  std::vector<market::DemandSeries> out;
  for (const auto& p : paths) out.push_back(market::load_demand(resolve(base, p.get<std::string>())));
  return out;
}

Scenario synthetic_scenario(const ExperimentConfig& cfg, bool drifting) {
  const json s = block(cfg, "synthetic");
  const double mu0 = get(s, "mu0", 1.0);
  const double eps = get(s, "eps", 0.5);
  const double sigma = get(s, "sigma", 1.0);
  const double half_width = get(s, "half_width", 10.0);
  const double period = get(s, "period", 100.0);
  const double amplitude = get(s, "amplitude", 1.0);
  if (!(sigma >= 0.0) || !(half_width > 0.0) || !(period > 0.0)) {
    throw ConfigError("synthetic: sigma must be >= 0, half_width and period positive");
  }
  const int horizon = cfg.effective_horizon();
  Scenario sc;
  if (drifting) {
    std::vector<std::shared_ptr<const SaddleProblem>> slices;
    for (int t = 0; t < horizon; ++t) {
      slices.push_back(synthetic::scalar_problem(
          amplitude * std::sin(2.0 * std::numbers::pi * t / period), eps, sigma, half_width));
    }
    sc.stream = ProblemStream(std::move(slices));
  } else {
    sc.stream = ProblemStream::constant(synthetic::scalar_problem(mu0, eps, sigma, half_width),
                                        horizon);
  }
  return sc;
}

Scenario market_scenario(const ExperimentConfig& cfg) {
  const json m = block(cfg, "market");
  json spec_json = json::object();
  for (const char* key : {"stations_provider1", "stations_provider2", "gamma1", "gamma2", "c",
                          "midpoint", "c_table", "price_bound"}) {
    if (m.contains(key)) spec_json[key] = m.at(key);
  }
  market::MarketSpec spec;
  try {
    spec = market::market_spec_from_json(spec_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("market spec: ") + e.what());
  }

  market::MarketStreamOptions opt;
  opt.day = get(m, "day", 1);
  opt.horizon = cfg.effective_horizon();
  opt.noise_sigma = get(m, "noise_sigma", opt.noise_sigma);
  opt.normalize = get(m, "normalize", true);
  const std::string by = get<std::string>(m, "normalize_by", "variance");
  if (by == "variance") {
    opt.normalize_by = market::NormalizeBy::Variance;
  } else if (by == "stddev") {
    opt.normalize_by = market::NormalizeBy::StdDev;
  } else {
    throw ConfigError("market.normalize_by must be 'variance' or 'stddev'");
  }

  Scenario sc;
  std::vector<market::DemandSeries> d1, d2;
  if (m.contains("demand")) {
    const json& d = m.at("demand");
    reject_unknown(d, {"provider1", "provider2"}, "market.demand");
    d1 = load_series(d.at("provider1"), cfg.base_dir, "provider1");
    d2 = load_series(d.at("provider2"), cfg.base_dir, "provider2");
  } else {
    const auto days = get(m, "days", 3);
    const auto seed = get<std::uint64_t>(m, "demand_seed", 42);
    const double noise = get(m, "demand_noise", 1.0);
    std::tie(d1, d2) = market::generate_market_demand(spec, days, seed, noise);
    sc.seeds["demand_seed"] = seed;
  }
  sc.stream = market::build_market_stream(spec, d1, d2, opt);
  return sc;
}

Vector default_start(const SaddleProblem& p) {
  // upper corner of a box, a boundary point of a ball
  return p.project(Vector::Constant(p.dim(), 1e6));
}

std::string label(double v) { return format_number(v); }

void append_row(std::string& out, const std::vector<double>& values, int t) {
  out += std::to_string(t);
  for (double v : values) {
    out += ',';
    out += format_number(v);
  }
  out += '\n';
}

std::vector<double> parse_row(const std::vector<std::string>& row, std::size_t width,
                              const std::string& where) {
  if (row.size() != width) {
    throw ParseError(where + ": expected " + std::to_string(width) + " columns, got " +
                     std::to_string(row.size()));
  }
  std::vector<double> out;
  out.reserve(width);
  for (const auto& cell : row) out.push_back(parse_number(cell, where));
  return out;
}

CsvTable read_checked(const std::string& path, const std::vector<std::string>& header) {
  CsvTable t = read_csv(path);
  if (t.rows.empty() || t.rows[0] != header) throw ParseError(path + ": unexpected header");
  return t;
}

const std::vector<std::string> kTrajectoryHeader{"t",        "err",       "xi_norm",
                                                 "bound_det", "bound_exp", "delta_t"};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::string& base_dir) {
  reject_unknown(j, kTopKeys, "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.scenario = get<std::string>(j, "scenario", c.scenario);
  c.solver = get<std::string>(j, "solver", c.solver);
  c.solver_cfg.eta = get(j, "eta", c.solver_cfg.eta);
  c.solver_cfg.batch_size = get(j, "batch_size", c.solver_cfg.batch_size);
  c.solver_cfg.rng_seed = get<std::uint64_t>(j, "seed", c.solver_cfg.rng_seed);
  c.solver_cfg.enforce_cap = get(j, "enforce_cap", c.solver_cfg.enforce_cap);
  c.horizon = get(j, "horizon", c.horizon);
  c.replications = get(j, "replications", c.replications);
  c.deltas = get(j, "deltas", c.deltas);
  if (j.contains("z0")) {
    try {
      c.z0 = vector_from_json(j.at("z0"), "z0");
    } catch (const ParseError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("nu")) c.nu = get(j, "nu", 0.0);
  if (j.contains("theta")) c.theta = get(j, "theta", 0.5);
  c.theta_grid = get(j, "theta_grid", c.theta_grid);
  c.trajectory_files = get(j, "trajectory_files", c.trajectory_files);
  c.out_dir = get<std::string>(j, "out_dir", c.out_dir);
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    reject_unknown(o, kOracleKeys, "oracle");
    c.oracle_cfg.eta = get(o, "eta", c.oracle_cfg.eta);
    c.oracle_cfg.tolerance = get(o, "tolerance", c.oracle_cfg.tolerance);
    c.oracle_cfg.max_iters = get(o, "max_iters", c.oracle_cfg.max_iters);
  }
  if (j.contains("synthetic")) {
    reject_unknown(j.at("synthetic"), kSyntheticKeys, "synthetic");
    c.params["synthetic"] = j.at("synthetic");
  }
  if (j.contains("market")) {
    reject_unknown(j.at("market"), kMarketKeys, "market");
    c.params["market"] = j.at("market");
  }
  if (j.contains("problem")) c.params["problem"] = j.at("problem");
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j = {{"scenario", scenario},
            {"solver", solver},
            {"eta", solver_cfg.eta},
            {"batch_size", solver_cfg.batch_size},
            {"seed", solver_cfg.rng_seed},
            {"enforce_cap", solver_cfg.enforce_cap},
            {"horizon", effective_horizon()},
            {"replications", effective_replications()},
            {"deltas", deltas},
            {"theta_grid", theta_grid},
            {"oracle",
             {{"eta", oracle_cfg.eta},
              {"tolerance", oracle_cfg.tolerance},
              {"max_iters", oracle_cfg.max_iters}}}};
  if (z0) j["z0"] = vector_to_json(*z0);
  if (nu) j["nu"] = *nu;
  if (theta) j["theta"] = *theta;
  for (const auto& [key, value] : params.items()) j[key] = value;
  return j;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> scenarios{"synthetic-static", "synthetic-drift", "market",
                                               "custom"};
  if (!scenarios.count(scenario)) throw ConfigError("unknown scenario '" + scenario + "'");
  if (solver != "conceptual" && solver != "stochastic") {
    throw ConfigError("solver must be 'conceptual' or 'stochastic'");
  }
  if (scenario == "custom" && !params.contains("problem")) {
    throw ConfigError("scenario 'custom' needs a 'problem' block");
  }
  if (!(solver_cfg.eta > 0.0)) throw ConfigError("eta must be positive");
  if (solver_cfg.batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (horizon < 0) throw ConfigError("horizon must be at least 1");
  if (replications < 1) throw ConfigError("replications must be at least 1");
  for (double d : deltas) {
    if (!(d > 0.0) || !(d < 1.0)) throw ConfigError("every delta must lie in (0, 1)");
  }
  if (nu && !(*nu >= 0.0)) throw ConfigError("nu must be non-negative");
  if (theta && !(*theta > 0.0)) throw ConfigError("theta must be positive");
  if (theta_grid.empty()) throw ConfigError("theta_grid must not be empty");
  for (double t : theta_grid) {
    if (!(t > 0.0)) throw ConfigError("theta_grid entries must be positive");
  }
  if (!(oracle_cfg.tolerance > 0.0)) throw ConfigError("oracle tolerance must be positive");
  if (oracle_cfg.max_iters < 1) throw ConfigError("oracle max_iters must be positive");
  if (trajectory_files < -1) throw ConfigError("trajectory_files must be >= 0");
}

int ExperimentConfig::effective_horizon() const {
  if (horizon > 0) return horizon;
  return scenario == "market" ? market::kMinutesPerDay : 500;
}

int ExperimentConfig::effective_replications() const {
  return solver == "stochastic" ? replications : 1;
}

Scenario build_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  Scenario sc;
  if (cfg.scenario == "synthetic-static" || cfg.scenario == "synthetic-drift") {
    sc = synthetic_scenario(cfg, cfg.scenario == "synthetic-drift");
  } else if (cfg.scenario == "market") {
    sc = market_scenario(cfg);
  } else {
    SaddleProblem p = problem_from_json(cfg.params.at("problem"));
    sc.stream = ProblemStream::constant(std::make_shared<const SaddleProblem>(std::move(p)),
                                        cfg.effective_horizon());
  }
  const SaddleProblem& first = sc.stream.at(0);
  if (cfg.z0) {
    if (cfg.z0->size() != first.dim()) {
      throw ConfigError("z0 has length " + std::to_string(cfg.z0->size()) + ", expected " +
                        std::to_string(first.dim()));
    }
    sc.z0 = first.project(*cfg.z0);
  } else {
    sc.z0 = default_start(first);
  }
  sc.seeds["rng_seed"] = cfg.solver_cfg.rng_seed;
  return sc;
}

const std::string& Artifacts::file(const std::string& name) const {
  for (const auto& [n, content] : files) {
    if (n == name) return content;
  }
  throw std::out_of_range("no artifact named " + name);
}

Artifacts run_experiment(const ExperimentConfig& cfg) {
  const Scenario sc = build_scenario(cfg);
  const StreamConstants k = stream_constants(sc.stream);
  const SolverConfig& run_cfg = cfg.solver_cfg;
  if (run_cfg.enforce_cap && !(run_cfg.eta < k.eta_cap)) {
    throw StepSizeTooLarge(run_cfg.eta, k.eta_cap);
  }
  const EquilibriumSequence eq = equilibrium_sequence(sc.stream, cfg.oracle_cfg);
  const int T = sc.stream.horizon();
  const bool stochastic = cfg.solver == "stochastic";
  const int R = cfg.effective_replications();

  MonteCarloResult mc;
  if (stochastic) {
    mc = monte_carlo(sc.stream, sc.z0, run_cfg, eq, R);
  } else {
    const Trajectory traj = online_primal_dual(sc.stream, sc.z0, run_cfg, eq);
    mc.errors.resize(1, T);
    mc.xi_norms = Matrix::Zero(1, T);
    for (const auto& rec : traj.records) mc.errors(0, rec.t) = rec.error;
  }

  SubWeibullParams noise{0.5, 0.0};
  std::string noise_source = "none";
  if (cfg.nu) {
    noise = {cfg.theta.value_or(0.5), *cfg.nu};
    noise_source = "config";
  } else if (stochastic) {
    const std::vector<double> xi(mc.xi_norms.data(), mc.xi_norms.data() + mc.xi_norms.size());
    if (xi.size() < 100) {
      throw ConfigError("fitting nu needs at least 100 gradient-error samples; set 'nu'");
    }
    noise = fit_subweibull(xi, cfg.theta_grid);
    noise_source = "fitted";
  }

  BoundInputs in;
  in.gamma_hat = k.gamma_hat;
  in.eta = run_cfg.eta;
  in.alpha = k.alpha_for(run_cfg.eta);
  in.Delta = eq.max_drift;
  in.nu = noise.nu;
  in.theta = noise.theta;
  in.z0_error = (sc.z0 - eq.points.front()).norm();

  std::vector<double> bound_det(static_cast<std::size_t>(T)), bound_exp(bound_det.size());
  for (int t = 0; t < T; ++t) {
    bound_det[static_cast<std::size_t>(t)] = deterministic_bound(in, t);
    bound_exp[static_cast<std::size_t>(t)] = expectation_bound(in, t);
  }
  const auto delta_t = [&](int t) {
    return t + 1 < T ? eq.drift[static_cast<std::size_t>(t)]
                     : std::numeric_limits<double>::quiet_NaN();
  };

  Artifacts out;
  const int n_files = cfg.trajectory_files < 0 ? std::min(R, kDefaultTrajectoryFiles)
                                               : std::min(R, cfg.trajectory_files);
  json trajectory_names = json::array();
  for (int r = 0; r < n_files; ++r) {
    std::string csv = "t,err,xi_norm,bound_det,bound_exp,delta_t\n";
    for (int t = 0; t < T; ++t) {
      append_row(csv,
                 {mc.errors(r, t), mc.xi_norms(r, t), bound_det[static_cast<std::size_t>(t)],
                  bound_exp[static_cast<std::size_t>(t)], delta_t(t)},
                 t);
    }
    const std::string name = "trajectory_rep" + std::to_string(r) + ".csv";
    trajectory_names.push_back(name);
    out.files.emplace_back(name, std::move(csv));
  }

  const Vector mean = column_means(mc.errors);
  std::vector<Vector> quantiles;
  std::string header = "t,mean_err,bound_det,bound_exp";
  for (double d : cfg.deltas) {
    quantiles.push_back(column_quantiles(mc.errors, 1.0 - d));
    header += ",quantile_" + label(1.0 - d) + ",hp_bound_" + label(d);
  }
  std::string bounds = header + "\n";
  json hp = json::array();
  for (int t = 0; t < T; ++t) {
    std::vector<double> row{mean(t), bound_det[static_cast<std::size_t>(t)],
                            bound_exp[static_cast<std::size_t>(t)]};
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
      BoundInputs hin = in;
      hin.delta = cfg.deltas[i];
      row.push_back(quantiles[i](t));
      row.push_back(high_probability_bound(hin, t));
    }
    append_row(bounds, row, t);
  }
  for (double d : cfg.deltas) {
    BoundInputs hin = in;
    hin.delta = d;
    hp.push_back({{"delta", d}, {"asymptote", high_probability_bound(hin, 1 << 30)}});
  }
  out.files.emplace_back("bounds.csv", std::move(bounds));

  json seeds = sc.seeds;
  out.manifest = {
      {"config", cfg.to_json()},
      {"constants",
       {{"gamma", k.gamma},
        {"L", k.L},
        {"epsilon", k.epsilon},
        {"gamma_hat", k.gamma_hat},
        {"L_hat", k.L_hat},
        {"alpha", in.alpha},
        {"eta", run_cfg.eta},
        {"eta_cap", k.eta_cap},
        {"eta_valid", run_cfg.eta < k.eta_cap},
        {"Delta", eq.max_drift},
        {"z0_error", in.z0_error}}},
      {"noise", {{"theta", noise.theta}, {"nu", noise.nu}, {"source", noise_source}}},
      {"asymptotes",
       {{"deterministic", deterministic_bound(in, 1 << 30)},
        {"expectation", expectation_bound(in, 1 << 30)},
        {"high_probability", hp}}},
      {"seeds", seeds},
      {"horizon", T},
      {"replications", R},
      {"solver", cfg.solver},
      {"files", {{"bounds", "bounds.csv"}, {"trajectories", trajectory_names}}}};
  out.files.emplace_back("manifest.json", out.manifest.dump(2) + "\n");
  return out;
}

void write_artifacts(const Artifacts& artifacts, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  for (const auto& [name, content] : artifacts.files) {
    write_text_file((std::filesystem::path(dir) / name).string(), content);
  }
}

json inspect_experiment(const ExperimentConfig& cfg, bool per_slice) {
  const Scenario sc = build_scenario(cfg);
  const SaddleProblem& first = sc.stream.at(0);
  json out = {{"scenario", cfg.scenario},
              {"horizon", sc.stream.horizon()},
              {"n", first.n()},
              {"m", first.m()},
              {"k", first.dist_map().k()},
              {"z0", vector_to_json(sc.z0)}};
  try {
    const StreamConstants k = stream_constants(sc.stream);
    out["constants"] = {{"gamma", k.gamma},
                        {"L", k.L},
                        {"epsilon", k.epsilon},
                        {"gamma_hat", k.gamma_hat},
                        {"L_hat", k.L_hat},
                        {"eta_cap", k.eta_cap},
                        {"eta", cfg.solver_cfg.eta},
                        {"eta_valid", cfg.solver_cfg.eta < k.eta_cap},
                        {"alpha", k.alpha_for(cfg.solver_cfg.eta)},
                        {"contractive", true}};
  } catch (const NotContractive& e) {
    out["constants"] = {{"contractive", false}, {"message", e.what()}};
  }
  if (per_slice) out["slices"] = market::stream_summary(sc.stream)["slices"];
  return out;
}

json validate_artifacts(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  json manifest;
  try {
    manifest = json::parse(read_text_file((root / "manifest.json").string()));
  } catch (const json::exception& e) {
    throw ParseError("manifest.json: " + std::string(e.what()));
  }
  const std::vector<double> deltas = manifest.at("config").at("deltas").get<std::vector<double>>();
  const bool conceptual = manifest.at("solver").get<std::string>() == "conceptual";

  std::vector<std::string> header{"t", "mean_err", "bound_det", "bound_exp"};
  for (double d : deltas) {
    header.push_back("quantile_" + label(1.0 - d));
    header.push_back("hp_bound_" + label(d));
  }
  const std::string bounds_path = (root / "bounds.csv").string();
  const CsvTable bounds = read_checked(bounds_path, header);
  const int T = static_cast<int>(bounds.rows.size()) - 1;
  if (T != manifest.at("horizon").get<int>()) {
    throw ParseError(bounds_path + ": row count differs from the manifest horizon");
  }

  int exp_failures = 0, det_failures = 0;
  double exp_min = std::numeric_limits<double>::infinity(), det_min = exp_min;
  std::vector<int> hp_failures(deltas.size(), 0);
  std::vector<double> hp_min(deltas.size(), exp_min), hp_ratio(deltas.size(), 0.0);
  std::string margins = "t,margin_exp,margin_det";
  for (double d : deltas) margins += ",margin_hp_" + label(d);
  margins += "\n";

  for (int t = 0; t < T; ++t) {
    const std::string where = bounds_path + ":" + std::to_string(t + 2);
    const auto row = parse_row(bounds.rows[static_cast<std::size_t>(t + 1)], header.size(), where);
    if (row[0] != t) throw ParseError(where + ": time index out of sequence");
    const double m_exp = row[3] - row[1];
    const double m_det = row[2] - row[1];
    exp_failures += m_exp < 0.0;
    exp_min = std::min(exp_min, m_exp);
    det_failures += m_det < 0.0;
    det_min = std::min(det_min, m_det);
    std::vector<double> out{m_exp, m_det};
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const double q = row[4 + 2 * i], b = row[5 + 2 * i];
      const double m = b - q;
      hp_failures[i] += m < 0.0;
      hp_min[i] = std::min(hp_min[i], m);
      if (q > 0.0) hp_ratio[i] = std::max(hp_ratio[i], b / q);
      out.push_back(m);
    }
    append_row(margins, out, t);
  }

  std::vector<double> xi;
  for (const auto& name : manifest.at("files").at("trajectories")) {
    const std::string path = (root / name.get<std::string>()).string();
    const CsvTable tr = read_checked(path, kTrajectoryHeader);
    if (static_cast<int>(tr.rows.size()) - 1 != T) {
      throw ParseError(path + ": row count differs from the manifest horizon");
    }
    for (std::size_t r = 1; r < tr.rows.size(); ++r) {
      xi.push_back(parse_row(tr.rows[r], kTrajectoryHeader.size(),
                             path + ":" + std::to_string(r + 1))[2]);
    }
  }
  json fitted = {{"samples", xi.size()}};
  if (xi.size() >= 100) {
    const SubWeibullParams fit = fit_subweibull(xi);
    fitted["theta"] = fit.theta;
    fitted["nu"] = fit.nu;
  }

  json hp = json::array();
  bool passed = exp_failures == 0 && (!conceptual || det_failures == 0);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const int allowed = static_cast<int>(std::floor(deltas[i] * T));
    passed = passed && hp_failures[i] <= allowed;
    hp.push_back({{"delta", deltas[i]},
                  {"failures", hp_failures[i]},
                  {"allowed", allowed},
                  {"min_margin", hp_min[i]},
                  {"max_bound_over_quantile", hp_ratio[i]}});
  }
  json report = {{"horizon", T},
                 {"solver", manifest.at("solver")},
                 {"expectation", {{"failures", exp_failures}, {"min_margin", exp_min}}},
                 {"high_probability", hp},
                 {"fitted", fitted},
                 {"passed", passed}};
  if (conceptual) report["deterministic"] = {{"failures", det_failures}, {"min_margin", det_min}};
  write_text_file((root / "validation.csv").string(), margins);
  write_text_file((root / "validation.json").string(), report.dump(2) + "\n");
  return report;
}

}  // namespace eqtrack
