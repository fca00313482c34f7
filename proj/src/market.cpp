#include "eqtrack/market.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "eqtrack/io.hpp"
#include "eqtrack/rng.hpp"

namespace eqtrack::market {

using nlohmann::json;

void validate(const StationMeta& s) {
  if (s.ports != 2 && s.ports != 6) {
    throw std::invalid_argument("station ports must be 2 or 6, got " + std::to_string(s.ports));
  }
  if (s.events != 2 && s.events != 8 && s.events != 16) {
    throw std::invalid_argument("station events must be 2, 8 or 16, got " +
                                std::to_string(s.events));
  }
  if (s.power_kw != 50 && s.power_kw != 150 && s.power_kw != 350) {
    throw std::invalid_argument("station power must be 50, 150 or 350 kW, got " +
                                std::to_string(s.power_kw));
  }
}

DemandSeries load_demand(const std::string& path, int expected_minutes) {
  const CsvTable table = read_csv(path);
  if (table.rows.size() < 2 || table.rows[0].size() != 3 || table.rows[0][0] != "ports" ||
      table.rows[0][1] != "events" || table.rows[0][2] != "power_kw") {
    throw ParseError(path + ": missing metadata header 'ports,events,power_kw'");
  }
  if (table.rows[1].size() != 3) throw ParseError(path + ": metadata row needs 3 values");
  DemandSeries d;
  const auto meta = [&](int i) {
    const double v = parse_number(table.rows[1][static_cast<std::size_t>(i)], path + ":2");
    if (v != std::floor(v)) throw ParseError(path + ": metadata values must be integers");
    return static_cast<int>(v);
  };
  d.station = {meta(0), meta(1), meta(2)};
  validate(d.station);

  const std::size_t days = table.rows.size() - 2;
  if (days == 0) throw ParseError(path + ": no demand rows");
  const std::size_t cols = table.rows[2].size();
  if (expected_minutes > 0 && cols != static_cast<std::size_t>(expected_minutes)) {
    throw ParseError(path + ": expected " + std::to_string(expected_minutes) + " columns, got " +
                     std::to_string(cols));
  }
  d.values.resize(static_cast<Eigen::Index>(days), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < days; ++r) {
    const auto& row = table.rows[r + 2];
    const std::string where = path + ":" + std::to_string(r + 3);
    if (row.size() != cols) {
      throw ParseError(where + ": expected " + std::to_string(cols) + " columns, got " +
                       std::to_string(row.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = parse_number(row[c], where);
      if (!std::isfinite(v)) throw ParseError(where + ": non-finite demand value");
      d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return d;
}

std::string demand_to_csv(const DemandSeries& d) {
  std::string out = "ports,events,power_kw\n";
  out += std::to_string(d.station.ports) + "," + std::to_string(d.station.events) + "," +
         std::to_string(d.station.power_kw) + "\n";
  for (Eigen::Index r = 0; r < d.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < d.values.cols(); ++c) {
      if (c) out += ',';
      out += format_number(d.values(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_demand(const std::string& path, const DemandSeries& d) {
  write_text_file(path, demand_to_csv(d));
}

DemandSeries normalize_demand(const DemandSeries& d, NormalizeBy by) {
  if (d.days() < 2) throw std::invalid_argument("normalization needs at least two days");
  DemandSeries out = d;
  const double days = static_cast<double>(d.days());
  for (Eigen::Index c = 0; c < d.values.cols(); ++c) {
    const double mean = d.values.col(c).sum() / days;
    const double var = (d.values.col(c).array() - mean).square().sum() / days;
    out.values.col(c).array() -= mean;
    if (var > 0.0) out.values.col(c) /= by == NormalizeBy::Variance ? var : std::sqrt(var);
  }
  return out;
}

double elasticity(int power_kw, int t_minute, int midpoint, const ElasticityTable& table) {
  if (t_minute < 0 || t_minute >= kMinutesPerDay) {
    throw std::out_of_range("minute " + std::to_string(t_minute) + " outside [0, 1440)");
  }
  if (midpoint <= 0) throw std::invalid_argument("elasticity midpoint must be positive");
  const auto it = table.find(power_kw);
  if (it == table.end()) {
    throw std::invalid_argument("no elasticity for power " + std::to_string(power_kw) + " kW");
  }
  const double c = it->second;
  const double h = c - c / midpoint * std::abs(t_minute - midpoint);
  return std::max(0.0, h);
}

void MarketSpec::validate() const {
  const Eigen::Index n = regions();
  if (n == 0 || static_cast<Eigen::Index>(stations_provider2.size()) != n) {
    throw std::invalid_argument("both providers need the same non-zero number of stations");
  }
  for (const auto& s : stations_provider1) market::validate(s);
  for (const auto& s : stations_provider2) market::validate(s);
  if (gamma1.rows() != n || gamma1.cols() != n || gamma2.rows() != n || gamma2.cols() != n ||
      c.size() != n) {
    throw DimensionMismatch("utility matrices must be regions x regions");
  }
  for (const auto& [p, v] : c_table) {
    if (!(v > 0.0)) throw std::invalid_argument("c(p) must be positive");
  }
  if (!(price_bound > 0.0)) throw std::invalid_argument("price bound must be positive");
}

Matrix ElasticityMatrices::stacked() const {
  Matrix m(A1.rows() + A2.rows(), A1.cols() + B1.cols());
  m << A1, B1, A2, B2;
  return m;
}

ElasticityMatrices elasticity_matrices(const MarketSpec& spec, int t_minute) {
  const Eigen::Index n = spec.regions();
  Vector h(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i) = elasticity(spec.stations_provider1[static_cast<std::size_t>(i)].power_kw, t_minute,
                      spec.midpoint, spec.c_table);
  }
  ElasticityMatrices e;
  e.A1 = -Matrix(h.asDiagonal());
  e.B1 = -Matrix(h.asDiagonal());
  e.A2 = -e.A1;
  e.B2 = -e.B1;
  return e;
}

ProblemStream build_market_stream(const MarketSpec& spec, const std::vector<DemandSeries>& demand1,
                                  const std::vector<DemandSeries>& demand2,
                                  const MarketStreamOptions& options) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.regions());
  if (demand1.size() != n || demand2.size() != n) {
    throw DimensionMismatch("need one demand series per station");
  }
  if (options.horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (options.noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
  const int last_day = options.day + (options.horizon - 1) / kMinutesPerDay;
  std::vector<DemandSeries> series;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const DemandSeries& d = i < n ? demand1[i] : demand2[i - n];
    const StationMeta& s = i < n ? spec.stations_provider1[i] : spec.stations_provider2[i - n];
    if (d.station.power_kw != s.power_kw) {
      throw std::invalid_argument("demand series power does not match the market spec");
    }
    if (d.minutes() != kMinutesPerDay) throw DimensionMismatch("demand needs 1440 minutes");
    if (options.day < 0 || last_day >= d.days()) {
      throw std::out_of_range("day " + std::to_string(last_day) + " outside the demand series (" +
                              std::to_string(d.days()) + " days)");
    }
    series.push_back(options.normalize ? normalize_demand(d, options.normalize_by) : d);
  }

  auto family =
      std::make_shared<const QuadraticFamily>(QuadraticFamily::market(spec.gamma1, spec.gamma2, spec.c));
  const Eigen::Index k = 2 * static_cast<Eigen::Index>(n);
  const Matrix cov = options.noise_sigma * options.noise_sigma * Matrix::Identity(k, k);
  const auto box = ConstraintSet::box(static_cast<Eigen::Index>(n), spec.price_bound);

  std::vector<std::shared_ptr<const SaddleProblem>> slices;
  slices.reserve(static_cast<std::size_t>(options.horizon));
  for (int t = 0; t < options.horizon; ++t) {
    const int day = options.day + t / kMinutesPerDay;
    const int minute = t % kMinutesPerDay;
    Vector mean(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      mean(i) = series[static_cast<std::size_t>(i)].values(day, minute);
    }
    auto map = DistributionalMap::gaussian(mean, cov, elasticity_matrices(spec, minute).stacked());
    auto p = std::make_shared<const SaddleProblem>(family, box, box, std::move(map));
    regularity_constants(*p);  // surface eps L >= gamma here
    slices.push_back(std::move(p));
  }
  return ProblemStream(std::move(slices));
}

double demand_profile(const StationMeta& station, int minute) {
  const double scale = station.events * station.power_kw / 1000.0;
  const auto bump = [minute](double center, double width) {
    const double u = (minute - center) / width;
    return std::exp(-0.5 * u * u);
  };
  return scale * (0.1 + bump(480.0, 90.0) + 1.3 * bump(1080.0, 120.0));
}

DemandSeries generate_synthetic_demand(const StationMeta& station, int days, std::uint64_t seed,
                                       double noise) {
  validate(station);
  if (days < 2) throw std::invalid_argument("synthetic demand needs at least two days");
  if (noise < 0.0) throw std::invalid_argument("noise must be non-negative");
  constexpr double phi = 0.98;
  const double smooth_sd = 0.8 * noise;
  const double white_sd = 0.6 * noise;

  DemandSeries d;
  d.station = station;
  d.values.resize(days, kMinutesPerDay);
  Vector profile(kMinutesPerDay);
  for (int t = 0; t < kMinutesPerDay; ++t) profile(t) = demand_profile(station, t);

  for (int day = 0; day < days; ++day) {
    CounterRng rng(seed, static_cast<std::uint64_t>(day));
    std::normal_distribution<double> normal(0.0, 1.0);
    double ar = smooth_sd * normal(rng);
    for (int t = 0; t < kMinutesPerDay; ++t) {
      if (t > 0) ar = phi * ar + std::sqrt(1.0 - phi * phi) * smooth_sd * normal(rng);
      d.values(day, t) = profile(t) + ar + white_sd * normal(rng);
    }
  }
  return d;
}

std::pair<std::vector<DemandSeries>, std::vector<DemandSeries>> generate_market_demand(
    const MarketSpec& spec, int days, std::uint64_t seed, double noise) {
  std::pair<std::vector<DemandSeries>, std::vector<DemandSeries>> out;
  std::uint64_t station_key = 0;
  for (const auto& s : spec.stations_provider1) {
    out.first.push_back(generate_synthetic_demand(s, days, CounterRng(seed, 1, station_key++)(), noise));
  }
  station_key = 0;
  for (const auto& s : spec.stations_provider2) {
    out.second.push_back(generate_synthetic_demand(s, days, CounterRng(seed, 2, station_key++)(), noise));
  }
  return out;
}

json stream_summary(const ProblemStream& stream) {
  json slices = json::array();
  for (int t = 0; t < stream.horizon(); ++t) {
    const SaddleProblem& p = stream.at(t);
    json row = {{"t", t}, {"gamma", p.gamma()}, {"L", p.lipschitz_L()}, {"epsilon", p.epsilon()}};
    try {
      row["eta_cap"] = regularity_constants(p).step_size_cap();
    } catch (const NotContractive&) {
      row["eta_cap"] = nullptr;
    }
    slices.push_back(std::move(row));
  }
  return {{"horizon", stream.horizon()}, {"slices", std::move(slices)}};
}

namespace {

json station_json(const StationMeta& s) {
  return {{"ports", s.ports}, {"events", s.events}, {"power_kw", s.power_kw}};
}

StationMeta station_from_json(const json& j) {
  return {j.value("ports", 6), j.value("events", 8), j.at("power_kw").get<int>()};
}

}  // namespace

json market_spec_to_json(const MarketSpec& spec) {
  json p1 = json::array(), p2 = json::array(), table = json::object();
  for (const auto& s : spec.stations_provider1) p1.push_back(station_json(s));
  for (const auto& s : spec.stations_provider2) p2.push_back(station_json(s));
  for (const auto& [p, c] : spec.c_table) table[std::to_string(p)] = c;
  return {{"stations_provider1", p1}, {"stations_provider2", p2},
          {"gamma1", matrix_to_json(spec.gamma1)}, {"gamma2", matrix_to_json(spec.gamma2)},
          {"c", vector_to_json(spec.c)}, {"midpoint", spec.midpoint},
          {"c_table", table}, {"price_bound", spec.price_bound}};
}

MarketSpec market_spec_from_json(const json& j) {
  MarketSpec spec;
  if (j.contains("stations_provider1")) {
    spec.stations_provider1.clear();
    for (const auto& s : j.at("stations_provider1")) spec.stations_provider1.push_back(station_from_json(s));
  }
  if (j.contains("stations_provider2")) {
    spec.stations_provider2.clear();
    for (const auto& s : j.at("stations_provider2")) spec.stations_provider2.push_back(station_from_json(s));
  }
  const Eigen::Index n = spec.regions();
  spec.gamma1 = j.contains("gamma1") ? matrix_from_json(j.at("gamma1"), "gamma1") : Matrix::Identity(n, n);
  spec.gamma2 = j.contains("gamma2") ? matrix_from_json(j.at("gamma2"), "gamma2") : Matrix::Identity(n, n);
  spec.c = j.contains("c") ? vector_from_json(j.at("c"), "c") : Vector::Zero(n);
  spec.midpoint = j.value("midpoint", 720);
  spec.price_bound = j.value("price_bound", 5.0);
  if (j.contains("c_table")) {
    spec.c_table.clear();
    for (const auto& [key, value] : j.at("c_table").items()) {
      spec.c_table[std::stoi(key)] = value.get<double>();
    }
  }
  spec.validate();
  return spec;
}

}  // namespace eqtrack::market
