#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqtrack/problem.hpp"

namespace eqtrack::market {

inline constexpr int kMinutesPerDay = 1440;

struct StationMeta {
  int ports = 6;         // 2 or 6
  int events = 8;        // 2, 8 or 16 charging events per day
  int power_kw = 150;    // 50, 150 or 350
};

/// Throws std::invalid_argument for values outside the documented schema.
void validate(const StationMeta& s);

/// Demand of one station: one row per day, one column per minute.
struct DemandSeries {
  Matrix values;
  StationMeta station;

  int days() const { return static_cast<int>(values.rows()); }
  int minutes() const { return static_cast<int>(values.cols()); }
};

/// CSV layout:
///   ports,events,power_kw
///   <ports>,<events>,<power_kw>
///   <one row per day, `minutes` comma-separated numbers>
/// `expected_minutes` = 0 accepts any consistent column count.
DemandSeries load_demand(const std::string& path, int expected_minutes = kMinutesPerDay);
std::string demand_to_csv(const DemandSeries& d);
void write_demand(const std::string& path, const DemandSeries& d);

enum class NormalizeBy { Variance, StdDev };

/// Per minute (column): subtract the mean over days, then divide by the
/// population variance (or standard deviation). Zero-variance columns are
/// only centered.
DemandSeries normalize_demand(const DemandSeries& d, NormalizeBy by = NormalizeBy::Variance);

using ElasticityTable = std::map<int, double>;  // power kW -> peak elasticity c(p)

inline ElasticityTable default_elasticity_table() { return {{50, 0.3}, {150, 0.3}, {350, 0.5}}; }

/// Tent profile h_t(p) = c(p) - c(p) |t - m| / m, clamped at zero.
double elasticity(int power_kw, int t_minute, int midpoint, const ElasticityTable& table);

struct MarketSpec {
  std::vector<StationMeta> stations_provider1{{6, 8, 50}, {6, 8, 150}, {6, 8, 150}};
  std::vector<StationMeta> stations_provider2{{6, 8, 50}, {6, 8, 150}, {6, 8, 350}};
  Matrix gamma1 = Matrix::Identity(3, 3);
  Matrix gamma2 = Matrix::Identity(3, 3);
  Vector c = Vector::Zero(3);
  int midpoint = 720;
  ElasticityTable c_table = default_elasticity_table();
  double price_bound = 5.0;  // box [-price_bound, price_bound] on every price deviation

  int regions() const { return static_cast<int>(stations_provider1.size()); }
  void validate() const;
};

/// Demand responses a = a0 + A1 x + B1 y, b = b0 + A2 x + B2 y.
struct ElasticityMatrices {
  Matrix A1, B1, A2, B2;
  /// [A1 B1; A2 B2], the shift of the distributional map.
  Matrix stacked() const;
};

/// Diagonal elasticities of provider one's regions at minute `t`
/// (both own- and cross-price), mirrored for provider two.
ElasticityMatrices elasticity_matrices(const MarketSpec& spec, int t_minute);

struct MarketStreamOptions {
  int day = 0;
  int horizon = kMinutesPerDay;
  /// Standard deviation of the demand noise around the day's normalized entry.
  double noise_sigma = 0.5;
  bool normalize = true;
  NormalizeBy normalize_by = NormalizeBy::Variance;
};

/// One slice per minute. Slice t uses day `options.day + t / 1440` and minute
/// t % 1440. Throws NotContractive if some minute violates eps L < gamma.
ProblemStream build_market_stream(const MarketSpec& spec, const std::vector<DemandSeries>& demand1,
                                  const std::vector<DemandSeries>& demand2,
                                  const MarketStreamOptions& options);

/// Daily profile with morning and evening peaks scaled by power and event
/// count, plus zero-mean noise (smooth AR(1) part and white part) of scale
/// `noise`. noise = 0 gives identical rows.
DemandSeries generate_synthetic_demand(const StationMeta& station, int days, std::uint64_t seed,
                                       double noise = 1.0);
/// Noise-free profile value at a minute of the day.
double demand_profile(const StationMeta& station, int minute);

/// One series per station of each provider, keyed by (seed, provider, station).
std::pair<std::vector<DemandSeries>, std::vector<DemandSeries>> generate_market_demand(
    const MarketSpec& spec, int days, std::uint64_t seed, double noise = 1.0);

/// Per-slice constants: gamma, L, eps and the step-size cap.
nlohmann::json stream_summary(const ProblemStream& stream);

nlohmann::json market_spec_to_json(const MarketSpec& spec);
MarketSpec market_spec_from_json(const nlohmann::json& j);

}  // namespace eqtrack::market
