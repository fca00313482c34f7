#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "eqtrack/io.hpp"
#include "eqtrack/market.hpp"
#include "eqtrack/solvers.hpp"
#include "eqtrack/synthetic.hpp"
#include "test_helpers.hpp"

using namespace eqtrack;
using namespace eqtrack::market;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p, const std::string& content) : path(std::move(p)) {
    std::ofstream(path) << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

DemandSeries column(std::initializer_list<double> xs) {
  DemandSeries d;
  d.values.resize(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) d.values(i++, 0) = x;
  return d;
}

}  // namespace

TEST_CASE("demand CSV loading") {
  {
    TempFile f("toy_demand.csv", "ports,events,power_kw\n6,8,150\n1,2,3\n4,5.5,6\n");
    const DemandSeries d = load_demand(f.path, 0);
    CHECK(d.days() == 2);
    CHECK(d.minutes() == 3);
    CHECK(d.values(1, 1) == 5.5);
    CHECK(d.station.power_kw == 150);
    CHECK_THROWS_AS(load_demand(f.path), ParseError);
  }
  {
    TempFile f("toy_demand.csv", "1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(load_demand(f.path, 0), ParseError);
  }
  {
    TempFile f("toy_demand.csv", "ports,events,power_kw\n6,8,150\n1,2,3\n4,x,6\n");
    CHECK_THROWS_AS(load_demand(f.path, 0), ParseError);
  }
  {
    TempFile f("toy_demand.csv", "ports,events,power_kw\n6,8,150\n1,2,3\n4,5\n");
    CHECK_THROWS_AS(load_demand(f.path, 0), ParseError);
  }
  {
    TempFile f("toy_demand.csv", "ports,events,power_kw\n6,8,75\n1,2,3\n");
    CHECK_THROWS_AS(load_demand(f.path, 0), std::invalid_argument);
  }
  CHECK_THROWS_AS(load_demand("no_such_demand.csv"), IoError);
}

TEST_CASE("synthetic demand round-trips through CSV bit-exactly") {
  const DemandSeries d = generate_synthetic_demand({2, 16, 350}, 3, 7);
  write_demand("roundtrip_demand.csv", d);
  const DemandSeries back = load_demand("roundtrip_demand.csv");
  std::remove("roundtrip_demand.csv");
  CHECK(back.values == d.values);
  CHECK(back.station.ports == 2);
  CHECK(back.station.events == 16);
}

TEST_CASE("normalization") {
  CHECK(normalize_demand(column({1.0, 3.0})).values.col(0) == Vector::Map(std::vector<double>{-1.0, 1.0}.data(), 2));
  CHECK(normalize_demand(column({4.0, 4.0, 4.0})).values.isZero());
  const Vector got = normalize_demand(column({0.0, 2.0, 4.0})).values.col(0);
  CHECK(got(0) == doctest::Approx(-0.75));
  CHECK(got(1) == doctest::Approx(0.0));
  CHECK(got(2) == doctest::Approx(0.75));
  const Vector sd = normalize_demand(column({0.0, 2.0, 4.0}), NormalizeBy::StdDev).values.col(0);
  CHECK(sd(2) == doctest::Approx(2.0 / std::sqrt(8.0 / 3.0)));
  CHECK_THROWS_AS(normalize_demand(column({1.0})), std::invalid_argument);
}

TEST_CASE("normalizing centered data only rescales") {
  const DemandSeries d = generate_synthetic_demand({6, 8, 150}, 20, 3);
  const DemandSeries once = normalize_demand(d);
  const DemandSeries twice = normalize_demand(once);
  const double days = static_cast<double>(once.days());
  for (Eigen::Index c = 0; c < once.values.cols(); c += 37) {
    REQUIRE(std::abs(once.values.col(c).sum()) <= 1e-9);
    const double var = once.values.col(c).squaredNorm() / days;
    REQUIRE((twice.values.col(c) - once.values.col(c) / var).norm() <= 1e-9);
  }
}

TEST_CASE("elasticity profile") {
  const auto table = default_elasticity_table();
  CHECK(elasticity(350, 720, 720, table) == 0.5);
  CHECK(elasticity(150, 0, 720, table) == 0.0);
  CHECK(elasticity(50, 360, 720, table) == doctest::Approx(0.15));
  CHECK(elasticity(50, 1000, 300, table) == 0.0);
  CHECK_THROWS_AS(elasticity(50, 1440, 720, table), std::out_of_range);
  CHECK_THROWS_AS(elasticity(50, -1, 720, table), std::out_of_range);
  CHECK_THROWS_AS(elasticity(75, 10, 720, table), std::invalid_argument);
}

TEST_CASE("elasticity matrices are diagonal and mirrored") {
  const MarketSpec spec;
  for (int t : {0, 100, 720, 1000, 1439}) {
    const ElasticityMatrices e = elasticity_matrices(spec, t);
    REQUIRE(e.A2 == -e.A1);
    REQUIRE(e.B2 == -e.B1);
    REQUIRE(e.A1.isDiagonal());
    REQUIRE(e.B1.isDiagonal());
  }
  // spectral norm at the peak against power iteration
  MarketSpec peak;
  peak.stations_provider1 = peak.stations_provider2;
  const Matrix m = elasticity_matrices(peak, 720).stacked();
  CHECK(testing::power_iteration_norm(m) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spectral_norm(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm(elasticity_matrices(spec, 720).stacked()) == doctest::Approx(0.6));
}

TEST_CASE("default market stream") {
  const MarketSpec spec;
  const auto [d1, d2] = generate_market_demand(spec, 3, 42);
  MarketStreamOptions opt;
  opt.day = 1;
  const ProblemStream stream = build_market_stream(spec, d1, d2, opt);
  REQUIRE(stream.horizon() == kMinutesPerDay);
  for (int t = 0; t < stream.horizon(); ++t) {
    const SaddleProblem& p = stream.at(t);
    REQUIRE(p.gamma() == doctest::Approx(2.0));
    REQUIRE(p.lipschitz_L() == doctest::Approx(2.0));
    REQUIRE(p.epsilon() * p.lipschitz_L() < p.gamma());
  }
  const StreamConstants sc = stream_constants(stream);
  CHECK(sc.eta_cap > 0.01);
  CHECK(sc.epsilon == doctest::Approx(0.6));

  const auto summary = stream_summary(stream);
  CHECK(summary["slices"].size() == 1440u);
  CHECK(summary["slices"][720]["epsilon"].get<double>() == doctest::Approx(0.6));

  opt.day = 2;
  opt.horizon = 2 * kMinutesPerDay;
  CHECK_THROWS_AS(build_market_stream(spec, d1, d2, opt), std::out_of_range);

  MarketSpec hot;
  hot.stations_provider1 = hot.stations_provider2;
  hot.c_table[350] = 0.7;  // eps = 1.4 at midday, eps L = 2.8 > gamma = 2
  const auto [h1, h2] = generate_market_demand(hot, 2, 1);
  MarketStreamOptions hopt;
  CHECK_THROWS_AS(build_market_stream(hot, h1, h2, hopt), NotContractive);
}

TEST_CASE("without noise or elasticity the equilibrium is the static saddle") {
  const MarketSpec spec;
  const auto [d1, d2] = generate_market_demand(spec, 4, 9);
  MarketStreamOptions opt;
  opt.day = 2;
  opt.noise_sigma = 0.0;
  opt.horizon = 1;  // minute 0 sits at the zero-elasticity end of the tent
  const ProblemStream stream = build_market_stream(spec, d1, d2, opt);
  {
    const SaddleProblem& p = stream.at(0);
    REQUIRE(p.epsilon() == 0.0);
    SolverConfig cfg = SolverConfig::oracle_defaults();
    cfg.tolerance = 1e-13;
    const Vector z = equilibrium_oracle(p, cfg);
    // gradient (2x - a, 2y - b) vanishes at (a, b) / 2, clipped to the box
    const Vector expected =
        (0.5 * p.dist_map().base_mean()).cwiseMax(-spec.price_bound).cwiseMin(spec.price_bound);
    CHECK((z - expected).norm() <= 1e-10);
  }
}

TEST_CASE("one-region market matches the hand-written gradient") {
  MarketSpec spec;
  spec.stations_provider1 = {{6, 8, 150}};
  spec.stations_provider2 = {{2, 2, 50}};
  spec.gamma1 = Matrix::Constant(1, 1, 1.2);
  spec.gamma2 = Matrix::Constant(1, 1, 1.1);
  spec.c = Vector::Constant(1, 0.4);
  const auto [d1, d2] = generate_market_demand(spec, 3, 5);
  MarketStreamOptions opt;
  opt.horizon = 800;
  const ProblemStream stream = build_market_stream(spec, d1, d2, opt);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 10; ++i) {
    const SaddleProblem& p = stream.at(700 + i);
    const Vector z = synthetic::random_point(rng, 2, 3.0);
    const Vector w = synthetic::random_point(rng, 2, 3.0);
    const double x = z(0), y = z(1), a = w(0), b = w(1), c = 0.4;
    Vector expected(2);
    expected << 2.0 * 1.2 * 1.2 * x - (a + c), 2.0 * 1.1 * 1.1 * y - (b + c);
    REQUIRE((stochastic_gradient(p, z, w) - expected).norm() <= 1e-12);
    // the elasticity shift enters the mean demand
    const double h = elasticity(150, 700 + i, 720, spec.c_table);
    const Vector mean = p.dist_map().mean_shift(z);
    REQUIRE(mean(0) == doctest::Approx(p.dist_map().base_mean()(0) - h * (x + y)));
    REQUIRE(mean(1) == doctest::Approx(p.dist_map().base_mean()(1) + h * (x + y)));
  }
}

TEST_CASE("synthetic demand generator") {
  const StationMeta s{6, 8, 150};
  CHECK(demand_to_csv(generate_synthetic_demand(s, 3, 11)) ==
        demand_to_csv(generate_synthetic_demand(s, 3, 11)));
  CHECK(demand_to_csv(generate_synthetic_demand(s, 3, 11)) !=
        demand_to_csv(generate_synthetic_demand(s, 3, 12)));

  const DemandSeries flat = generate_synthetic_demand(s, 4, 11, 0.0);
  for (int d = 1; d < 4; ++d) REQUIRE(flat.values.row(d) == flat.values.row(0));

  const int days = 400;
  const DemandSeries many = generate_synthetic_demand(s, days, 13);
  // each cell has unit noise standard deviation; days are independent
  const double tol = 5.0 / std::sqrt(static_cast<double>(days));
  for (int t = 0; t < kMinutesPerDay; ++t) {
    REQUIRE(std::abs(many.values.col(t).mean() - demand_profile(s, t)) <= tol);
  }
  CHECK(demand_profile(s, 1080) > demand_profile(s, 480));
  CHECK(demand_profile(s, 480) > demand_profile(s, 0));
  CHECK_THROWS_AS(generate_synthetic_demand(s, 1, 0), std::invalid_argument);
}

TEST_CASE("built market problems satisfy the gradient-map inequalities") {
  const MarketSpec spec;
  const auto [d1, d2] = generate_market_demand(spec, 3, 21);
  MarketStreamOptions opt;
  const ProblemStream stream = build_market_stream(spec, d1, d2, opt);
  std::mt19937_64 rng(22);
  for (int t : {0, 360, 720, 1100}) {
    const SaddleProblem& p = stream.at(t);
    const double eps = p.epsilon(), L = p.lipschitz_L(), gamma = p.gamma();
    for (int i = 0; i < 300; ++i) {
      const Vector zh = synthetic::random_point(rng, p.dim(), 5.0);
      const Vector z1 = synthetic::random_point(rng, p.dim(), 5.0);
      const Vector z2 = synthetic::random_point(rng, p.dim(), 5.0);
      const double d = (z1 - z2).norm();
      REQUIRE((decoupled_gradient(p, zh, z1) - decoupled_gradient(p, zh, z2)).norm() <=
              eps * L * d * (1 + 1e-9) + 1e-12);
      const Vector dg = coupled_gradient(p, z1) - coupled_gradient(p, z2);
      REQUIRE((z1 - z2).dot(dg) >= (gamma - eps * L) * d * d * (1 - 1e-9));
      REQUIRE(dg.norm() <= (1 + eps) * L * d * (1 + 1e-9));
    }
  }
}

TEST_CASE("market spec JSON round trip") {
  MarketSpec spec;
  spec.midpoint = 600;
  spec.c_table[350] = 0.45;
  const MarketSpec back = market_spec_from_json(market_spec_to_json(spec));
  CHECK(back.midpoint == 600);
  CHECK(back.c_table.at(350) == 0.45);
  CHECK(back.stations_provider2[2].power_kw == 350);
  CHECK(back.gamma1 == spec.gamma1);
}
