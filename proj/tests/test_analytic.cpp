#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mcis/analytic.hpp"

using namespace mcis;

namespace {

constexpr std::int64_t kE10 = 22026;  // nearest integer to e^10

NetworkConfig cfg_for(std::int64_t n, std::int64_t C_A, std::int64_t H, double W_A = 100) {
  NetworkConfig c;
  c.n = n;
  c.C_A = C_A;
  c.C_I = 2;
  c.C = C_A + 2;
  c.H = H;
  c.W_A = W_A;
  c.W_I = 10;
  c.W = W_A + 20;
  c.b = 16;
  c.b0 = 4;
  c.m = 4;
  return c;
}

}  // namespace

TEST_CASE("thresholds near n = e^10") {
  auto t = thresholds(kE10, 10, 1);
  CHECK(t.F1 == doctest::Approx(10.0).epsilon(1e-5));
  CHECK(t.G3 == doctest::Approx(std::exp(5.0) / std::sqrt(10.0)).epsilon(1e-4));
  CHECK(t.G3 == doctest::Approx(46.93).epsilon(1e-3));
  CHECK(t.G1 == doctest::Approx(6.04).epsilon(1e-3));
  CHECK_THROWS_AS(thresholds(2, 1), Error);
}

TEST_CASE("G2 with one channel exceeds G1") {
  for (double n = 3; n < 1e9; n *= 1.7) {
    auto t = thresholds(static_cast<std::int64_t>(n), 100, 1);
    REQUIRE(t.G2 > t.G1);
  }
}

TEST_CASE("classify_regime examples") {
  CHECK(classify_regime(kE10, 4, 10) == Condition::Connectivity);
  CHECK(classify_regime(kE10, 4, 1) == Condition::InterfaceBottleneck);
  CHECK(classify_regime(kE10, 4, 6) == Condition::InterfaceBottleneck);  // 6 < G1 = 6.04
  CHECK(classify_regime(kE10, 4, 7) == Condition::Connectivity);
  CHECK(classify_regime(kE10, 100, 50) == Condition::Interference);
  CHECK(classify_regime(kE10, 100, 10) == Condition::InterfaceBottleneck);
  CHECK(classify_regime(kE10, 2000, 50) == Condition::DestinationBottleneck);
  CHECK(classify_regime(kE10, 2000, 46) == Condition::InterfaceBottleneck);  // 46 < G3 = 46.93
  CHECK(regime_case(kE10, 9, 50) == 1);
  CHECK(regime_case(kE10, 10, 50) == 2);  // ln 22026 is just below 10
}

TEST_CASE("expected_hops equals the hop-distribution sum exactly") {
  for (std::int64_t H = 1; H <= 100; ++H) {
    // sum_i i * (i^2 - (i-1)^2) / H^2
    std::int64_t num = 0;
    for (std::int64_t i = 1; i <= H; ++i) num += i * (i * i - (i - 1) * (i - 1));
    std::int64_t den = H * H;
    auto [p, q] = expected_hops_fraction(H);
    REQUIRE(std::gcd(p, q) == 1);
    REQUIRE(p * den == num * q);
    double h = static_cast<double>(H);
    REQUIRE(std::abs(expected_hops(H) - 2 * h / 3 - (0.5 - 1 / (6 * h))) < 1e-12);
  }
  CHECK(expected_hops(1) == 1.0);
  CHECK(expected_hops(2) == 1.75);
  CHECK(expected_hops_fraction(3) == std::pair<std::int64_t, std::int64_t>{22, 9});
}

TEST_CASE("prob_adhoc") {
  CHECK(prob_adhoc(2, kE10) == doctest::Approx(3.63e-3).epsilon(2e-3));
  CHECK(prob_adhoc(1000, kE10) == 1.0);
  double prev = 0;
  for (std::int64_t H = 1; H < 200; ++H) {
    double p = prob_adhoc(H, 5000);
    REQUIRE(p >= prev);
    prev = p;
  }
}

TEST_CASE("per_node_throughput branch values") {
  auto c = cfg_for(kE10, 4, 10);
  auto t = per_node_throughput(c);
  CHECK(t.condition == Condition::Connectivity);
  CHECK(t.lambda_a == doctest::Approx(100.0 / (10 * std::log(static_cast<double>(kE10)))));
  CHECK(t.lambda_a == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(t.formula_id == "Connectivity/omni");
  CHECK(lambda_infra(100, 4, 4, 2, 10) == doctest::Approx(0.4));
  CHECK(lambda_infra(100, 4, 1, 2, 10) == doctest::Approx(0.2));
}

TEST_CASE("directional gain collapses at phi = 2pi and scales otherwise") {
  for (auto [ca, h] : {std::pair{4, 10}, {100, 50}, {2000, 50}, {4, 2}}) {
    auto omni = cfg_for(kE10, ca, h);
    auto dir = omni;
    dir.antenna_mode = AntennaMode::Directional;
    auto a = per_node_throughput(omni), b = per_node_throughput(dir);
    CHECK(a.condition == b.condition);
    CHECK(a.lambda_a == b.lambda_a);
    CHECK(a.lambda_i == b.lambda_i);
    CHECK(aggregate_adhoc(omni) == aggregate_adhoc(dir));
    dir.phi = std::numbers::pi / 2;
    double g = 1;
    if (a.condition == Condition::Connectivity) g = 16;
    if (a.condition == Condition::Interference) g = 4;
    CHECK(per_node_throughput(dir).lambda_a == doctest::Approx(g * a.lambda_a));
  }
}

TEST_CASE("aggregate_adhoc examples") {
  double L = std::log(static_cast<double>(kE10));
  CHECK(aggregate_adhoc(cfg_for(kE10, 4, 10)) == doctest::Approx(kE10 * 100.0 / (10 * L)));
  CHECK(aggregate_adhoc(cfg_for(kE10, 4, 10)) == doctest::Approx(std::exp(10.0)).epsilon(1e-4));
  CHECK(aggregate_adhoc(cfg_for(kE10, 4, 2)) == doctest::Approx(1000.0).epsilon(1e-4));
  for (auto [ca, h] : {std::pair{4, 10}, {100, 50}, {2000, 50}, {4, 2}}) {
    CHECK(aggregate_adhoc(cfg_for(kE10, ca, h, 0.0)) == 0.0);
  }
}

TEST_CASE("aggregate_infra branches") {
  CHECK(aggregate_infra(4, 2, 2, 10) == 40);
  CHECK(aggregate_infra(4, 2, 4, 10) == 20);
  CHECK(aggregate_infra(4, 6, 6, 10) == doctest::Approx(aggregate_infra(4, 6, 7, 10 * 7.0 / 6.0)));
  CHECK(aggregate_infra(4, 6, 6, 10) == aggregate_infra(4, 6, 6, 10));
}

TEST_CASE("delay orders and the headline gains") {
  NetworkConfig c = cfg_for(kE10, 4, 10);
  c.C_I = 12;
  c.m = 12;
  c.C = 16;
  CHECK(delay(c).d_i == doctest::Approx(1.0 / 12));
  double L = std::log(static_cast<double>(kE10));
  CHECK(delay(c).d_a == doctest::Approx(1000 * L / kE10));
  auto dir = c;
  dir.antenna_mode = AntennaMode::Directional;
  dir.theta = std::numbers::pi / 12;
  CHECK(sector_count(dir.theta) == 24);
  CHECK(delay(dir).d_i == doctest::Approx(1.0 / 288));
  CHECK(delay(c).d_i / delay(dir).d_i == doctest::Approx(24.0));
  NetworkConfig sc = apply_preset(c, Preset::ScIs);
  CHECK(delay(sc).d_i == 1.0);
  CHECK(delay(sc).d_i / delay(dir).d_i == doctest::Approx(288.0));
  dir.theta = kTwoPi;
  CHECK(delay(dir).d_i == doctest::Approx(1.0 / 12));
}

TEST_CASE("presets") {
  NetworkConfig base = cfg_for(kE10, 4, 1);
  auto sc = apply_preset(base, Preset::ScAh);
  CHECK(sc.H == 47);
  CHECK(sc.C_A == 1);
  CHECK(sc.W_A == base.W);
  CHECK(sc.W_I == 0);
  CHECK_NOTHROW(validate_config(sc));
  auto t = per_node_throughput(sc);
  CHECK(t.condition == Condition::Connectivity);
  CHECK(t.lambda_i == 0);
  double L = std::log(static_cast<double>(kE10));
  double target = sc.W / std::sqrt(kE10 * L);
  CHECK(std::abs(t.lambda_a / target - 1) <= 1.0 / static_cast<double>(sc.H));
  auto mc = apply_preset(base, Preset::McAh);
  CHECK(mc.C_A == 4);
  CHECK(per_node_throughput(mc).condition == Condition::Connectivity);
  auto is = apply_preset(base, Preset::ScIs);
  CHECK(is.C_A == 1);
  CHECK(is.C_I == 1);
  CHECK(is.m == 2);
  CHECK(parse_preset("mc-ah") == Preset::McAh);
  CHECK_THROWS_AS(parse_preset("xx"), Error);
}

TEST_CASE("optimal_point") {
  NetworkConfig c = cfg_for(64, 1, 1);
  c.b = 64;
  c.b0 = 8;
  CHECK(optimal_point(c).lambda_opt == c.W);
  c.C_I = 12;
  c.m = 12;
  c.bs_service_constant = 1;
  CHECK(optimal_point(c).d_opt == doctest::Approx(1.0 / 12));
}
