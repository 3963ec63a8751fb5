#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "core/ergodicity.hpp"
#include "core/special.hpp"

using namespace cmh;

TEST_CASE("theorem1_check examples") {
  // q_min = q_max = q with gamma = 0.75: condition reduces to q < 0.25.
  CHECK(theorem1_check({0.75, 0.2, 0.2}));
  CHECK(theorem1_check({0.75, 0.249, 0.249}));
  CHECK(!theorem1_check({0.75, 0.25, 0.25}));
  CHECK(!theorem1_check({0.75, 0.3, 0.3}));

  // q_min = 0: condition reduces to q_max < 0.125.
  CHECK(theorem1_check({0.75, 0.0, 0.124}));
  CHECK(!theorem1_check({0.75, 0.0, 0.125}));
  CHECK(!theorem1_check({0.75, 0.0, 0.2}));

  // q_max = 0.5 fails the strict inequality for every gamma.
  CHECK(!theorem1_check({0.01, 0.0, 0.5}));
  CHECK(!theorem1_check({0.99, 0.5, 0.5}));

  CHECK_THROWS_AS(theorem1_check({1.5, 0.0, 0.1}), std::domain_error);
  CHECK_THROWS_AS(theorem1_check({0.5, 0.3, 0.2}), std::domain_error);
}

TEST_CASE("theorem1_check monotonicity") {
  RngStream rng(61);
  for (int i = 0; i < 2000; ++i) {
    double gamma = 0.05 + 0.9 * rng.next_uniform();
    double q_max = 0.6 * rng.next_uniform();
    double q_min = q_max * rng.next_uniform();
    bool base = theorem1_check({gamma, q_min, q_max});
    // Larger q_max (same q_min) never flips false -> true.
    double bigger = q_max + (0.99 - q_max) * rng.next_uniform();
    if (!base) CHECK(!theorem1_check({gamma, q_min, bigger}));
    // Smaller gamma never flips true -> false.
    double smaller = gamma * rng.next_uniform();
    if (base && smaller > 0.0) CHECK(theorem1_check({smaller, q_min, q_max}));
  }
}

TEST_CASE("solve_cmh_c_threshold") {
  double c = solve_cmh_c_threshold(0.75);
  CHECK(c == doctest::Approx(0.1573).epsilon(1e-3));
  CHECK(std::fabs(c - 0.1573) < 1e-4);
  // Round trip onto the mass equation.
  CHECK(2.0 * special::normal_cdf(c) - 1.0 == doctest::Approx(0.125).epsilon(1e-8));
  // Degenerate limit.
  CHECK(solve_cmh_c_threshold(0.9999) < 1e-3);
  CHECK_THROWS_AS(solve_cmh_c_threshold(0.0), std::domain_error);
  CHECK_THROWS_AS(solve_cmh_c_threshold(1.0), std::domain_error);
}

TEST_CASE("solve_re_thresholds for the paper-scale configuration") {
  double gamma = 23.0 / 30.0;
  auto t = solve_re_thresholds(3, 10, 30.0, 30.0, gamma);
  CHECK(std::fabs(t.eps_theta - 0.6567) < 1e-4);
  CHECK(std::fabs(t.eps_mu - 0.1467) < 1e-4);
  CHECK(std::fabs(t.eps_lambda - 0.000907) < 5e-6);

  // Round trips back to q_max target 7/60.
  double target = 7.0 / 60.0;
  CHECK(2.0 * special::normal_cdf(t.eps_mu) - 1.0 ==
        doctest::Approx(target).epsilon(1e-8));
  CHECK(std::pow(2.0 * special::normal_cdf(t.eps_theta) - 1.0, 3) ==
        doctest::Approx(target).epsilon(1e-8));
  double f1 = 1.0 - std::exp(-2.0 * t.eps_lambda * 31.5 * std::sqrt(31.5));
  double f2 = 1.0 - std::exp(-2.0 * t.eps_lambda * 45.0 * std::sqrt(45.0));
  CHECK(f1 * f2 == doctest::Approx(target).epsilon(1e-8));

  // K = 1 collapses the product: eps_theta = eps_mu.
  auto flat = solve_re_thresholds(1, 10, 30.0, 30.0, gamma);
  CHECK(flat.eps_theta == doctest::Approx(flat.eps_mu).epsilon(1e-10));

  CHECK_THROWS_AS(solve_re_thresholds(0, 10, 30.0, 30.0, gamma),
                  std::domain_error);
}

TEST_CASE("thresholds separate pass from fail at root +/- 1e-3") {
  double gamma = 0.75;
  double c = solve_cmh_c_threshold(gamma);
  auto implied_qmax = [](double cc) {
    return 2.0 * special::normal_cdf(cc) - 1.0;
  };
  CHECK(theorem1_check({gamma, 0.0, implied_qmax(c - 1e-3)}));
  CHECK(!theorem1_check({gamma, 0.0, implied_qmax(c + 1e-3)}));

  double gre = 23.0 / 30.0;
  auto t = solve_re_thresholds(3, 10, 30.0, 30.0, gre);
  auto mu_qmax = [](double e) { return 2.0 * special::normal_cdf(e) - 1.0; };
  CHECK(theorem1_check({gre, 0.0, mu_qmax(t.eps_mu - 1e-3)}));
  CHECK(!theorem1_check({gre, 0.0, mu_qmax(t.eps_mu + 1e-3)}));
}

TEST_CASE("solvers are deterministic") {
  CHECK(solve_cmh_c_threshold(0.6) == solve_cmh_c_threshold(0.6));
  auto a = solve_re_thresholds(3, 10, 30.0, 30.0, 0.7);
  auto b = solve_re_thresholds(3, 10, 30.0, 30.0, 0.7);
  CHECK(a.eps_lambda == b.eps_lambda);
}

TEST_CASE("verify_nn_drift on closed-form probes") {
  std::vector<StateVector> probes{
      StateVector{{{0.0}, {0.0}}},   // V=0, PV=1
      StateVector{{{2.0}, {0.0}}},   // V=4, PV=4
      StateVector{{{1.0}, {1.0}}}};  // V=3, PV=3.25
  RngStream rng(314159);
  auto report = verify_nn_drift(probes, 200000, rng);
  REQUIRE(report.probes.size() == 3);
  CHECK(report.probes[0].closed_form == doctest::Approx(1.0));
  CHECK(report.probes[1].closed_form == doctest::Approx(4.0));
  CHECK(report.probes[2].closed_form == doctest::Approx(3.25));
  CHECK(report.all_within);
  for (const auto& p : report.probes) {
    CHECK(p.within);
    CHECK(std::fabs(p.mc_estimate - p.closed_form) <= 4.0 * p.mc_se);
  }
  CHECK_THROWS_AS(verify_nn_drift(probes, 1, rng), std::invalid_argument);
}
