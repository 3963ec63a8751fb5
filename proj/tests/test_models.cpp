#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "core/models.hpp"
#include "core/sampler.hpp"

using namespace cmh;

namespace {

REDataset zero_dataset(int K, int m) {
  REDataset d;
  d.y.assign(K, std::vector<double>(m, 0.0));
  finalize_re_dataset(d);
  return d;
}

}  // namespace

TEST_CASE("normal-normal conditionals") {
  NormalNormalModel model;
  StateVector s{{{2.0}, {0.0}}};

  auto c0 = std::get<Gaussian1D>(model.conditional(0, s));
  CHECK(c0.mean == 0.0);
  CHECK(c0.sd == 1.0);

  auto c1 = std::get<Gaussian1D>(model.conditional(1, s));
  CHECK(c1.mean == doctest::Approx(1.0));
  CHECK(c1.sd == doctest::Approx(std::sqrt(0.5)));

  StateVector origin{{{0.0}, {0.0}}};
  auto c1b = std::get<Gaussian1D>(model.conditional(1, origin));
  CHECK(c1b.mean == 0.0);

  CHECK_THROWS_AS(model.conditional(2, s), std::out_of_range);
  auto init = model.initial_state();
  CHECK(init.blocks[0][0] == 0.0);
  CHECK(init.blocks[1][0] == 0.0);
  CHECK(model.functional(s) == 2.0);
}

TEST_CASE("normal-normal long-run GS moments match the target") {
  NormalNormalModel model;
  ScanProbabilities p(model.scan_probabilities());
  StateVector state = model.initial_state();
  std::uint64_t seed = derive_chain_seed(314, "moments", 0);
  const long n = 1000000;
  double s1 = 0.0, s2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (long j = 1; j <= n; ++j) {
    auto rng = step_stream(seed, j);
    gibbs_step_inplace(state, model, p, rng);
    double x1 = state.blocks[0][0];
    double x2 = state.blocks[1][0];
    s1 += x1;
    s2 += x2;
    s11 += x1 * x1;
    s22 += x2 * x2;
    s12 += x1 * x2;
  }
  double m1 = s1 / n, m2 = s2 / n;
  CHECK(std::fabs(m1) < 0.02);
  CHECK(std::fabs(m2) < 0.02);
  CHECK(s11 / n - m1 * m1 == doctest::Approx(2.0).epsilon(0.02));
  CHECK(s22 / n - m2 * m2 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s12 / n - m1 * m2 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("unit-square conditionals") {
  UnitSquareModel model;
  StateVector s{{{0.2}, {0.9}}};
  CHECK(std::holds_alternative<Uniform01>(model.conditional(0, s)));
  CHECK(std::holds_alternative<Uniform01>(model.conditional(1, s)));
  CHECK_THROWS_AS(model.conditional(-1, s), std::out_of_range);
  auto init = model.initial_state();
  CHECK(init.blocks[0][0] == 0.5);
  CHECK(init.blocks[1][0] == 0.5);
}

TEST_CASE("random effects conditionals: direct substitution") {
  // lambda_theta = lambda_e = 1, m = 10, mu = 0, all ybar_i = 0:
  // theta conditional is N(0, 1/11) per coordinate.
  auto data = zero_dataset(3, 10);
  RandomEffectsModel model(data, REHyper{});
  StateVector s{{{0.0, 0.0, 0.0}, {0.0}, {1.0, 1.0}}};

  auto theta = std::get<IsotropicGaussianBlock>(model.conditional(0, s));
  REQUIRE(theta.mean.size() == 3);
  for (double mu_k : theta.mean) CHECK(mu_k == 0.0);
  CHECK(theta.sd == doctest::Approx(1.0 / std::sqrt(11.0)));

  // K=3, a1=30 -> alpha1 = 31.5; Km=30, a2=30 -> alpha2 = 45.
  CHECK(model.alpha1() == doctest::Approx(31.5));
  CHECK(model.alpha2() == doctest::Approx(45.0));

  // theta = mu*1 makes beta1 collapse to b1.
  StateVector flat{{{0.7, 0.7, 0.7}, {0.7}, {1.0, 1.0}}};
  CHECK(model.beta1(flat) == doctest::Approx(30.0));
  CHECK(model.beta2(flat) >= 30.0);

  auto lambda = std::get<GammaPair>(model.conditional(2, s));
  CHECK(lambda.first.shape == doctest::Approx(31.5));
  CHECK(lambda.second.shape == doctest::Approx(45.0));
  CHECK(lambda.first.rate == doctest::Approx(model.beta1(s)));
  CHECK(lambda.second.rate == doctest::Approx(model.beta2(s)));

  // mu conditional: N((s0 m0 + K l_t theta_bar)/(s0 + K l_t), 1/(s0 + K l_t)).
  StateVector s2{{{1.0, 2.0, 3.0}, {0.0}, {2.0, 1.0}}};
  auto mu = std::get<Gaussian1D>(model.conditional(1, s2));
  CHECK(mu.mean == doctest::Approx((0.0 + 3.0 * 2.0 * 2.0) / (1.0 + 6.0)));
  CHECK(mu.sd == doctest::Approx(1.0 / std::sqrt(7.0)));

  CHECK_THROWS_AS(model.conditional(3, s), std::out_of_range);
  StateVector bad{{{0.0, 0.0, 0.0}, {0.0}, {-1.0, 1.0}}};
  CHECK_THROWS_AS(model.conditional(0, bad), std::domain_error);
}

TEST_CASE("random effects initial state") {
  auto data = simulate_re_data(3, 10, 0.0, 1.0, 2.0, 2.0, 11);
  RandomEffectsModel model(data, REHyper{});
  auto s = model.initial_state();
  REQUIRE(s.blocks.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(s.blocks[0][i] == data.ybar[i]);
  CHECK(s.blocks[1][0] == 0.0);
  CHECK(s.blocks[2][0] == 1.0);
  CHECK(s.blocks[2][1] == 1.0);
  CHECK(model.functional(s) == 0.0);
}

TEST_CASE("simulate_re_data derived statistics") {
  auto data = simulate_re_data(3, 10, 0.0, 1.0, 2.0, 2.0, 42);
  REQUIRE(data.K == 3);
  REQUIRE(data.m == 10);

  // Recompute SSE and the means from the raw observations.
  double sse = 0.0;
  double grand = 0.0;
  for (int i = 0; i < 3; ++i) {
    REQUIRE(data.y[i].size() == 10);
    double mean = 0.0;
    for (double v : data.y[i]) mean += v;
    mean /= 10.0;
    CHECK(mean == doctest::Approx(data.ybar[i]).epsilon(1e-12));
    for (double v : data.y[i]) sse += (v - mean) * (v - mean);
    grand += mean;
  }
  CHECK(sse == doctest::Approx(data.sse).epsilon(1e-9));
  CHECK(grand / 3.0 == doctest::Approx(data.grand_mean).epsilon(1e-12));

  // Distinct seeds give distinct data.
  auto other = simulate_re_data(3, 10, 0.0, 1.0, 2.0, 2.0, 43);
  CHECK(other.y[0][0] != data.y[0][0]);
  // Same seed reproduces bit-identically.
  auto again = simulate_re_data(3, 10, 0.0, 1.0, 2.0, 2.0, 42);
  CHECK(again.y[2][9] == data.y[2][9]);
}

TEST_CASE("simulate_re_data_given: within-group variance oracle") {
  // With lambda_e = 1e6 pinned, SSE/(K(m-1)) ~ 1/lambda_e within 10%.
  std::vector<double> theta(20, 0.0);
  auto data = simulate_re_data_given(theta, 50, 1e6, 7);
  double df = 20.0 * 49.0;
  CHECK(data.sse / df == doctest::Approx(1e-6).epsilon(0.10));
}

TEST_CASE("random effects conditional moments vs Monte Carlo") {
  auto data = simulate_re_data(3, 10, 0.0, 1.0, 2.0, 2.0, 9);
  RandomEffectsModel model(data, REHyper{});
  StateVector s{{{0.3, -0.2, 0.5}, {0.1}, {1.2, 0.8}}};

  // Each block conditional integrates to 1 over a wide grid (Simpson).
  auto mu_c = std::get<Gaussian1D>(model.conditional(1, s));
  {
    double lo = mu_c.mean - 8.0 * mu_c.sd;
    double hi = mu_c.mean + 8.0 * mu_c.sd;
    int n = 4000;
    double h = (hi - lo) / (2 * n);
    auto dens = [&](double x) {
      double z = (x - mu_c.mean) / mu_c.sd;
      return std::exp(-0.5 * z * z) / (mu_c.sd * std::sqrt(2.0 * M_PI));
    };
    double acc = dens(lo) + dens(hi);
    for (int k = 1; k < 2 * n; ++k) acc += dens(lo + k * h) * (k % 2 ? 4.0 : 2.0);
    CHECK(acc * h / 3.0 == doctest::Approx(1.0).epsilon(1e-8));
  }

  // Conditional mean/sd of each block against 10^6 inverse-CDF draws.
  auto theta_c = std::get<IsotropicGaussianBlock>(model.conditional(0, s));
  RngStream rng(1234);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = theta_c.mean[0] + theta_c.sd * sample(Gaussian1D(0.0, 1.0), rng);
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  double se_mean = theta_c.sd / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(mean - theta_c.mean[0]) < 4.0 * se_mean);
  CHECK(var == doctest::Approx(theta_c.sd * theta_c.sd).epsilon(0.01));

  auto lam_c = std::get<GammaPair>(model.conditional(2, s));
  sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(lam_c.first, rng);
  double lam_mean = mean_of(lam_c.first);
  double lam_se = sd_of(lam_c.first) / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(sum / n - lam_mean) < 4.0 * lam_se);
}

TEST_CASE("beta1/beta2 never drop below the prior rates") {
  auto data = simulate_re_data(3, 10, 0.0, 1.0, 2.0, 2.0, 99);
  RandomEffectsModel model(data, REHyper{});
  RngStream rng(5);
  for (int i = 0; i < 500; ++i) {
    StateVector s{{{4.0 * (rng.next_uniform() - 0.5),
                    4.0 * (rng.next_uniform() - 0.5),
                    4.0 * (rng.next_uniform() - 0.5)},
                   {2.0 * (rng.next_uniform() - 0.5)},
                   {0.1 + rng.next_uniform(), 0.1 + rng.next_uniform()}}};
    CHECK(model.beta1(s) >= 30.0);
    CHECK(model.beta2(s) >= 30.0);
  }
}

TEST_CASE("squared_distance and total_dim") {
  StateVector a{{{0.0, 1.0}, {2.0}}};
  StateVector b{{{1.0, 1.0}, {0.0}}};
  CHECK(a.total_dim() == 3);
  CHECK(squared_distance(a, b) == doctest::Approx(5.0));
  CHECK(squared_distance(a, a) == 0.0);
  StateVector c{{{0.0}}};
  CHECK_THROWS_AS(squared_distance(a, c), std::invalid_argument);
}

TEST_CASE("dataset validation") {
  REDataset bad;
  bad.y = {{1.0, 2.0}, {3.0}};
  CHECK_THROWS_AS(finalize_re_dataset(bad), std::invalid_argument);
  CHECK_THROWS_AS(simulate_re_data(0, 10, 0.0, 1.0, 2.0, 2.0, 1),
                  std::invalid_argument);
  auto data = zero_dataset(2, 3);
  REHyper h;
  h.s0 = -1.0;
  CHECK_THROWS_AS(RandomEffectsModel(data, h), std::invalid_argument);
}
