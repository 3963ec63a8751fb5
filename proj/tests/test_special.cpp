#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "core/special.hpp"

using namespace cmh::special;

namespace {

// Composite Simpson integration of the Gamma(a, 1) density on [0, hi],
// independent oracle for gamma_p.
double gamma_cdf_simpson(double a, double hi, int panels) {
  auto dens = [a](double x) {
    return x > 0.0 ? std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a)) : 0.0;
  };
  double h = hi / (2.0 * panels);
  double s = dens(0.0) + dens(hi);
  for (int k = 1; k < 2 * panels; ++k) {
    s += dens(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("normal_cdf basic values and symmetry") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  for (double z : {0.1, 0.5, 1.0, 2.5, 6.0}) {
    CHECK(normal_cdf(z) + normal_cdf(-z) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(normal_cdf(-40.0) == doctest::Approx(0.0));
  CHECK(normal_cdf(40.0) == doctest::Approx(1.0));
}

TEST_CASE("normal_quantile round trip") {
  for (int i = 1; i <= 999; ++i) {
    double p = i / 1000.0;
    double z = normal_quantile(p);
    CHECK(std::fabs(normal_cdf(z) - p) < 1e-12);
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.95996).epsilon(1e-5));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("gamma_p against Simpson oracle") {
  // Value used by the lambda-threshold equation: Gamma(31.5, 1) at its mean.
  double oracle = gamma_cdf_simpson(31.5, 31.5, 20000);
  CHECK(gamma_p(31.5, 31.5) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(gamma_p(31.5, 31.5) == doctest::Approx(0.524).epsilon(2e-3));

  // Series branch (x < a+1) and continued-fraction branch (x > a+1).
  CHECK(gamma_p(2.0, 1.0) == doctest::Approx(gamma_cdf_simpson(2.0, 1.0, 5000))
                                 .epsilon(1e-10));
  CHECK(gamma_p(2.0, 9.0) == doctest::Approx(gamma_cdf_simpson(2.0, 9.0, 5000))
                                 .epsilon(1e-10));
  CHECK(gamma_p(3.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("gamma_p_inverse round trip") {
  for (double a : {0.5, 2.0, 31.5, 45.0}) {
    for (int i = 1; i <= 99; ++i) {
      double p = i / 100.0;
      double x = gamma_p_inverse(a, p);
      CHECK(std::fabs(gamma_p(a, x) - p) < 1e-10);
    }
  }
  CHECK_THROWS_AS(gamma_p_inverse(2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_p_inverse(2.0, 1.0), std::domain_error);
}

TEST_CASE("central chi-square cdf") {
  // chi^2_2 has closed form 1 - exp(-x/2).
  for (double x : {0.5, 1.0, 3.0, 10.0}) {
    CHECK(chi_square_cdf(2.0, x) ==
          doctest::Approx(1.0 - std::exp(-x / 2.0)).epsilon(1e-12));
  }
  // chi^2_1: P(Z^2 <= x) = 2 Phi(sqrt(x)) - 1.
  for (double x : {0.25, 1.0, 4.0}) {
    CHECK(chi_square_cdf(1.0, x) ==
          doctest::Approx(2.0 * normal_cdf(std::sqrt(x)) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("noncentral chi-square cdf") {
  // delta = 0 reduces to the central cdf.
  for (double x : {0.5, 1.0, 5.0}) {
    CHECK(noncentral_chi_square_cdf(3.0, 0.0, x) ==
          doctest::Approx(chi_square_cdf(3.0, x)).epsilon(1e-12));
  }
  // Monotone in x, decreasing in delta.
  double prev = 0.0;
  for (double x = 0.5; x <= 20.0; x += 0.5) {
    double v = noncentral_chi_square_cdf(3.0, 1.0, x);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(noncentral_chi_square_cdf(3.0, 4.0, 2.0) <
        noncentral_chi_square_cdf(3.0, 1.0, 2.0));
  CHECK(noncentral_chi_square_cdf(3.0, 1.0, 0.0) == doctest::Approx(0.0));
}
