#include "core/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cmh::special {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / kSqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  }
  double z = normal_quantile_estimate(p);
  // Halley refinement against the high-accuracy CDF.
  for (int it = 0; it < 2; ++it) {
    double e = normal_cdf(z) - p;
    double pdf = std::exp(-0.5 * z * z) / 2.5066282746310002;
    if (pdf <= 0.0) break;
    double u = e / pdf;
    z -= u / (1.0 + 0.5 * z * u);
  }
  return z;
}

double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::domain_error("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double gamma_p_inverse(double a, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("gamma_p_inverse: p must lie in (0,1)");
  }
  // Wilson-Hilferty starting point.
  double z = normal_quantile(p);
  double t = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
  double x = a * t * t * t;
  if (!(x > 0.0) || !std::isfinite(x)) x = a;

  // Establish a bracket around the root.
  double lo = 0.0;
  double hi = x;
  while (gamma_p(a, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

  for (int it = 0; it < 200; ++it) {
    double f = gamma_p(a, x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double logpdf = (a - 1.0) * std::log(x) - x - std::lgamma(a);
    double step = f / std::exp(logpdf);
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-14 * (1.0 + std::fabs(x))) {
      x = xn;
      break;
    }
    x = xn;
  }
  return x;
}

double chi_square_cdf(double k, double x) {
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * k, 0.5 * x);
}

double noncentral_chi_square_cdf(double k, double delta, double x,
                                 double tail_tol) {
  if (delta < 0.0) {
    throw std::domain_error("noncentral_chi_square_cdf: delta must be >= 0");
  }
  if (x <= 0.0) return 0.0;
  if (delta == 0.0) return chi_square_cdf(k, x);

  const double half = 0.5 * delta;
  // Poisson(half) weights, forward from j = 0 in log space; stop once the
  // accumulated weight exceeds 1 - tail_tol (remaining terms each bounded
  // by the leftover weight since every central CDF is <= 1).
  double log_w = -half;  // log weight at j = 0
  double acc_weight = 0.0;
  double cdf = 0.0;
  for (int j = 0; j < 100000; ++j) {
    double w = std::exp(log_w);
    cdf += w * chi_square_cdf(k + 2.0 * j, x);
    acc_weight += w;
    if (1.0 - acc_weight < tail_tol) break;
    log_w += std::log(half) - std::log(static_cast<double>(j + 1));
  }
  return cdf;
}

}  // namespace cmh::special
