#include "core/ergodicity.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "core/special.hpp"

namespace cmh {

namespace {

// Root of the increasing function f on (0, inf): smallest x with f(x) = 0.
double bisect_increasing(const std::function<double(double)>& f) {
  double lo = 1e-12;
  double hi = 1.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("bisect_increasing: no bracket");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = f(mid);
    if (std::fabs(v) < 1e-14 || hi - lo < 1e-14 * (1.0 + mid)) return mid;
    if (v < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::domain_error("gamma must lie in (0,1)");
  }
}

}  // namespace

bool theorem1_check(const Theorem1Inputs& in) {
  require_gamma(in.gamma);
  if (!(in.q_min >= 0.0 && in.q_min <= in.q_max && in.q_max < 1.0)) {
    throw std::domain_error("theorem1_check: need 0 <= q_min <= q_max < 1");
  }
  if (!(in.q_max < 0.5)) return false;
  double lhs = (1.0 - 2.0 * in.q_max + in.q_min * in.q_max) / (1.0 - in.q_min);
  return lhs > in.gamma;
}

double solve_cmh_c_threshold(double gamma) {
  require_gamma(gamma);
  double target = (1.0 - gamma) / 2.0;
  return bisect_increasing([target](double c) {
    return (2.0 * special::normal_cdf(c) - 1.0) - target;
  });
}

REThresholds solve_re_thresholds(int K, int m, double a1, double a2,
                                 double gamma) {
  require_gamma(gamma);
  if (K < 1 || m < 1 || !(a1 > 0.0) || !(a2 > 0.0)) {
    throw std::domain_error("solve_re_thresholds: invalid parameters");
  }
  double target = (1.0 - gamma) / 2.0;
  double alpha1 = K / 2.0 + a1;
  double alpha2 = K * m / 2.0 + a2;

  REThresholds out;
  out.eps_mu = bisect_increasing([target](double e) {
    return (2.0 * special::normal_cdf(e) - 1.0) - target;
  });
  out.eps_theta = bisect_increasing([target, K](double e) {
    return std::pow(2.0 * special::normal_cdf(e) - 1.0, K) - target;
  });
  out.eps_lambda = bisect_increasing([target, alpha1, alpha2](double e) {
    double f1 = -std::expm1(-2.0 * e * alpha1 * std::sqrt(alpha1));
    double f2 = -std::expm1(-2.0 * e * alpha2 * std::sqrt(alpha2));
    return f1 * f2 - target;
  });
  return out;
}

NNDriftReport verify_nn_drift(std::span<const StateVector> probe_states,
                              long mc_draws, RngStream& rng) {
  if (mc_draws < 2) throw std::invalid_argument("verify_nn_drift: mc_draws >= 2");
  NNDriftReport report;
  auto V = [](double x1, double x2) { return x1 * x1 + 2.0 * x2 * x2; };

  for (const auto& state : probe_states) {
    double x1 = state.blocks[0][0];
    double x2 = state.blocks[1][0];

    double sum = 0.0;
    double sumsq = 0.0;
    for (long i = 0; i < mc_draws; ++i) {
      double u = rng.next_uniform();
      double v;
      if (u < 0.5) {
        double x1p = x2 + special::normal_quantile(rng.next_uniform());
        v = V(x1p, x2);
      } else {
        double x2p = 0.5 * x1 +
                     std::sqrt(0.5) * special::normal_quantile(rng.next_uniform());
        v = V(x1, x2p);
      }
      sum += v;
      sumsq += v * v;
    }
    double n = static_cast<double>(mc_draws);
    double mean = sum / n;
    double var = (sumsq - n * mean * mean) / (n - 1.0);

    DriftProbeResult r;
    r.v = V(x1, x2);
    r.closed_form = 0.75 * r.v + 1.0;
    r.mc_estimate = mean;
    r.mc_se = std::sqrt(var / n);
    r.within = std::fabs(r.mc_estimate - r.closed_form) <= 4.0 * r.mc_se;
    if (!r.within) report.all_within = false;
    report.probes.push_back(r);
  }
  return report;
}

}  // namespace cmh
