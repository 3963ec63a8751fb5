#ifndef CMH_CORE_ERGODICITY_HPP
#define CMH_CORE_ERGODICITY_HPP

#include <span>
#include <vector>

#include "core/models.hpp"
#include "core/rng.hpp"

namespace cmh {

struct Theorem1Inputs {
  double gamma;  // drift rate of the GS, in (0,1)
  double q_min;  // uniform lower bound on neighborhood mass
  double q_max;  // uniform upper bound on neighborhood mass
};

// Sufficient condition for the CMH to inherit geometric ergodicity from a
// GS drift condition with rate gamma: q_max < 1/2 and
// (1 - 2 q_max + q_min q_max) / (1 - q_min) > gamma. Both strict.
bool theorem1_check(const Theorem1Inputs& in);

// Largest c (to 1e-6) with 2*Phi(c) - 1 = (1 - gamma)/2, i.e. the
// sd-units interval halfwidth at which the worst-case mass hits the
// q_min = 0 bound of the sufficient condition.
double solve_cmh_c_threshold(double gamma);

struct REThresholds {
  double eps_theta;
  double eps_mu;
  double eps_lambda;
};

// Neighborhood-size thresholds for the random effects CMH:
//   eps_mu:     2*Phi(eps) - 1 = (1-gamma)/2
//   eps_theta:  (2*Phi(eps) - 1)^K = (1-gamma)/2   (hypercube over-bound)
//   eps_lambda: (1-e^{-2 eps alpha1^{3/2}})(1-e^{-2 eps alpha2^{3/2}}) = (1-gamma)/2
// with alpha1 = K/2 + a1 and alpha2 = K m/2 + a2 (the scaled gamma
// coordinates are Exp(alpha_i) after the exponential transform).
REThresholds solve_re_thresholds(int K, int m, double a1, double a2,
                                 double gamma);

struct DriftProbeResult {
  double v = 0.0;           // V at the probe
  double closed_form = 0.0; // gamma*V + b = 0.75*V + 1
  double mc_estimate = 0.0; // Monte Carlo P_GS V
  double mc_se = 0.0;
  bool within = false;      // |mc - closed form| <= 4 se
};

struct NNDriftReport {
  std::vector<DriftProbeResult> probes;
  bool all_within = true;
};

// Monte Carlo check of the Normal-Normal GS drift identity
// P_GS V = 0.75 V + 1 for V(x1,x2) = x1^2 + 2 x2^2.
NNDriftReport verify_nn_drift(std::span<const StateVector> probe_states,
                              long mc_draws, RngStream& rng);

}  // namespace cmh

#endif
