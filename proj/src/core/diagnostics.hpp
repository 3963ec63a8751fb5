#ifndef CMH_CORE_DIAGNOSTICS_HPP
#define CMH_CORE_DIAGNOSTICS_HPP

#include <span>
#include <string>
#include <vector>

#include "core/models.hpp"
#include "core/sampler.hpp"

namespace cmh {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

// Per-chain summary: sample mean squared jump distance, Monte Carlo average
// of the target functional, and acceptance counts.
struct ChainSummary {
  double msjd = 0.0;
  double beta_hat = 0.0;
  long accept_count = 0;
  long step_count = 0;
};

// (1/(n-1)) sum of squared Euclidean jumps between consecutive full states.
double msjd(std::span<const StateVector> chain);

// Mean of per-chain MSJD values with its standard error (sd / sqrt(N)).
Estimate esjd(std::span<const ChainSummary> summaries);

// Mean squared deviation of the beta_hat replicates from beta_ref, with the
// standard error of that mean.
Estimate mse(std::span<const double> beta_hats, double beta_ref);

// First-order delta-method ratio for independent numerator and denominator.
Estimate ratio_with_se(const Estimate& num, const Estimate& den);

double acceptance_rate(std::span<const KernelStepRecord> records);

// Per-configuration result row, serialized as one CSV line by the harness.
struct ExperimentReport {
  std::string config_id;
  Estimate esjd_gs;
  Estimate esjd_cmh;
  Estimate mse_gs;
  Estimate mse_cmh;
  Estimate esjdr;
  Estimate mser;
  double accept_rate = 1.0;
  double beta_ref = 0.0;
};

}  // namespace cmh

#endif
