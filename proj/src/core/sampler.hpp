#ifndef CMH_CORE_SAMPLER_HPP
#define CMH_CORE_SAMPLER_HPP

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core/models.hpp"
#include "core/neighborhoods.hpp"
#include "core/rng.hpp"

namespace cmh {

struct ScanProbabilities {
  std::vector<double> p;

  explicit ScanProbabilities(std::vector<double> probs);
};

struct KernelStepRecord {
  int selected_block = -1;
  bool has_proposal = false;
  std::vector<double> proposal;
  bool accepted = true;
  double alpha = 1.0;
  int proposal_attempts = 0;
};

// Raised when accept-reject proposal generation exceeds max_attempts,
// which signals a neighborhood with mass numerically close to 1.
struct StuckProposalError : std::runtime_error {
  StuckProposalError(int attempts, double mass);
  int attempts;
  double mass;
};

// Index i with probability p_i, by inverse CDF on the cumulative p.
int select_block(const ScanProbabilities& p, double u);
int select_block(const ScanProbabilities& p, RngStream& rng);

// Full-conditional update of one fixed block (the scan step with the
// multinomial draw already made).
void gibbs_update_block(StateVector& state, const Model& model, int block,
                        RngStream& rng);

// Draw from the conditional restricted to the complement of the realized
// neighborhood, by accept-reject against the unrestricted conditional.
std::pair<std::vector<double>, int> restricted_proposal(
    const BlockConditional& conditional, const RealizedNeighborhood& neighborhood,
    RngStream& rng, int max_attempts = 1000000);

// min{1, (1 - mass at current) / (1 - mass at proposal)}.
double acceptance_probability(double mass_at_current, double mass_at_proposal);

// CMH update of one fixed block: restricted proposal, then M-H accept with
// the exact neighborhood masses at the current and proposed block values.
void cmh_update_block(StateVector& state, const Model& model, int block,
                      const NeighborhoodSpec& spec, RngStream& rng,
                      KernelStepRecord& rec, int max_attempts = 1000000);

// One random-scan transition. RNG consumption within a step is fixed-order:
// block selection, then the block draw / proposal attempts, then the
// accept-reject uniform (drawn even when alpha = 1).
KernelStepRecord gibbs_step_inplace(StateVector& state, const Model& model,
                                    const ScanProbabilities& p, RngStream& rng);
KernelStepRecord cmh_step_inplace(StateVector& state, const Model& model,
                                  const ScanProbabilities& p,
                                  std::span<const NeighborhoodSpec> specs,
                                  RngStream& rng, int max_attempts = 1000000);

std::pair<StateVector, KernelStepRecord> gibbs_step(const StateVector& state,
                                                    const Model& model,
                                                    const ScanProbabilities& p,
                                                    RngStream& rng);
std::pair<StateVector, KernelStepRecord> cmh_step(
    const StateVector& state, const Model& model, const ScanProbabilities& p,
    std::span<const NeighborhoodSpec> specs, RngStream& rng,
    int max_attempts = 1000000);

}  // namespace cmh

#endif
