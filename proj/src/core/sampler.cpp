#include "core/sampler.hpp"

#include <cmath>
#include <string>

namespace cmh {

ScanProbabilities::ScanProbabilities(std::vector<double> probs)
    : p(std::move(probs)) {
  if (p.empty()) throw std::invalid_argument("ScanProbabilities: empty");
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0) || v > 1.0) {
      throw std::invalid_argument("ScanProbabilities: entries must lie in (0,1]");
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("ScanProbabilities: must sum to 1");
  }
}

StuckProposalError::StuckProposalError(int attempts_, double mass_)
    : std::runtime_error("restricted proposal stuck after " +
                         std::to_string(attempts_) +
                         " attempts (neighborhood mass " +
                         std::to_string(mass_) + ")"),
      attempts(attempts_),
      mass(mass_) {}

int select_block(const ScanProbabilities& p, double u) {
  double acc = 0.0;
  int last = static_cast<int>(p.p.size()) - 1;
  for (int i = 0; i < last; ++i) {
    acc += p.p[i];
    if (u < acc) return i;
  }
  return last;
}

int select_block(const ScanProbabilities& p, RngStream& rng) {
  return select_block(p, rng.next_uniform());
}

void gibbs_update_block(StateVector& state, const Model& model, int block,
                        RngStream& rng) {
  auto conditional = model.conditional(block, state);
  state.blocks[block] = sample_block(conditional, rng);
}

std::pair<std::vector<double>, int> restricted_proposal(
    const BlockConditional& conditional, const RealizedNeighborhood& neighborhood,
    RngStream& rng, int max_attempts) {
  if (!(neighborhood.mass < 1.0)) {
    throw std::domain_error("restricted_proposal: neighborhood mass must be < 1");
  }
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    auto draw = sample_block(conditional, rng);
    if (!region_contains(neighborhood.region, draw)) {
      return {std::move(draw), attempt};
    }
  }
  throw StuckProposalError(max_attempts, neighborhood.mass);
}

double acceptance_probability(double mass_at_current, double mass_at_proposal) {
  if (!(mass_at_current >= 0.0 && mass_at_current < 1.0) ||
      !(mass_at_proposal >= 0.0 && mass_at_proposal < 1.0)) {
    throw std::domain_error("acceptance_probability: masses must lie in [0,1)");
  }
  double ratio = (1.0 - mass_at_current) / (1.0 - mass_at_proposal);
  return ratio < 1.0 ? ratio : 1.0;
}

void cmh_update_block(StateVector& state, const Model& model, int block,
                      const NeighborhoodSpec& spec, RngStream& rng,
                      KernelStepRecord& rec, int max_attempts) {
  auto conditional = model.conditional(block, state);
  auto current = realize(spec, conditional, state.blocks[block], block);
  auto [proposal, attempts] =
      restricted_proposal(conditional, current, rng, max_attempts);

  // The neighborhood shape parameters depend only on the other blocks, so
  // the mass at the proposed value reuses the same spec and conditional.
  auto at_proposal = realize(spec, conditional, proposal, block);
  double alpha = acceptance_probability(current.mass, at_proposal.mass);

  // Accept-reject uniform is consumed unconditionally to keep per-step
  // stream usage independent of alpha.
  double u = rng.next_uniform();
  bool accepted = u < alpha;

  rec.selected_block = block;
  rec.has_proposal = true;
  rec.proposal = proposal;
  rec.alpha = alpha;
  rec.proposal_attempts = attempts;
  rec.accepted = accepted;
  if (accepted) state.blocks[block] = rec.proposal;
}

KernelStepRecord gibbs_step_inplace(StateVector& state, const Model& model,
                                    const ScanProbabilities& p, RngStream& rng) {
  KernelStepRecord rec;
  rec.selected_block = select_block(p, rng);
  gibbs_update_block(state, model, rec.selected_block, rng);
  rec.accepted = true;
  rec.alpha = 1.0;
  return rec;
}

KernelStepRecord cmh_step_inplace(StateVector& state, const Model& model,
                                  const ScanProbabilities& p,
                                  std::span<const NeighborhoodSpec> specs,
                                  RngStream& rng, int max_attempts) {
  KernelStepRecord rec;
  int block = select_block(p, rng);
  cmh_update_block(state, model, block, specs[block], rng, rec, max_attempts);
  return rec;
}

std::pair<StateVector, KernelStepRecord> gibbs_step(const StateVector& state,
                                                    const Model& model,
                                                    const ScanProbabilities& p,
                                                    RngStream& rng) {
  StateVector next = state;
  auto rec = gibbs_step_inplace(next, model, p, rng);
  return {std::move(next), std::move(rec)};
}

std::pair<StateVector, KernelStepRecord> cmh_step(
    const StateVector& state, const Model& model, const ScanProbabilities& p,
    std::span<const NeighborhoodSpec> specs, RngStream& rng, int max_attempts) {
  StateVector next = state;
  auto rec = cmh_step_inplace(next, model, p, specs, rng, max_attempts);
  return {std::move(next), std::move(rec)};
}

}  // namespace cmh
