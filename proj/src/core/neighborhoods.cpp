#include "core/neighborhoods.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/models.hpp"

namespace cmh {

NeighborhoodSpec NeighborhoodSpec::interval(double halfwidth, Scaling s) {
  if (halfwidth < 0.0) {
    throw std::domain_error("NeighborhoodSpec: halfwidth must be >= 0");
  }
  NeighborhoodSpec spec;
  spec.kind = Kind::Interval1D;
  spec.param = halfwidth;
  spec.scaling = s;
  return spec;
}

NeighborhoodSpec NeighborhoodSpec::fixed_density(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("NeighborhoodSpec: fixed density q must lie in (0,1)");
  }
  NeighborhoodSpec spec;
  spec.kind = Kind::FixedDensity1D;
  spec.param = q;
  return spec;
}

NeighborhoodSpec NeighborhoodSpec::ball(double radius, Scaling s) {
  if (radius < 0.0) {
    throw std::domain_error("NeighborhoodSpec: radius must be >= 0");
  }
  NeighborhoodSpec spec;
  spec.kind = Kind::Ball;
  spec.param = radius;
  spec.scaling = s;
  return spec;
}

NeighborhoodSpec NeighborhoodSpec::rectangle(double hw1, double hw2, Scaling s) {
  if (hw1 < 0.0 || hw2 < 0.0) {
    throw std::domain_error("NeighborhoodSpec: halfwidths must be >= 0");
  }
  NeighborhoodSpec spec;
  spec.kind = Kind::Rectangle2D;
  spec.param = hw1;
  spec.param2 = hw2;
  spec.scaling = s;
  return spec;
}

bool region_contains(const Region& r, std::span<const double> point) {
  return std::visit(
      [point](const auto& reg) -> bool {
        using T = std::decay_t<decltype(reg)>;
        if constexpr (std::is_same_v<T, EmptyRegion>) {
          return false;
        } else if constexpr (std::is_same_v<T, IntervalRegion>) {
          return point[0] > reg.lo && point[0] < reg.hi;
        } else if constexpr (std::is_same_v<T, BallRegion>) {
          double s = 0.0;
          for (std::size_t k = 0; k < reg.center.size(); ++k) {
            double d = point[k] - reg.center[k];
            s += d * d;
          }
          return s < reg.radius * reg.radius;
        } else {
          return point[0] > reg.lo1 && point[0] < reg.hi1 &&
                 point[1] > reg.lo2 && point[1] < reg.hi2;
        }
      },
      r);
}

namespace {

// Mass of the interval [lo, hi] under a scalar conditional, lo clipped at 0
// for gamma conditionals (support is the positive half line).
double interval_mass(const ScalarConditional& c, double& lo, double hi) {
  if (std::holds_alternative<Gamma1D>(c)) lo = std::max(0.0, lo);
  return scalar_cdf(c, hi) - scalar_cdf(c, lo);
}

ScalarConditional to_scalar(const BlockConditional& c, const char* what) {
  if (const auto* g = std::get_if<Gaussian1D>(&c)) return *g;
  if (const auto* g = std::get_if<Gamma1D>(&c)) return *g;
  if (std::get_if<Uniform01>(&c)) return Uniform01{};
  throw std::invalid_argument(std::string(what) +
                              ": spec requires a scalar conditional");
}

}  // namespace

RealizedNeighborhood realize(const NeighborhoodSpec& spec,
                             const BlockConditional& conditional,
                             std::span<const double> current_block,
                             int block_index) {
  RealizedNeighborhood out;
  out.block_index = block_index;

  switch (spec.kind) {
    case NeighborhoodSpec::Kind::Empty:
      out.region = EmptyRegion{};
      out.mass = 0.0;
      return out;

    case NeighborhoodSpec::Kind::Interval1D: {
      ScalarConditional c = to_scalar(conditional, "Interval1D");
      double w = spec.param;
      if (spec.scaling == Scaling::ConditionalSdUnits) w *= scalar_sd(c);
      double x = current_block[0];
      double lo = x - w;
      double hi = x + w;
      double mass = w > 0.0 ? interval_mass(c, lo, hi) : 0.0;
      out.region = IntervalRegion{lo, hi};
      out.mass = mass;
      return out;
    }

    case NeighborhoodSpec::Kind::FixedDensity1D: {
      const auto* g = std::get_if<Gaussian1D>(&conditional);
      if (g == nullptr) {
        throw std::invalid_argument(
            "FixedDensity1D: spec requires a Gaussian conditional");
      }
      double x = current_block[0];
      double d = fixed_density_halfwidth(*g, x, spec.param);
      out.region = IntervalRegion{x - d, x + d};
      out.mass = spec.param;  // exact by construction
      return out;
    }

    case NeighborhoodSpec::Kind::Ball: {
      const auto* b = std::get_if<IsotropicGaussianBlock>(&conditional);
      if (b == nullptr) {
        throw std::invalid_argument(
            "Ball: spec requires an isotropic Gaussian block conditional");
      }
      if (current_block.size() != b->mean.size()) {
        throw std::invalid_argument("Ball: dimension mismatch");
      }
      double r = spec.param;
      if (spec.scaling == Scaling::ConditionalSdUnits) r *= b->sd;
      out.region = BallRegion{{current_block.begin(), current_block.end()}, r};
      out.mass = ball_mass(*b, current_block, r);
      return out;
    }

    case NeighborhoodSpec::Kind::Rectangle2D: {
      const auto* p = std::get_if<GammaPair>(&conditional);
      if (p == nullptr) {
        throw std::invalid_argument(
            "Rectangle2D: spec requires an independent gamma pair conditional");
      }
      double w1 = spec.param;
      double w2 = spec.param2;
      if (spec.scaling == Scaling::ConditionalSdUnits) {
        w1 *= sd_of(p->first);
        w2 *= sd_of(p->second);
      }
      double lo1 = current_block[0] - w1;
      double hi1 = current_block[0] + w1;
      double lo2 = current_block[1] - w2;
      double hi2 = current_block[1] + w2;
      ScalarConditional c1 = p->first;
      ScalarConditional c2 = p->second;
      double m1 = w1 > 0.0 ? interval_mass(c1, lo1, hi1) : 0.0;
      double m2 = w2 > 0.0 ? interval_mass(c2, lo2, hi2) : 0.0;
      out.region = RectangleRegion{lo1, hi1, lo2, hi2};
      out.mass = m1 * m2;
      return out;
    }
  }
  throw std::logic_error("realize: unknown neighborhood kind");
}

double fixed_density_halfwidth(const Gaussian1D& conditional, double center,
                               double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("fixed_density_halfwidth: q must lie in (0,1)");
  }
  auto mass_at = [&](double d) {
    return cdf(conditional, center + d) - cdf(conditional, center - d);
  };
  double lo = 0.0;
  double hi = conditional.sd;
  while (mass_at(hi) < q) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6 * conditional.sd) break;  // q within 1e-12 of 1
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = mass_at(mid) - q;
    if (std::fabs(f) < 1e-12 && hi - lo < 1e-12 * (1.0 + mid)) return mid;
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

AdmissibilityAudit check_admissibility(std::span<const NeighborhoodSpec> specs,
                                       const Model& model,
                                       std::span<const StateVector> probes) {
  if (probes.empty()) {
    throw std::invalid_argument("check_admissibility: need at least one probe state");
  }
  AdmissibilityAudit audit;
  audit.q_min_observed = 1.0;
  audit.q_max_observed = 0.0;
  for (const auto& state : probes) {
    for (int i = 0; i < model.block_count(); ++i) {
      auto c = model.conditional(i, state);
      auto realized = realize(specs[i], c, state.blocks[i], i);
      audit.q_min_observed = std::min(audit.q_min_observed, realized.mass);
      audit.q_max_observed = std::max(audit.q_max_observed, realized.mass);
      if (realized.mass >= 1.0 - 1e-9) audit.violation = true;
    }
  }
  return audit;
}

}  // namespace cmh
