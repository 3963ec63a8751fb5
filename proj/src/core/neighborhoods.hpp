#ifndef CMH_CORE_NEIGHBORHOODS_HPP
#define CMH_CORE_NEIGHBORHOODS_HPP

#include <span>
#include <variant>
#include <vector>

#include "core/distributions.hpp"

namespace cmh {

class Model;
struct StateVector;

enum class Scaling { Absolute, ConditionalSdUnits };

// Neighborhood strategy for one block. The realized region is always
// centered at the current block value.
struct NeighborhoodSpec {
  enum class Kind { Empty, Interval1D, FixedDensity1D, Ball, Rectangle2D };

  Kind kind = Kind::Empty;
  double param = 0.0;   // halfwidth, fixed density q, or ball radius
  double param2 = 0.0;  // second rectangle halfwidth
  Scaling scaling = Scaling::Absolute;

  static NeighborhoodSpec empty() { return {}; }
  static NeighborhoodSpec interval(double halfwidth, Scaling s);
  static NeighborhoodSpec fixed_density(double q);
  static NeighborhoodSpec ball(double radius, Scaling s);
  static NeighborhoodSpec rectangle(double hw1, double hw2, Scaling s);
};

struct EmptyRegion {};
struct IntervalRegion {
  double lo;
  double hi;
};
struct BallRegion {
  std::vector<double> center;
  double radius;
};
struct RectangleRegion {
  double lo1, hi1;
  double lo2, hi2;
};

using Region =
    std::variant<EmptyRegion, IntervalRegion, BallRegion, RectangleRegion>;

bool region_contains(const Region& r, std::span<const double> point);

struct RealizedNeighborhood {
  int block_index = 0;
  Region region;
  double mass = 0.0;  // exact mass under the block's full conditional
};

// Concrete region and exact conditional mass for the given spec, centered at
// the current block value. Throws std::invalid_argument when the spec kind
// does not match the conditional.
RealizedNeighborhood realize(const NeighborhoodSpec& spec,
                             const BlockConditional& conditional,
                             std::span<const double> current_block,
                             int block_index = 0);

// Halfwidth d such that [center-d, center+d] carries conditional mass q.
double fixed_density_halfwidth(const Gaussian1D& conditional, double center,
                               double q);

struct AdmissibilityAudit {
  double q_min_observed = 0.0;
  double q_max_observed = 0.0;
  bool violation = false;  // some realized mass was numerically >= 1
};

// Sampled audit of the realized masses over a set of probe states.
AdmissibilityAudit check_admissibility(std::span<const NeighborhoodSpec> specs,
                                       const Model& model,
                                       std::span<const StateVector> probes);

}  // namespace cmh

#endif
