#ifndef CMH_CORE_DISTRIBUTIONS_HPP
#define CMH_CORE_DISTRIBUTIONS_HPP

#include <span>
#include <variant>
#include <vector>

#include "core/rng.hpp"

namespace cmh {

struct Gaussian1D {
  double mean;
  double sd;  // > 0
  Gaussian1D(double mean_, double sd_);
};

// Shape/rate parameterization: density proportional to x^{shape-1} e^{-rate x}.
struct Gamma1D {
  double shape;  // > 0
  double rate;   // > 0
  Gamma1D(double shape_, double rate_);
};

struct Uniform01 {};

// Independent Gaussian coordinates with a common standard deviation.
struct IsotropicGaussianBlock {
  std::vector<double> mean;
  double sd;  // > 0, shared across coordinates
  IsotropicGaussianBlock(std::vector<double> mean_, double sd_);
};

double cdf(const Gaussian1D& d, double x);
double cdf(const Gamma1D& d, double x);
double cdf(const Uniform01& d, double x);

double quantile(const Gaussian1D& d, double p);
double quantile(const Gamma1D& d, double p);
double quantile(const Uniform01& d, double p);

double sample(const Gaussian1D& d, RngStream& rng);
double sample(const Gamma1D& d, RngStream& rng);
double sample(const Uniform01& d, RngStream& rng);

double mean_of(const Gaussian1D& d);
double mean_of(const Gamma1D& d);
double mean_of(const Uniform01& d);

double sd_of(const Gaussian1D& d);
double sd_of(const Gamma1D& d);
double sd_of(const Uniform01& d);

// Mass of the Euclidean ball B(center, radius) under the block law,
// P(chi'^2_K(delta) <= (radius/sd)^2) with delta = ||center - mean||^2/sd^2.
double ball_mass(const IsotropicGaussianBlock& block,
                 std::span<const double> center, double radius);

// One full-conditional law for a Gibbs block. Scalar blocks use the first
// three alternatives; the theta block of the random effects model is an
// isotropic Gaussian and its lambda block is an independent gamma pair.
struct GammaPair {
  Gamma1D first;
  Gamma1D second;
};

using ScalarConditional = std::variant<Gaussian1D, Gamma1D, Uniform01>;
using BlockConditional = std::variant<Gaussian1D, Gamma1D, Uniform01,
                                      IsotropicGaussianBlock, GammaPair>;

int dimension(const BlockConditional& c);

// Draw a whole block by inverse-CDF, one uniform per coordinate, in
// coordinate order.
std::vector<double> sample_block(const BlockConditional& c, RngStream& rng);

double scalar_cdf(const ScalarConditional& c, double x);
double scalar_quantile(const ScalarConditional& c, double p);
double scalar_sd(const ScalarConditional& c);
double scalar_mean(const ScalarConditional& c);

}  // namespace cmh

#endif
