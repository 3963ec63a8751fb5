#include "core/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "core/special.hpp"

namespace cmh {

Gaussian1D::Gaussian1D(double mean_, double sd_) : mean(mean_), sd(sd_) {
  if (!(sd > 0.0)) throw std::domain_error("Gaussian1D: sd must be positive");
}

Gamma1D::Gamma1D(double shape_, double rate_) : shape(shape_), rate(rate_) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("Gamma1D: shape and rate must be positive");
  }
}

IsotropicGaussianBlock::IsotropicGaussianBlock(std::vector<double> mean_,
                                               double sd_)
    : mean(std::move(mean_)), sd(sd_) {
  if (!(sd > 0.0)) {
    throw std::domain_error("IsotropicGaussianBlock: sd must be positive");
  }
}

double cdf(const Gaussian1D& d, double x) {
  return special::normal_cdf((x - d.mean) / d.sd);
}

double cdf(const Gamma1D& d, double x) {
  if (x <= 0.0) return 0.0;
  return special::gamma_p(d.shape, d.rate * x);
}

double cdf(const Uniform01&, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x;
}

double quantile(const Gaussian1D& d, double p) {
  return d.mean + d.sd * special::normal_quantile(p);
}

double quantile(const Gamma1D& d, double p) {
  return special::gamma_p_inverse(d.shape, p) / d.rate;
}

double quantile(const Uniform01&, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("quantile: p must lie in (0,1)");
  }
  return p;
}

double sample(const Gaussian1D& d, RngStream& rng) {
  return quantile(d, rng.next_uniform());
}

double sample(const Gamma1D& d, RngStream& rng) {
  return quantile(d, rng.next_uniform());
}

double sample(const Uniform01& d, RngStream& rng) {
  return quantile(d, rng.next_uniform());
}

double mean_of(const Gaussian1D& d) { return d.mean; }
double mean_of(const Gamma1D& d) { return d.shape / d.rate; }
double mean_of(const Uniform01&) { return 0.5; }

double sd_of(const Gaussian1D& d) { return d.sd; }
double sd_of(const Gamma1D& d) { return std::sqrt(d.shape) / d.rate; }
double sd_of(const Uniform01&) { return std::sqrt(1.0 / 12.0); }

double ball_mass(const IsotropicGaussianBlock& block,
                 std::span<const double> center, double radius) {
  if (radius < 0.0) throw std::domain_error("ball_mass: radius must be >= 0");
  if (center.size() != block.mean.size()) {
    throw std::invalid_argument("ball_mass: dimension mismatch");
  }
  if (radius == 0.0) return 0.0;
  double delta = 0.0;
  for (std::size_t k = 0; k < center.size(); ++k) {
    double z = (center[k] - block.mean[k]) / block.sd;
    delta += z * z;
  }
  double t = radius / block.sd;
  return special::noncentral_chi_square_cdf(
      static_cast<double>(block.mean.size()), delta, t * t);
}

int dimension(const BlockConditional& c) {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IsotropicGaussianBlock>) {
          return static_cast<int>(d.mean.size());
        } else if constexpr (std::is_same_v<T, GammaPair>) {
          return 2;
        } else {
          return 1;
        }
      },
      c);
}

std::vector<double> sample_block(const BlockConditional& c, RngStream& rng) {
  return std::visit(
      [&rng](const auto& d) -> std::vector<double> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IsotropicGaussianBlock>) {
          std::vector<double> out(d.mean.size());
          for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = d.mean[k] + d.sd * special::normal_quantile(rng.next_uniform());
          }
          return out;
        } else if constexpr (std::is_same_v<T, GammaPair>) {
          double a = sample(d.first, rng);
          double b = sample(d.second, rng);
          return {a, b};
        } else {
          return {sample(d, rng)};
        }
      },
      c);
}

double scalar_cdf(const ScalarConditional& c, double x) {
  return std::visit([x](const auto& d) { return cdf(d, x); }, c);
}

double scalar_quantile(const ScalarConditional& c, double p) {
  return std::visit([p](const auto& d) { return quantile(d, p); }, c);
}

double scalar_sd(const ScalarConditional& c) {
  return std::visit([](const auto& d) { return sd_of(d); }, c);
}

double scalar_mean(const ScalarConditional& c) {
  return std::visit([](const auto& d) { return mean_of(d); }, c);
}

}  // namespace cmh
