#ifndef CMH_CORE_MODELS_HPP
#define CMH_CORE_MODELS_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/distributions.hpp"

namespace cmh {

// Ordered blocks of real coordinates, one block per Gibbs component.
struct StateVector {
  std::vector<std::vector<double>> blocks;

  int total_dim() const;
};

// Squared Euclidean distance between full states (all blocks concatenated).
double squared_distance(const StateVector& a, const StateVector& b);

class Model {
 public:
  virtual ~Model() = default;
  virtual std::string name() const = 0;
  virtual int block_count() const = 0;
  virtual int block_dim(int block) const = 0;
  virtual BlockConditional conditional(int block,
                                       const StateVector& state) const = 0;
  virtual StateVector initial_state() const = 0;
  virtual std::vector<double> scan_probabilities() const = 0;
  // Functional f(X) whose expectation beta is being estimated.
  virtual double functional(const StateVector& state) const = 0;
};

// Bivariate normal, mean 0, covariance [[2,1],[1,1]]. Blocks (X1), (X2).
// f(X) = X1 with beta = 0.
class NormalNormalModel final : public Model {
 public:
  std::string name() const override { return "normal-normal"; }
  int block_count() const override { return 2; }
  int block_dim(int) const override { return 1; }
  BlockConditional conditional(int block,
                               const StateVector& state) const override;
  StateVector initial_state() const override;  // (0, 0)
  std::vector<double> scan_probabilities() const override { return {0.5, 0.5}; }
  double functional(const StateVector& state) const override {
    return state.blocks[0][0];
  }
};

// Uniform on the unit square; both conditionals are Uniform01.
class UnitSquareModel final : public Model {
 public:
  std::string name() const override { return "unit-square"; }
  int block_count() const override { return 2; }
  int block_dim(int) const override { return 1; }
  BlockConditional conditional(int block,
                               const StateVector& state) const override;
  StateVector initial_state() const override;  // (0.5, 0.5)
  std::vector<double> scan_probabilities() const override { return {0.5, 0.5}; }
  double functional(const StateVector& state) const override {
    return state.blocks[0][0];
  }
};

// One-way random effects data: y_{ij}, j-th observation on subject i.
struct REDataset {
  int K = 0;  // subjects
  int m = 0;  // observations per subject
  std::vector<std::vector<double>> y;  // y[i][j]
  std::vector<double> ybar;            // per-subject means
  double sse = 0.0;                    // within-subject sum of squares
  double grand_mean = 0.0;             // mean of the ybar
};

struct REHyper {
  double m0 = 0.0;
  double s0 = 1.0;
  double a1 = 30.0;
  double b1 = 30.0;
  double a2 = 30.0;
  double b2 = 30.0;
};

// Derived statistics recomputed from the raw observations.
void finalize_re_dataset(REDataset& data);

// Draw lambda_theta, lambda_e ~ Gamma(a,b), mu ~ N(m0, 1/s0),
// theta_i ~ N(mu, 1/lambda_theta), y_{ij} ~ N(theta_i, 1/lambda_e).
REDataset simulate_re_data(int K, int m, double m0, double s0, double a,
                           double b, std::uint64_t seed);

// Variant with the latent subject means and error precision pinned, used to
// audit the within-group variance of the generator.
REDataset simulate_re_data_given(std::span<const double> theta, int m,
                                 double lambda_e, std::uint64_t seed);

// Posterior of the Bayesian random effects model. Blocks: theta (dim K),
// mu (dim 1), lambda = (lambda_theta, lambda_e) (dim 2). f(X) = mu.
class RandomEffectsModel final : public Model {
 public:
  RandomEffectsModel(REDataset data, REHyper hyper);

  std::string name() const override { return "random-effects"; }
  int block_count() const override { return 3; }
  int block_dim(int block) const override;
  BlockConditional conditional(int block,
                               const StateVector& state) const override;
  // theta = ybar, mu = 0, lambda = (1, 1).
  StateVector initial_state() const override;
  std::vector<double> scan_probabilities() const override {
    return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  }
  double functional(const StateVector& state) const override {
    return state.blocks[1][0];
  }

  const REDataset& data() const { return data_; }
  const REHyper& hyper() const { return hyper_; }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  // beta_1 = sum (theta_i - mu)^2 / 2 + b1
  double beta1(const StateVector& state) const;
  // beta_2 = (sum m (theta_i - ybar_i)^2 + SSE) / 2 + b2
  double beta2(const StateVector& state) const;

 private:
  REDataset data_;
  REHyper hyper_;
  double alpha1_;
  double alpha2_;
};

}  // namespace cmh

#endif
