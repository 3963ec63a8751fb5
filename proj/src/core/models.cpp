#include "core/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cmh {

int StateVector::total_dim() const {
  int d = 0;
  for (const auto& b : blocks) d += static_cast<int>(b.size());
  return d;
}

double squared_distance(const StateVector& a, const StateVector& b) {
  if (a.blocks.size() != b.blocks.size()) {
    throw std::invalid_argument("squared_distance: block count mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    const auto& u = a.blocks[i];
    const auto& v = b.blocks[i];
    if (u.size() != v.size()) {
      throw std::invalid_argument("squared_distance: block dimension mismatch");
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
      double d = u[k] - v[k];
      s += d * d;
    }
  }
  return s;
}

BlockConditional NormalNormalModel::conditional(int block,
                                                const StateVector& state) const {
  if (block == 0) {
    return Gaussian1D(state.blocks[1][0], 1.0);
  }
  if (block == 1) {
    return Gaussian1D(state.blocks[0][0] / 2.0, std::sqrt(0.5));
  }
  throw std::out_of_range("NormalNormalModel: invalid block index");
}

StateVector NormalNormalModel::initial_state() const {
  return StateVector{{{0.0}, {0.0}}};
}

BlockConditional UnitSquareModel::conditional(int block,
                                              const StateVector&) const {
  if (block != 0 && block != 1) {
    throw std::out_of_range("UnitSquareModel: invalid block index");
  }
  return Uniform01{};
}

StateVector UnitSquareModel::initial_state() const {
  return StateVector{{{0.5}, {0.5}}};
}

void finalize_re_dataset(REDataset& data) {
  data.K = static_cast<int>(data.y.size());
  if (data.K < 1) throw std::invalid_argument("REDataset: need K >= 1");
  data.m = static_cast<int>(data.y.front().size());
  if (data.m < 1) throw std::invalid_argument("REDataset: need m >= 1");
  data.ybar.assign(data.K, 0.0);
  data.sse = 0.0;
  for (int i = 0; i < data.K; ++i) {
    if (static_cast<int>(data.y[i].size()) != data.m) {
      throw std::invalid_argument("REDataset: unbalanced design not supported");
    }
    double s = 0.0;
    for (double v : data.y[i]) s += v;
    data.ybar[i] = s / data.m;
    for (double v : data.y[i]) {
      double d = v - data.ybar[i];
      data.sse += d * d;
    }
  }
  double g = 0.0;
  for (double v : data.ybar) g += v;
  data.grand_mean = g / data.K;
}

REDataset simulate_re_data(int K, int m, double m0, double s0, double a,
                           double b, std::uint64_t seed) {
  if (K < 1 || m < 1) throw std::invalid_argument("simulate_re_data: K, m >= 1");
  RngStream rng(mix64(seed ^ 0x8e31f2c6a7b5d309ULL));
  Gamma1D prior(a, b);
  double lambda_theta = sample(prior, rng);
  double lambda_e = sample(prior, rng);
  double mu = sample(Gaussian1D(m0, 1.0 / std::sqrt(s0)), rng);
  Gaussian1D theta_law(mu, 1.0 / std::sqrt(lambda_theta));
  REDataset data;
  data.y.resize(K);
  double err_sd = 1.0 / std::sqrt(lambda_e);
  for (int i = 0; i < K; ++i) {
    double theta_i = sample(theta_law, rng);
    data.y[i].resize(m);
    for (int j = 0; j < m; ++j) {
      data.y[i][j] = sample(Gaussian1D(theta_i, err_sd), rng);
    }
  }
  finalize_re_dataset(data);
  return data;
}

REDataset simulate_re_data_given(std::span<const double> theta, int m,
                                 double lambda_e, std::uint64_t seed) {
  RngStream rng(mix64(seed ^ 0x3c6ef372fe94f82bULL));
  REDataset data;
  data.y.resize(theta.size());
  double err_sd = 1.0 / std::sqrt(lambda_e);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    data.y[i].resize(m);
    for (int j = 0; j < m; ++j) {
      data.y[i][j] = sample(Gaussian1D(theta[i], err_sd), rng);
    }
  }
  finalize_re_dataset(data);
  return data;
}

RandomEffectsModel::RandomEffectsModel(REDataset data, REHyper hyper)
    : data_(std::move(data)), hyper_(hyper) {
  if (data_.K < 1 || data_.m < 1) {
    throw std::invalid_argument("RandomEffectsModel: invalid dataset");
  }
  if (!(hyper_.s0 > 0.0) || !(hyper_.a1 > 0.0) || !(hyper_.b1 > 0.0) ||
      !(hyper_.a2 > 0.0) || !(hyper_.b2 > 0.0)) {
    throw std::invalid_argument("RandomEffectsModel: hyperparameters must be positive");
  }
  alpha1_ = data_.K / 2.0 + hyper_.a1;
  alpha2_ = data_.K * data_.m / 2.0 + hyper_.a2;
}

int RandomEffectsModel::block_dim(int block) const {
  switch (block) {
    case 0: return data_.K;
    case 1: return 1;
    case 2: return 2;
    default: throw std::out_of_range("RandomEffectsModel: invalid block index");
  }
}

double RandomEffectsModel::beta1(const StateVector& state) const {
  const auto& theta = state.blocks[0];
  double mu = state.blocks[1][0];
  double ss = 0.0;
  for (double t : theta) {
    double d = t - mu;
    ss += d * d;
  }
  return ss / 2.0 + hyper_.b1;
}

double RandomEffectsModel::beta2(const StateVector& state) const {
  const auto& theta = state.blocks[0];
  double ss = 0.0;
  for (int i = 0; i < data_.K; ++i) {
    double d = theta[i] - data_.ybar[i];
    ss += data_.m * d * d;
  }
  return (ss + data_.sse) / 2.0 + hyper_.b2;
}

BlockConditional RandomEffectsModel::conditional(int block,
                                                 const StateVector& state) const {
  double lambda_theta = state.blocks[2][0];
  double lambda_e = state.blocks[2][1];
  if (!(lambda_theta > 0.0) || !(lambda_e > 0.0)) {
    throw std::domain_error("RandomEffectsModel: precisions must be positive");
  }
  switch (block) {
    case 0: {
      double mu = state.blocks[1][0];
      double prec = lambda_theta + data_.m * lambda_e;
      std::vector<double> mean(data_.K);
      for (int i = 0; i < data_.K; ++i) {
        mean[i] = (lambda_theta * mu + data_.m * lambda_e * data_.ybar[i]) / prec;
      }
      return IsotropicGaussianBlock(std::move(mean), 1.0 / std::sqrt(prec));
    }
    case 1: {
      const auto& theta = state.blocks[0];
      double theta_bar = 0.0;
      for (double t : theta) theta_bar += t;
      theta_bar /= data_.K;
      double prec = hyper_.s0 + data_.K * lambda_theta;
      double mean = (hyper_.s0 * hyper_.m0 + data_.K * lambda_theta * theta_bar) / prec;
      return Gaussian1D(mean, 1.0 / std::sqrt(prec));
    }
    case 2: {
      return GammaPair{Gamma1D(alpha1_, beta1(state)),
                       Gamma1D(alpha2_, beta2(state))};
    }
    default:
      throw std::out_of_range("RandomEffectsModel: invalid block index");
  }
}

StateVector RandomEffectsModel::initial_state() const {
  StateVector s;
  s.blocks = {data_.ybar, {0.0}, {1.0, 1.0}};
  return s;
}

}  // namespace cmh
