#include "core/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace cmh {

namespace {

Estimate mean_with_se(std::span<const double> values) {
  std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("need at least two replicates");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    double d = v - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace

double msjd(std::span<const StateVector> chain) {
  if (chain.size() < 2) throw std::invalid_argument("msjd: chain length must be >= 2");
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    s += squared_distance(chain[j + 1], chain[j]);
  }
  return s / static_cast<double>(chain.size() - 1);
}

Estimate esjd(std::span<const ChainSummary> summaries) {
  std::vector<double> values;
  values.reserve(summaries.size());
  for (const auto& s : summaries) values.push_back(s.msjd);
  return mean_with_se(values);
}

Estimate mse(std::span<const double> beta_hats, double beta_ref) {
  std::vector<double> sq;
  sq.reserve(beta_hats.size());
  for (double b : beta_hats) {
    double d = b - beta_ref;
    sq.push_back(d * d);
  }
  return mean_with_se(sq);
}

Estimate ratio_with_se(const Estimate& num, const Estimate& den) {
  if (!(den.value > 0.0)) {
    throw std::domain_error("ratio_with_se: denominator must be positive");
  }
  double ratio = num.value / den.value;
  // Equivalent to ratio * sqrt((se_n/n)^2 + (se_d/d)^2), stable at num = 0.
  double a = num.se / den.value;
  double b = ratio * den.se / den.value;
  return {ratio, std::sqrt(a * a + b * b)};
}

double acceptance_rate(std::span<const KernelStepRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("acceptance_rate: no records");
  }
  long accepted = 0;
  for (const auto& r : records) {
    if (r.accepted) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(records.size());
}

}  // namespace cmh
