#ifndef CMH_CORE_SPECIAL_HPP
#define CMH_CORE_SPECIAL_HPP

// Scalar special functions backing the exact CDF/quantile/mass computations.

namespace cmh::special {

// Standard normal CDF, evaluated through erfc for accurate tails.
double normal_cdf(double z);

// Standard normal quantile for p in (0,1). Rational initial estimate
// polished by Halley iteration on the CDF residual.
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x). Series for x < a+1,
// continued fraction otherwise.
double gamma_p(double a, double x);

// Inverse of gamma_p in x for fixed a: smallest x with P(a,x) = p.
// Wilson-Hilferty start, Newton with bracketing safeguard.
double gamma_p_inverse(double a, double p);

// Central chi-square CDF with k degrees of freedom.
double chi_square_cdf(double k, double x);

// Noncentral chi-square CDF, k degrees of freedom, noncentrality delta.
// Poisson-weighted series of central CDFs, truncated when the remaining
// Poisson weight is below tail_tol.
double noncentral_chi_square_cdf(double k, double delta, double x,
                                 double tail_tol = 1e-12);

}  // namespace cmh::special

#endif
