#ifndef PGRESTORE_LIKELIHOOD_HPP
#define PGRESTORE_LIKELIHOOD_HPP

#include "pgrestore/image.hpp"
#include "pgrestore/noise.hpp"

namespace pgr {

/// Result of one truncated-series kernel evaluation. The series is the sum
/// over photon counts n of a^n exp(-(b - alpha n)^2 / (2 sigma^2)) / n!,
/// truncated to a window of half-width delta*sigma/alpha around the
/// dominant index n_star, plus the n = 0 floor term which is always kept.
struct LikelihoodKernelOut {
    double s_val = 0.0;    // truncated sum (may underflow for extreme b; use log_s)
    double log_s = 0.0;    // log of the truncated sum, always finite
    long n_star = 0;       // index of the dominant term
    long trunc_lo = 0;     // summation window, inclusive
    long trunc_hi = 0;
};

// Truncated series s_Delta(a, b). Terms are accumulated in log space
// relative to the dominant term, so a^n / n! never overflows.
LikelihoodKernelOut s_delta(double a, double b, double delta, const NoiseModel& model);

// Approximate first derivative of the per-pixel negative log-likelihood:
// gamma_1,Delta = 1 - s_Delta(m, m'-1) / s_Delta(m, m').
double grad1_delta(double m, double m_prime, double delta, const NoiseModel& model);

// Approximate diagonal Hessian entry:
// gamma_2,Delta = [s_Delta(m,m'-1)^2 - s_Delta(m,m') s_Delta(m,m'-2)] / s_Delta(m,m')^2.
double grad2_delta(double m, double m_prime, double delta, const NoiseModel& model);

// Epsilon-subgradient of the proximal Lagrangian:
// zeta_Delta = gamma_1,Delta(m, m') + beta (m - m_bar).
double zeta_delta(double m, double m_prime, double m_bar, double beta, double delta,
                  const NoiseModel& model);

// zeta_Delta pushed through the bound-aware projection: at m = l the
// positive part is removed, at m = u the negative part, interior unchanged.
double eta_delta(double m, double m_prime, double m_bar, double beta, double delta,
                 const NoiseModel& model, const Bounds& bounds);

// Certified per-pixel bound on |gamma_1 - gamma_1,Delta|:
// Bbar * erfc(delta / sqrt(2)) with
// Bbar = 2 sqrt(2 pi) sigma e^{2u} exp(max((m')^2, (m'-1)^2, (m'-2)^2) / sigma^2).
// Evaluated in log space; returns +inf if the bound exceeds double range.
double error_bound(double m_prime, double delta, const Bounds& bounds,
                   const NoiseModel& model);

// sqrt(N) * max_i Bbar(m'_i) * erfc(delta / sqrt(2)) — the vector form used
// by the inner-solve certificates.
double vector_error_bound(const Image& m_prime, double delta, const Bounds& bounds,
                          const NoiseModel& model);

// Extended negative log-likelihood: sum_i (m_i - log s_Delta(m_i, m'_i)
// + log sqrt(2 pi sigma^2)) if every m_i is in [l, u], else +inf.
double neg_log_likelihood(const Image& m, const Image& m_prime, double delta,
                          const NoiseModel& model, const Bounds& bounds);

// log(erfc(z)) without underflow for large z.
double log_erfc(double z);

}  // namespace pgr

#endif
