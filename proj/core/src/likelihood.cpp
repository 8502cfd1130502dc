#include "pgrestore/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pgr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of a^n exp(-(b - alpha n)^2 / (2 sigma^2)) / n!
double log_term(long n, double log_a, double b, double alpha, double sigma) {
    double r = b - alpha * static_cast<double>(n);
    return static_cast<double>(n) * log_a - r * r / (2.0 * sigma * sigma) -
           std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

double log_erfc(double z) {
    if (z < 25.0) return std::log(std::erfc(z));
    // asymptotic expansion; erfc underflows around z ~ 26.6
    double z2 = z * z;
    return -z2 - std::log(z) - 0.5 * std::log(std::numbers::pi) +
           std::log1p(-0.5 / z2 + 0.75 / (z2 * z2));
}

LikelihoodKernelOut s_delta(double a, double b, double delta, const NoiseModel& model) {
    if (a < 0.0) throw std::domain_error("s_delta: a must be nonnegative");
    if (delta <= 0.0) throw std::invalid_argument("s_delta: delta must be positive");
    const double sigma = model.sigma, alpha = model.alpha;

    LikelihoodKernelOut out;
    const double t_floor = -b * b / (2.0 * sigma * sigma);
    if (a == 0.0) {
        out.log_s = t_floor;
        out.s_val = std::exp(t_floor);
        return out;
    }

    const double log_a = std::log(a);
    auto t = [&](long n) { return log_term(n, log_a, b, alpha, sigma); };

    // The discrete log-term is unimodal in n, so a hill climb from the
    // Poisson mode is exact.
    long n_star = std::max<long>(0, static_cast<long>(std::floor(a)));
    while (t(n_star + 1) > t(n_star)) ++n_star;
    while (n_star > 0 && t(n_star - 1) > t(n_star)) --n_star;

    const double half_width = delta * sigma / alpha;
    const long lo = std::max<long>(
        1, static_cast<long>(std::floor(static_cast<double>(n_star) - half_width)));
    const long hi =
        static_cast<long>(std::floor(static_cast<double>(n_star) + half_width));

    const double t_max = std::max(t_floor, t(n_star));
    double sum = std::exp(t_floor - t_max);
    for (long n = lo; n <= hi; ++n) sum += std::exp(t(n) - t_max);

    out.log_s = t_max + std::log(sum);
    out.s_val = std::exp(out.log_s);
    out.n_star = n_star;
    out.trunc_lo = (n_star == 0) ? 0 : lo;
    out.trunc_hi = std::max(hi, n_star);
    return out;
}

double grad1_delta(double m, double m_prime, double delta, const NoiseModel& model) {
    double l0 = s_delta(m, m_prime, delta, model).log_s;
    double l1 = s_delta(m, m_prime - 1.0, delta, model).log_s;
    return 1.0 - std::exp(l1 - l0);
}

double grad2_delta(double m, double m_prime, double delta, const NoiseModel& model) {
    double l0 = s_delta(m, m_prime, delta, model).log_s;
    double l1 = s_delta(m, m_prime - 1.0, delta, model).log_s;
    double l2 = s_delta(m, m_prime - 2.0, delta, model).log_s;
    double r1 = std::exp(l1 - l0);
    double r2 = std::exp(l2 - l0);
    return r1 * r1 - r2;
}

double zeta_delta(double m, double m_prime, double m_bar, double beta, double delta,
                  const NoiseModel& model) {
    return grad1_delta(m, m_prime, delta, model) + beta * (m - m_bar);
}

double eta_delta(double m, double m_prime, double m_bar, double beta, double delta,
                 const NoiseModel& model, const Bounds& bounds) {
    double z = zeta_delta(m, m_prime, m_bar, beta, delta, model);
    if (m <= bounds.l) return std::min(z, 0.0);
    if (m >= bounds.u) return std::max(z, 0.0);
    return z;
}

double error_bound(double m_prime, double delta, const Bounds& bounds,
                   const NoiseModel& model) {
    if (delta <= 0.0) throw std::invalid_argument("error_bound: delta must be positive");
    const double sigma = model.sigma;
    double max_sq = std::max({m_prime * m_prime, (m_prime - 1.0) * (m_prime - 1.0),
                              (m_prime - 2.0) * (m_prime - 2.0)});
    double log_bbar = std::log(2.0) + 0.5 * std::log(2.0 * std::numbers::pi) +
                      std::log(sigma) + 2.0 * bounds.u + max_sq / (sigma * sigma);
    double log_bound = log_bbar + log_erfc(delta / std::numbers::sqrt2);
    if (log_bound > std::log(std::numeric_limits<double>::max())) return kInf;
    return std::exp(log_bound);
}

double vector_error_bound(const Image& m_prime, double delta, const Bounds& bounds,
                          const NoiseModel& model) {
    if (delta <= 0.0)
        throw std::invalid_argument("vector_error_bound: delta must be positive");
    const double sigma = model.sigma;
    double max_sq = 0.0;
    for (double v : m_prime.data)
        max_sq = std::max({max_sq, v * v, (v - 1.0) * (v - 1.0), (v - 2.0) * (v - 2.0)});
    double log_bbar = std::log(2.0) + 0.5 * std::log(2.0 * std::numbers::pi) +
                      std::log(sigma) + 2.0 * bounds.u + max_sq / (sigma * sigma);
    double log_bound = log_bbar + log_erfc(delta / std::numbers::sqrt2) +
                       0.5 * std::log(static_cast<double>(m_prime.size()));
    if (log_bound > std::log(std::numeric_limits<double>::max())) return kInf;
    return std::exp(log_bound);
}

double neg_log_likelihood(const Image& m, const Image& m_prime, double delta,
                          const NoiseModel& model, const Bounds& bounds) {
    require_same_shape(m, m_prime, "neg_log_likelihood");
    const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi * model.sigma * model.sigma);
    double total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double mi = m.data[i];
        if (mi < bounds.l || mi > bounds.u) return kInf;
        total += mi - s_delta(mi, m_prime.data[i], delta, model).log_s + log_norm;
    }
    return total;
}

}  // namespace pgr
