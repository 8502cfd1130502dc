#include "pgrestore/inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pgr {

const char* to_string(InnerCondition c) {
    switch (c) {
        case InnerCondition::None: return "None";
        case InnerCondition::Cond1: return "Cond1";
        case InnerCondition::Cond2: return "Cond2";
        case InnerCondition::MaxIter: return "MaxIter";
    }
    return "?";
}

InnerCertificate check_termination(const Image& iterate, const Image& eta_delta_vec,
                                   double delta_used, const Image& m_prime,
                                   const Bounds& bounds, const NoiseModel& model,
                                   const InnerState& state, const TerminationInputs& term) {
    require_same_shape(iterate, eta_delta_vec, "check_termination");

    InnerCertificate cert;
    cert.delta_used = delta_used;
    cert.theta_k = term.theta_k;
    cert.rho = term.rho;
    cert.eta_norm = norm2(eta_delta_vec);
    cert.approx_err = vector_error_bound(m_prime, delta_used, bounds, model);

    cert.cond1_lhs = cert.eta_norm + cert.approx_err;

    Image diff = state.w_delta - iterate;
    double diff_norm = norm2(diff);
    double e_l = cert.approx_err;
    double a_kl = 2.0 * std::abs(dot(diff, eta_delta_vec)) +
                  (cert.eta_norm + e_l) * (cert.eta_norm + e_l) +
                  2.0 * diff_norm * e_l + state.err_accum * (cert.eta_norm + e_l);
    double denom = term.c_k + norm2sq(term.Hg - iterate);
    cert.cond2_lhs = denom > 0.0 ? a_kl / denom
                                 : std::numeric_limits<double>::infinity();

    if (cert.cond1_lhs < term.theta_k) {
        cert.condition_met = InnerCondition::Cond1;
    } else if (cert.cond2_lhs < term.rho) {
        cert.condition_met = InnerCondition::Cond2;
    }
    return cert;
}

void update_dual_accumulator(InnerState& state, const Image& eta_delta_accepted,
                             double beta, double e_bound, double delta_used) {
    require_same_shape(state.w_delta, eta_delta_accepted, "update_dual_accumulator");
    for (std::size_t i = 0; i < state.w_delta.size(); ++i)
        state.w_delta.data[i] -= beta * eta_delta_accepted.data[i];
    state.err_accum += 2.0 * beta * e_bound;
    state.delta_log.push_back(delta_used);
}

double conditional_mean_q(double m_l, double m_prime, const NoiseModel& model,
                          double delta) {
    if (m_l <= 0.0) throw std::domain_error("conditional_mean_q: m must be positive");
    const double sigma = model.sigma, alpha = model.alpha;
    const double log_m = std::log(m_l);
    auto t = [&](long p) {
        double r = m_prime - alpha * static_cast<double>(p);
        return static_cast<double>(p) * log_m - r * r / (2.0 * sigma * sigma) -
               std::lgamma(static_cast<double>(p) + 1.0);
    };

    long p_star = std::max<long>(0, static_cast<long>(std::floor(m_l)));
    while (t(p_star + 1) > t(p_star)) ++p_star;
    while (p_star > 0 && t(p_star - 1) > t(p_star)) --p_star;

    const double half_width = delta * sigma / alpha;
    const long lo = std::max<long>(
        0, static_cast<long>(std::floor(static_cast<double>(p_star) - half_width)));
    const long hi =
        static_cast<long>(std::floor(static_cast<double>(p_star) + half_width));

    const double t_max = t(p_star);
    double wsum = 0.0, psum = 0.0;
    for (long p = lo; p <= hi; ++p) {
        double w = std::exp(t(p) - t_max);
        wsum += w;
        psum += static_cast<double>(p) * w;
    }
    return psum / wsum;
}

std::pair<Image, InnerCertificate> newton_inner(
    const Image& m0, const Image& m_prime, const Image& m_bar, double beta,
    const Bounds& bounds, const NoiseModel& model, const NewtonSchedule& sched,
    const InnerState& state, const TerminationInputs& term) {
    sched.validate();
    if (beta <= 0.0) throw std::invalid_argument("newton_inner: beta must be positive");
    require_same_shape(m0, m_prime, "newton_inner");
    require_same_shape(m0, m_bar, "newton_inner");

    Image m = m0;
    const std::size_t n = m.size();
    Image eta(m.width, m.height);
    InnerCertificate cert;

    for (int l = 0; l < sched.max_inner; ++l) {
        const double delta_l = sched.trunc_width(l);
        const double clamp_lo = 1.0 / std::sqrt(sched.clamp_delta(l));
        const double clamp_hi = std::sqrt(sched.clamp_delta(l));
        const double alpha_l = sched.step(l);

        Image m_next(m.width, m.height);
        for (std::size_t i = 0; i < n; ++i) {
            double g1 = grad1_delta(m.data[i], m_prime.data[i], delta_l, model);
            double z = g1 + beta * (m.data[i] - m_bar.data[i]);
            // bound-aware projection of the subgradient
            double e = z;
            if (m.data[i] <= bounds.l) e = std::min(z, 0.0);
            else if (m.data[i] >= bounds.u) e = std::max(z, 0.0);
            eta.data[i] = e;

            double g2 = grad2_delta(m.data[i], m_prime.data[i], delta_l, model);
            double scale = std::clamp(g2 + beta, clamp_lo, clamp_hi);
            m_next.data[i] = std::clamp(m.data[i] - alpha_l * z / scale, bounds.l, bounds.u);
        }

        cert = check_termination(m, eta, delta_l, m_prime, bounds, model, state, term);
        cert.iterations = l + 1;
        if (cert.certified()) return {m, cert};

        m = std::move(m_next);
    }

    // Re-certify at the final iterate so the returned pair is consistent.
    const double delta_f = sched.trunc_width(sched.max_inner - 1);
    for (std::size_t i = 0; i < n; ++i)
        eta.data[i] = eta_delta(m.data[i], m_prime.data[i], m_bar.data[i], beta, delta_f,
                                model, bounds);
    cert = check_termination(m, eta, delta_f, m_prime, bounds, model, state, term);
    cert.iterations = sched.max_inner;
    if (!cert.certified()) cert.condition_met = InnerCondition::MaxIter;
    return {m, cert};
}

std::pair<Image, InnerCertificate> mm_inner(
    const Image& m0, const Image& m_prime, const Image& m_bar, double beta,
    const Bounds& bounds, const NoiseModel& model, const NewtonSchedule& sched,
    const InnerState& state, const TerminationInputs& term) {
    sched.validate();
    if (beta <= 0.0) throw std::invalid_argument("mm_inner: beta must be positive");
    require_same_shape(m0, m_prime, "mm_inner");
    require_same_shape(m0, m_bar, "mm_inner");

    constexpr double kFloor = 1e-8;
    Image m = m0;
    for (double& v : m.data) {
        if (v <= 0.0) v = kFloor;
        if (!(v > 0.0)) throw std::invalid_argument("mm_inner: start must be positive");
    }

    const std::size_t n = m.size();
    Image eta(m.width, m.height);
    InnerCertificate cert;

    auto q_of = [&](double mi, double mpi, double delta_l) {
        double q = conditional_mean_q(mi, mpi, model, delta_l);
        if (!std::isfinite(q)) q = conditional_mean_q(mi, mpi, model, 4.0 * delta_l);
        if (!std::isfinite(q))
            throw std::runtime_error("mm_inner: conditional mean evaluation failed");
        return q;
    };

    for (int l = 0; l < sched.max_inner; ++l) {
        const double delta_l = sched.trunc_width(l);

        // Certificate at the current iterate, clamped into [l, u] for the
        // bound-aware projection (MM itself runs unconstrained but positive).
        Image m_proj(m.width, m.height);
        for (std::size_t i = 0; i < n; ++i)
            m_proj.data[i] = std::clamp(m.data[i], bounds.l, bounds.u);
        for (std::size_t i = 0; i < n; ++i)
            eta.data[i] = eta_delta(m_proj.data[i], m_prime.data[i], m_bar.data[i], beta,
                                    delta_l, model, bounds);
        cert = check_termination(m_proj, eta, delta_l, m_prime, bounds, model, state, term);
        cert.iterations = l + 1;
        if (cert.certified()) return {m_proj, cert};

        for (std::size_t i = 0; i < n; ++i) {
            double q = q_of(m.data[i], m_prime.data[i], delta_l);
            double bm = beta * m_bar.data[i] - 1.0;
            double next = (bm + std::sqrt(bm * bm + 4.0 * q * beta)) / (2.0 * beta);
            m.data[i] = std::max(next, kFloor);
        }
    }

    Image m_proj(m.width, m.height);
    const double delta_f = sched.trunc_width(sched.max_inner - 1);
    for (std::size_t i = 0; i < n; ++i)
        m_proj.data[i] = std::clamp(m.data[i], bounds.l, bounds.u);
    for (std::size_t i = 0; i < n; ++i)
        eta.data[i] = eta_delta(m_proj.data[i], m_prime.data[i], m_bar.data[i], beta,
                                delta_f, model, bounds);
    cert = check_termination(m_proj, eta, delta_f, m_prime, bounds, model, state, term);
    cert.iterations = sched.max_inner;
    if (!cert.certified()) cert.condition_met = InnerCondition::MaxIter;
    return {m_proj, cert};
}

}  // namespace pgr
