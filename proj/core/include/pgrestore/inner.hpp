#ifndef PGRESTORE_INNER_HPP
#define PGRESTORE_INNER_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pgrestore/image.hpp"
#include "pgrestore/likelihood.hpp"
#include "pgrestore/noise.hpp"

namespace pgr {

/// Schedules for the damped-Newton iteration: step alpha_l = C / (l+1),
/// scaling clamp delta_l = 1 + C2 / (l+1)^2, truncation width
/// Delta_l = floor(C_delta * l + 1).
struct NewtonSchedule {
    double C = 1.0;
    double C2 = 1.0;
    double C_delta = 0.25;
    int max_inner = 500;

    double step(int l) const { return C / (l + 1); }
    double clamp_delta(int l) const { return 1.0 + C2 / double((l + 1)) / double(l + 1); }
    double trunc_width(int l) const { return std::max(1.0, std::floor(C_delta * l + 1.0)); }

    void validate() const {
        if (C <= 0 || C2 <= 0 || C_delta <= 0 || max_inner < 1)
            throw std::invalid_argument("NewtonSchedule: constants must be positive");
    }
};

enum class InnerCondition { None, Cond1, Cond2, MaxIter };

const char* to_string(InnerCondition c);

/// Everything needed to verify that an inner solve terminated legitimately.
struct InnerCertificate {
    double eta_norm = 0.0;    // ||eta_Delta||_2 at the accepted iterate
    double approx_err = 0.0;  // sqrt(N) Bbar erfc(Delta/sqrt(2)) at that iterate
    double cond1_lhs = 0.0;   // eta_norm + approx_err, compared against theta_k
    double cond2_lhs = 0.0;   // a_{k,l} / (c_k + ||Hg - m_l||^2), compared against rho
    InnerCondition condition_met = InnerCondition::None;
    int iterations = 0;
    double delta_used = 0.0;
    double theta_k = 0.0;  // thresholds in force when the certificate was issued
    double rho = 0.0;

    bool certified() const {
        return condition_met == InnerCondition::Cond1 ||
               condition_met == InnerCondition::Cond2;
    }
};

/// Dual accumulator carried across outer iterations.
struct InnerState {
    Image w_delta;                  // -beta * sum of accepted eta_Delta
    double err_accum = 0.0;         // 2 beta * sum of ||e_i|| bounds
    std::vector<double> delta_log;  // Delta at each accepted iterate, for replay

    explicit InnerState(int width = 1, int height = 1) : w_delta(width, height) {}
};

/// Outer-iteration context the termination conditions depend on.
struct TerminationInputs {
    double theta_k = 1.0;
    double rho = 0.99;
    double c_k = 0.0;
    Image Hg;  // Hg^{(k+1)}, fixed during the inner solve
};

InnerCertificate check_termination(const Image& iterate, const Image& eta_delta_vec,
                                   double delta_used, const Image& m_prime,
                                   const Bounds& bounds, const NoiseModel& model,
                                   const InnerState& state, const TerminationInputs& term);

void update_dual_accumulator(InnerState& state, const Image& eta_delta_accepted,
                             double beta, double e_bound, double delta_used);

// Conditional mean of the latent photon count given the measurement:
// q = sum_p p w_p / sum_p w_p with w_p = m^p exp(-((m'-alpha p)/(sqrt(2) sigma))^2)/p!,
// truncated to the same window as s_delta.
double conditional_mean_q(double m_l, double m_prime, const NoiseModel& model,
                          double delta);

// Projected damped-Newton iteration on the extended likelihood Lagrangian.
// Returns the first iterate whose certificate satisfies Condition 1 or 2,
// or the last iterate flagged MaxIter.
std::pair<Image, InnerCertificate> newton_inner(
    const Image& m0, const Image& m_prime, const Image& m_bar, double beta,
    const Bounds& bounds, const NoiseModel& model, const NewtonSchedule& sched,
    const InnerState& state, const TerminationInputs& term);

// Per-pixel MM/EM iteration; iterates stay strictly positive. Certificates
// are the same as for the Newton path.
std::pair<Image, InnerCertificate> mm_inner(
    const Image& m0, const Image& m_prime, const Image& m_bar, double beta,
    const Bounds& bounds, const NoiseModel& model, const NewtonSchedule& sched,
    const InnerState& state, const TerminationInputs& term);

}  // namespace pgr

#endif
