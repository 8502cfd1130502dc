#include "pgrestore/admm.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pgr {

const char* to_string(InnerSolver s) {
    return s == InnerSolver::Newton ? "Newton" : "MM";
}

void AdmmConfig::validate() const {
    if (beta <= 0.0) throw std::invalid_argument("AdmmConfig: beta must be positive");
    if (lambda <= 0.0) throw std::invalid_argument("AdmmConfig: lambda must be positive");
    if (q != 1 && q != 2) throw std::invalid_argument("AdmmConfig: q must be 1 or 2");
    if (rho <= 0.0 || rho >= 1.0)
        throw std::invalid_argument("AdmmConfig: rho must be in (0,1)");
    if (theta0 <= 0.0) throw std::invalid_argument("AdmmConfig: theta0 must be positive");
    if (stop_tol <= 0.0) throw std::invalid_argument("AdmmConfig: stop_tol must be positive");
    if (max_outer < 1) throw std::invalid_argument("AdmmConfig: max_outer must be >= 1");
    newton_sched.validate();
    bounds.validate();
    model.validate();
}

double hessian_schatten(const HessianField& d, int q) {
    double total = 0.0;
    for (std::size_t i = 0; i < d.pixels(); ++i) {
        double lp, lm;
        hessian_eigenvalues(d.comps[0][i], d.comps[1][i], d.comps[2][i], lp, lm);
        if (q == 1)
            total += std::abs(lp) + std::abs(lm);
        else
            total += std::sqrt(lp * lp + lm * lm);
    }
    return total;
}

double objective(const Image& g, const Image& m_prime, const CirculantOperator& H,
                 const DerivativeStack& D, const AdmmConfig& cfg) {
    for (double v : g.data)
        if (v < 0.0 || v > cfg.bounds.u_prime)
            return std::numeric_limits<double>::infinity();
    Image Hg = apply(H, g);
    double fm = neg_log_likelihood(Hg, m_prime, 40.0, cfg.model, cfg.bounds);
    if (!std::isfinite(fm)) return fm;
    return fm + cfg.lambda * hessian_schatten(apply_derivatives(D, g), cfg.q);
}

Bounds derive_bounds(const CirculantOperator& H, double u_prime) {
    if (u_prime <= 0.0) throw std::invalid_argument("derive_bounds: u_prime must be positive");
    Bounds b;
    b.l = 0.0;
    b.u = operator_l1_norm(H) * u_prime;
    b.u_prime = u_prime;
    return b;
}

namespace {

double field_norm2sq(const HessianField& a, const HessianField& b) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.pixels(); ++i) {
            double r = a.comps[c][i] - b.comps[c][i];
            s += r * r;
        }
    return s;
}

bool field_finite(const HessianField& f) {
    for (int c = 0; c < 3; ++c)
        for (double v : f.comps[c])
            if (!std::isfinite(v)) return false;
    return true;
}

double image_mae(const Image& a, const Image& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.data[i] - b.data[i]);
    return s / static_cast<double>(a.size());
}

}  // namespace

AdmmResult admm_restore(const Image& m_prime, const CirculantOperator& H,
                        const AdmmConfig& cfg, const Image* truth) {
    cfg.validate();
    if (!all_finite(m_prime))
        throw std::invalid_argument("admm_restore: measurement contains non-finite values");
    if (!H.matches(m_prime))
        throw std::invalid_argument("admm_restore: PSF shape mismatch");
    if (truth) require_same_shape(*truth, m_prime, "admm_restore(truth)");

    const int w = m_prime.width, h = m_prime.height;
    const double beta = cfg.beta;

    DerivativeStack D = make_derivative_stack(w, h);
    QuadSolveContext ctx = make_quad_solve_context(H, D);

    Image g(w, h), m(w, h), b(w, h);
    Image m_hat(w, h), b_hat(w, h);
    HessianField d(w, h), d_hat(w, h);
    InnerState inner(w, h);

    AdmmResult result;
    result.trace.reserve(cfg.max_outer);

    Image g_prev(w, h);
    int uncertified_streak = 0;
    const auto t0 = std::chrono::steady_clock::now();

    for (int k = 0; k < cfg.max_outer; ++k) {
        // Step 1: quadratic solve for g
        g = solve_g(ctx, m, m_hat, d, d_hat, b, b_hat, beta);
        Image Hg = apply(H, g);
        HessianField Dg = apply_derivatives(D, g);

        // Step 2a: quadratic constraint error of the other two splits
        double c_k = field_norm2sq(Dg, d) + norm2sq(g - b);

        // Step 2b: inexact proximal solve of the data term
        Image m_bar = Hg - (1.0 / beta) * m_hat;
        TerminationInputs term;
        term.theta_k = cfg.theta0 / double((k + 1)) / double(k + 1);
        term.rho = cfg.rho;
        term.c_k = c_k;
        term.Hg = Hg;

        Image m0(w, h);
        for (std::size_t i = 0; i < m0.size(); ++i)
            m0.data[i] = std::clamp(m.data[i], cfg.bounds.l, cfg.bounds.u);

        auto [m_new, cert] =
            cfg.inner_solver == InnerSolver::Newton
                ? newton_inner(m0, m_prime, m_bar, beta, cfg.bounds, cfg.model,
                               cfg.newton_sched, inner, term)
                : mm_inner(m0, m_prime, m_bar, beta, cfg.bounds, cfg.model,
                           cfg.newton_sched, inner, term);
        m = std::move(m_new);
        result.total_grad_evals += cert.iterations;

        if (!cert.certified()) {
            if (++uncertified_streak >= 3)
                throw ConvergenceError(
                    "admm_restore: inner solver uncertified for 3 consecutive outer "
                    "iterations",
                    cert);
        } else {
            uncertified_streak = 0;
        }

        // Step 2c: dual accumulator update with the accepted eta_Delta
        Image eta(w, h);
        for (std::size_t i = 0; i < eta.size(); ++i)
            eta.data[i] = eta_delta(m.data[i], m_prime.data[i], m_bar.data[i], beta,
                                    cert.delta_used, cfg.model, cfg.bounds);
        update_dual_accumulator(inner, eta, beta, cert.approx_err, cert.delta_used);

        // Step 3: Hessian-Schatten shrinkage
        HessianField d_bar(w, h);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < d_bar.pixels(); ++i)
                d_bar.comps[c][i] = Dg.comps[c][i] - d_hat.comps[c][i] / beta;
        d = shrink_hessian(d_bar, cfg.lambda / beta, cfg.q);

        // Step 4: bound clip
        b = clip_b(g - (1.0 / beta) * b_hat, cfg.bounds);

        // Step 5: multiplier updates
        for (std::size_t i = 0; i < m_hat.size(); ++i)
            m_hat.data[i] -= beta * (Hg.data[i] - m.data[i]);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < d_hat.pixels(); ++i)
                d_hat.comps[c][i] -= beta * (Dg.comps[c][i] - d.comps[c][i]);
        for (std::size_t i = 0; i < b_hat.size(); ++i)
            b_hat.data[i] -= beta * (g.data[i] - b.data[i]);

        if (!all_finite(g) || !all_finite(m) || !field_finite(d) || !all_finite(b))
            throw ConvergenceError("admm_restore: NaN detected in iterate", cert);

        IterationRecord rec;
        rec.k = k;
        // g drifts slightly outside [0, u'] until convergence; track the cost
        // of its feasible projection so the trace stays finite.
        rec.cost = objective(clip_b(g, cfg.bounds), m_prime, H, D, cfg);
        rec.residual_m = norm2(Hg - m);
        rec.residual_d = std::sqrt(field_norm2sq(Dg, d));
        rec.residual_b = norm2(g - b);
        rec.c_k = c_k;
        rec.inner_iters = cert.iterations;
        rec.inner_condition = cert.condition_met;
        if (truth) rec.mae = image_mae(g, *truth);
        rec.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.grad_evals = result.total_grad_evals;
        rec.cert = cert;
        result.trace.push_back(std::move(rec));

        double rel = norm2(g - g_prev) / std::max(norm2(g), 1e-300);
        if (k > 0 && rel < cfg.stop_tol) break;
        g_prev = g;
    }

    result.g = std::move(g);
    return result;
}

void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace,
                     const std::vector<std::string>& header_comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    for (const auto& line : header_comments) out << "# " << line << '\n';
    out << "k,cost,residual_m,residual_d,residual_b,c_k,inner_iters,inner_condition,mae,"
           "elapsed_s\n";
    out.precision(9);
    for (const auto& r : trace) {
        out << r.k << ',' << r.cost << ',' << r.residual_m << ',' << r.residual_d << ','
            << r.residual_b << ',' << r.c_k << ',' << r.inner_iters << ','
            << to_string(r.inner_condition) << ',';
        if (r.mae) out << *r.mae;
        out << ',' << r.elapsed_s << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failure");
}

}  // namespace pgr
