#include "pgrestore/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "pgrestore/fft.hpp"

namespace pgr {

QuadSolveContext make_quad_solve_context(const CirculantOperator& H,
                                         const DerivativeStack& D) {
    if (H.width != D.dxx.width || H.height != D.dxx.height)
        throw std::invalid_argument("make_quad_solve_context: operator shape mismatch");
    QuadSolveContext ctx;
    ctx.H = H;
    ctx.D = D;
    ctx.width = H.width;
    ctx.height = H.height;
    ctx.inv_freq.resize(H.freq.size());
    for (std::size_t i = 0; i < H.freq.size(); ++i) {
        double denom = 1.0 + std::norm(D.dxx.freq[i]) + std::norm(D.dxy.freq[i]) +
                       std::norm(D.dyy.freq[i]) + std::norm(H.freq[i]);
        ctx.inv_freq[i] = 1.0 / denom;
    }
    return ctx;
}

Image solve_g(const QuadSolveContext& ctx, const Image& m, const Image& m_hat,
              const HessianField& d, const HessianField& d_hat, const Image& b,
              const Image& b_hat, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("solve_g: beta must be positive");
    if (m.width != ctx.width || m.height != ctx.height || !d.same_shape(d_hat) ||
        d.width != ctx.width || !m.same_shape(m_hat) || !b.same_shape(b_hat) ||
        b.width != ctx.width || b.height != ctx.height)
        throw std::invalid_argument("solve_g: shape mismatch");

    const double inv_beta = 1.0 / beta;
    HessianField dv(d.width, d.height);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < dv.pixels(); ++i)
            dv.comps[c][i] = d.comps[c][i] + inv_beta * d_hat.comps[c][i];

    Image rhs = b + inv_beta * b_hat + apply_derivatives_adjoint(ctx.D, dv) +
                apply_adjoint(ctx.H, m + inv_beta * m_hat);

    auto f = fft2(rhs);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= ctx.inv_freq[i];
    return ifft2_real(f, ctx.width, ctx.height);
}

void hessian_eigenvalues(double v1, double v2, double v3, double& lam_plus,
                         double& lam_minus) {
    double mean = 0.5 * (v1 + v3);
    double r = std::hypot(0.5 * (v1 - v3), v2);
    lam_plus = mean + r;
    lam_minus = mean - r;
}

namespace {

double soft(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace

HessianField shrink_hessian(const HessianField& d_bar, double t, int q) {
    if (t <= 0.0) throw std::invalid_argument("shrink_hessian: threshold must be positive");
    if (q != 1 && q != 2) throw std::invalid_argument("shrink_hessian: q must be 1 or 2");

    HessianField out(d_bar.width, d_bar.height);
    const std::size_t n = d_bar.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        double v1 = d_bar.comps[0][i], v2 = d_bar.comps[1][i], v3 = d_bar.comps[2][i];
        if (q == 2) {
            double fro = std::sqrt(v1 * v1 + 2.0 * v2 * v2 + v3 * v3);
            double scale = fro > t ? (fro - t) / fro : 0.0;
            out.comps[0][i] = scale * v1;
            out.comps[1][i] = scale * v2;
            out.comps[2][i] = scale * v3;
        } else {
            if (v2 == 0.0) {
                // already diagonal (covers the degenerate v1 == v3 case)
                out.comps[0][i] = soft(v1, t);
                out.comps[1][i] = 0.0;
                out.comps[2][i] = soft(v3, t);
            } else {
                double lp, lm;
                hessian_eigenvalues(v1, v2, v3, lp, lm);
                double sp = soft(lp, t), sm = soft(lm, t);
                // eigenvector of lambda_plus: (v2, lambda_plus - v1), normalized
                double ex = v2, ey = lp - v1;
                double en = std::hypot(ex, ey);
                double c = ex / en, s = ey / en;
                out.comps[0][i] = sp * c * c + sm * s * s;
                out.comps[1][i] = (sp - sm) * c * s;
                out.comps[2][i] = sp * s * s + sm * c * c;
            }
        }
    }
    return out;
}

Image clip_b(const Image& b_bar, const Bounds& bounds) {
    Image out(b_bar.width, b_bar.height);
    for (std::size_t i = 0; i < b_bar.size(); ++i)
        out.data[i] = std::clamp(b_bar.data[i], 0.0, bounds.u_prime);
    return out;
}

}  // namespace pgr
