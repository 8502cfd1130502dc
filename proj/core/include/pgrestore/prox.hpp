#ifndef PGRESTORE_PROX_HPP
#define PGRESTORE_PROX_HPP

#include <complex>
#include <vector>

#include "pgrestore/circulant.hpp"
#include "pgrestore/noise.hpp"

namespace pgr {

/// Precomputed inverse spectrum 1 / (1 + |D_xx|^2 + |D_xy|^2 + |D_yy|^2 + |H|^2)
/// together with the operators it was built from. Fixed for the lifetime of
/// a restoration run.
struct QuadSolveContext {
    CirculantOperator H;
    DerivativeStack D;
    std::vector<double> inv_freq;
    int width = 0;
    int height = 0;
};

QuadSolveContext make_quad_solve_context(const CirculantOperator& H,
                                         const DerivativeStack& D);

// Exact minimizer of the ADMM quadratic step:
// g = (I + D^T D + H^T H)^{-1} [b + b_hat/beta + D^T(d + d_hat/beta)
//     + H^T(m + m_hat/beta)], solved per frequency.
Image solve_g(const QuadSolveContext& ctx, const Image& m, const Image& m_hat,
              const HessianField& d, const HessianField& d_hat, const Image& b,
              const Image& b_hat, double beta);

// Per-pixel Hessian-Schatten shrinkage with threshold t. q = 2 shrinks the
// Frobenius norm of the symmetric 2x2 matrix [[v1,v2],[v2,v3]]; q = 1
// soft-thresholds its eigenvalues.
HessianField shrink_hessian(const HessianField& d_bar, double t, int q);

// Per-pixel clip into [0, u'].
Image clip_b(const Image& b_bar, const Bounds& bounds);

// Eigenvalues of [[v1,v2],[v2,v3]]: (v1+v3)/2 +- sqrt(((v1-v3)/2)^2 + v2^2).
void hessian_eigenvalues(double v1, double v2, double v3, double& lam_plus,
                         double& lam_minus);

}  // namespace pgr

#endif
