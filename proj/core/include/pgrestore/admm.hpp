#ifndef PGRESTORE_ADMM_HPP
#define PGRESTORE_ADMM_HPP

#include <optional>
#include <string>
#include <vector>

#include "pgrestore/circulant.hpp"
#include "pgrestore/inner.hpp"
#include "pgrestore/prox.hpp"

namespace pgr {

enum class InnerSolver { Newton, MM };

const char* to_string(InnerSolver s);

struct AdmmConfig {
    double beta = 1.0;
    double lambda = 0.05;
    int q = 2;  // Schatten order, 1 or 2
    double rho = 0.99;
    double theta0 = 1.0;
    InnerSolver inner_solver = InnerSolver::Newton;
    NewtonSchedule newton_sched;
    double stop_tol = 1e-4;
    int max_outer = 300;
    Bounds bounds;
    NoiseModel model;

    void validate() const;
};

struct IterationRecord {
    int k = 0;
    double cost = 0.0;
    double residual_m = 0.0;  // ||Hg - m||
    double residual_d = 0.0;  // ||Dg - d||
    double residual_b = 0.0;  // ||g - b||
    double c_k = 0.0;
    int inner_iters = 0;
    InnerCondition inner_condition = InnerCondition::None;
    std::optional<double> mae;
    double elapsed_s = 0.0;
    long grad_evals = 0;  // cumulative inner gradient evaluations
    InnerCertificate cert;
};

struct AdmmResult {
    Image g;
    std::vector<IterationRecord> trace;
    long total_grad_evals = 0;
};

/// Raised when the inner solver fails to certify for three consecutive
/// outer iterations, or a NaN shows up anywhere in the state.
struct ConvergenceError : std::runtime_error {
    InnerCertificate last_certificate;
    ConvergenceError(const std::string& msg, InnerCertificate cert)
        : std::runtime_error(msg), last_certificate(std::move(cert)) {}
};

AdmmResult admm_restore(const Image& m_prime, const CirculantOperator& H,
                        const AdmmConfig& cfg, const Image* truth = nullptr);

// Full objective F(g) = extended likelihood + lambda * Hessian-Schatten
// roughness + bound indicator, evaluated with the Delta = 40 series.
double objective(const Image& g, const Image& m_prime, const CirculantOperator& H,
                 const DerivativeStack& D, const AdmmConfig& cfg);

// Hessian-Schatten roughness sum_i ||E(S_i)||_q of a derivative field.
double hessian_schatten(const HessianField& d, int q);

// l = 0, u = ||H||_1 * u'.
Bounds derive_bounds(const CirculantOperator& H, double u_prime);

// One CSV row per outer iteration; header first. Optional leading comment
// lines (prefixed '#') carry the resolved configuration.
void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace,
                     const std::vector<std::string>& header_comments = {});

}  // namespace pgr

#endif
