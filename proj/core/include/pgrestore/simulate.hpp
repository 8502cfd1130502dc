#ifndef PGRESTORE_SIMULATE_HPP
#define PGRESTORE_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pgrestore/admm.hpp"
#include "pgrestore/circulant.hpp"
#include "pgrestore/noise.hpp"

namespace pgr {

enum class PhantomKind { Filaments, Dots, Grid, FromFile };

struct PsfSpec {
    bool from_file = false;
    double sigma_psf = 1.5;
    std::string path;  // kernel image, centered at the middle pixel
};

struct SimSpec {
    PhantomKind phantom = PhantomKind::Filaments;
    std::string phantom_path;  // when phantom == FromFile
    int width = 32;
    int height = 32;
    double peak = 12.0;
    NoiseModel model;
    PsfSpec psf;
    std::uint64_t seed = 1;
};

struct SimResult {
    Image measured;
    CirculantOperator H;
};

// Nonnegative synthetic test image with max exactly `peak`.
Image make_phantom(PhantomKind kind, int width, int height, double peak);

// Degrades `truth` by the parametric measurement model:
// m'_n = alpha * Poisson(alpha' (Hg)_n) + N(0, sigma^2).
// Deterministic for a fixed spec (own inversion/normal samplers over a
// seeded xoshiro-style stream; not bit-portable across implementations).
SimResult simulate(const Image& truth, const SimSpec& spec);

CirculantOperator build_psf(const PsfSpec& psf, int width, int height);

double mae(const Image& a, const Image& b);

// Deterministic counter-based RNG stream: splitmix64 seeded streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform();          // (0, 1)
    double normal();           // standard Gaussian, Box-Muller
    long poisson(double mean); // inversion below mean 30, normal approx above

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct SweepSpec {
    std::vector<double> sigmas{3.0};
    std::vector<double> alpha_primes{1.0};
    std::vector<int> q_values{2};
    std::vector<double> lambdas{0.05};
    std::vector<InnerSolver> solvers{InnerSolver::Newton};
    std::vector<double> checkpoints_s{};  // MAE sampled at these elapsed times
    double time_budget_s = 0.0;           // 0 = no per-cell cap on max_outer scaling
    int jobs = 1;

    void validate() const;
};

struct SweepRow {
    double sigma = 0.0;
    double alpha_prime = 0.0;
    int q = 0;
    double lambda = 0.0;
    InnerSolver solver = InnerSolver::Newton;
    std::vector<double> checkpoint_mae;
    double final_mae = 0.0;
    double final_objective = 0.0;
    long grad_evals = 0;
    double wall_s = 0.0;
    bool failed = false;
    std::string error;
};

// One restoration per (sigma, alpha_prime, q, lambda, solver) cell; each cell
// draws its own RNG stream from (seed, cell index). Failures are recorded and
// the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const SimSpec& sim,
                                const AdmmConfig& base_cfg);

// Header row then one row per cell, reals with 6 significant digits.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     const std::vector<double>& checkpoints_s);

}  // namespace pgr

#endif
