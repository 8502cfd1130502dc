#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "pgrestore/image_io.hpp"
#include "pgrestore/simulate.hpp"

namespace pgr {

void SweepSpec::validate() const {
    if (sigmas.empty() || alpha_primes.empty() || q_values.empty() || lambdas.empty() ||
        solvers.empty())
        throw std::invalid_argument("SweepSpec: parameter lists must be non-empty");
    for (int q : q_values)
        if (q != 1 && q != 2) throw std::invalid_argument("SweepSpec: q must be 1 or 2");
    if (jobs < 1) throw std::invalid_argument("SweepSpec: jobs must be >= 1");
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t cell) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (cell + 1));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double mae_at_checkpoint(const std::vector<IterationRecord>& trace, double t) {
    double value = std::nan("");
    for (const auto& r : trace) {
        if (!r.mae) continue;
        if (r.elapsed_s <= t || std::isnan(value)) value = *r.mae;
    }
    return value;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const SimSpec& sim,
                                const AdmmConfig& base_cfg) {
    sweep.validate();

    Image truth = sim.phantom == PhantomKind::FromFile
                      ? read_image(sim.phantom_path)
                      : make_phantom(sim.phantom, sim.width, sim.height, sim.peak);

    struct Cell {
        double sigma, alpha_prime, lambda;
        int q;
        InnerSolver solver;
    };
    std::vector<Cell> cells;
    for (double s : sweep.sigmas)
        for (double ap : sweep.alpha_primes)
            for (int q : sweep.q_values)
                for (double lam : sweep.lambdas)
                    for (InnerSolver sol : sweep.solvers)
                        cells.push_back({s, ap, lam, q, sol});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            SweepRow& row = rows[i];
            row.sigma = c.sigma;
            row.alpha_prime = c.alpha_prime;
            row.q = c.q;
            row.lambda = c.lambda;
            row.solver = c.solver;
            try {
                SimSpec cell_sim = sim;
                cell_sim.model.sigma = c.sigma;
                cell_sim.model.alpha_prime = c.alpha_prime;
                cell_sim.seed = mix_seed(sim.seed, i);
                SimResult degraded = simulate(truth, cell_sim);

                // fold the exposure scale into H so g stays in phantom units
                CirculantOperator H = degraded.H;
                scale_operator(H, c.alpha_prime);

                AdmmConfig cfg = base_cfg;
                cfg.lambda = c.lambda;
                cfg.q = c.q;
                cfg.inner_solver = c.solver;
                cfg.model = cell_sim.model;
                cfg.model.alpha_prime = 1.0;  // absorbed into H
                cfg.bounds = derive_bounds(H, sim.peak);

                AdmmResult res = admm_restore(degraded.measured, H, cfg, &truth);

                for (double t : sweep.checkpoints_s)
                    row.checkpoint_mae.push_back(mae_at_checkpoint(res.trace, t));
                row.final_mae = mae(res.g, truth);
                DerivativeStack D = make_derivative_stack(truth.width, truth.height);
                row.final_objective =
                    objective(clip_b(res.g, cfg.bounds), degraded.measured, H, D, cfg);
                row.grad_evals = res.total_grad_evals;
                row.wall_s = res.trace.empty() ? 0.0 : res.trace.back().elapsed_s;
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };

    int jobs = std::min<int>(sweep.jobs, static_cast<int>(cells.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     const std::vector<double>& checkpoints_s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "sigma,alpha_prime,q,lambda,solver";
    for (double t : checkpoints_s) {
        std::ostringstream name;
        name.precision(6);
        name << ",mae_" << t << "s";
        out << name.str();
    }
    out << ",final_mae,final_objective,grad_evals,wall_s,status\n";
    out.precision(6);
    for (const auto& r : rows) {
        out << r.sigma << ',' << r.alpha_prime << ',' << r.q << ',' << r.lambda << ','
            << to_string(r.solver);
        for (double v : r.checkpoint_mae) out << ',' << v;
        for (std::size_t i = r.checkpoint_mae.size(); i < checkpoints_s.size(); ++i)
            out << ",";
        std::string status = r.failed ? "failed: " + r.error : "ok";
        for (char& ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        out << ',' << r.final_mae << ',' << r.final_objective << ',' << r.grad_evals << ','
            << r.wall_s << ',' << status << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failure");
}

}  // namespace pgr
