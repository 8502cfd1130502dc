#include "pgrestore/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace pgr {

namespace {

// key -> default value (as text)
const std::array<std::pair<const char*, const char*>, 33> kSchema = {{
    {"phantom", "filaments"},       // filaments | dots | grid | file
    {"phantom_path", ""},
    {"width", "32"},
    {"height", "32"},
    {"peak", "12"},
    {"alpha", "1"},
    {"sigma", "3"},
    {"alpha_prime", "1"},
    {"psf", "gaussian"},            // gaussian | file
    {"psf_sigma", "1.5"},
    {"psf_path", ""},
    {"seed", "1"},
    {"beta", "1"},
    {"lambda", "0.05"},
    {"q", "2"},
    {"rho", "0.99"},
    {"theta0", "1"},
    {"solver", "newton"},           // newton | mm
    {"stop_tol", "1e-4"},
    {"max_outer", "300"},
    {"u_prime", ""},                // empty = phantom peak
    {"newton_C", "1"},
    {"newton_C2", "1"},
    {"newton_C_delta", "0.25"},
    {"max_inner", "500"},
    {"sweep_sigmas", "3"},
    {"sweep_alpha_primes", "1"},
    {"sweep_q", "2"},
    {"sweep_lambdas", "0.05"},
    {"sweep_solvers", "newton"},
    {"sweep_checkpoints", ""},
    {"time_budget_s", "0"},
    {"jobs", "1"},
}};

bool known_key(const std::string& key) {
    return std::any_of(kSchema.begin(), kSchema.end(),
                       [&](const auto& kv) { return key == kv.first; });
}

std::string default_of(const std::string& key) {
    for (const auto& kv : kSchema)
        if (key == kv.first) return kv.second;
    throw std::logic_error("default_of: unknown key " + key);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

InnerSolver parse_solver(const std::string& s) {
    std::string v = lower(s);
    if (v == "newton") return InnerSolver::Newton;
    if (v == "mm") return InnerSolver::MM;
    throw ConfigError("unknown solver '" + s + "' (expected newton or mm)");
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!known_key(key))
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        if (cfg.values_.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown key '" + key + "'");
    values_[key] = value;
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    static thread_local std::string def;
    def = default_of(key);
    return def;
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        std::size_t pos;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

int RunConfig::get_int(const std::string& key) const {
    double d = get_double(key);
    int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ConfigError("key '" + key + "': expected an integer");
    return i;
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': bad list element '" + cell + "'");
        }
    }
    return out;
}

SimSpec RunConfig::sim_spec() const {
    SimSpec spec;
    std::string ph = lower(get("phantom"));
    if (ph == "filaments") spec.phantom = PhantomKind::Filaments;
    else if (ph == "dots") spec.phantom = PhantomKind::Dots;
    else if (ph == "grid") spec.phantom = PhantomKind::Grid;
    else if (ph == "file") spec.phantom = PhantomKind::FromFile;
    else throw ConfigError("key 'phantom': unknown value '" + ph + "'");
    spec.phantom_path = get("phantom_path");
    if (spec.phantom == PhantomKind::FromFile && spec.phantom_path.empty())
        throw ConfigError("phantom=file requires phantom_path");
    spec.width = get_int("width");
    spec.height = get_int("height");
    spec.peak = get_double("peak");
    spec.model.alpha = get_double("alpha");
    spec.model.sigma = get_double("sigma");
    spec.model.alpha_prime = get_double("alpha_prime");
    std::string psf = lower(get("psf"));
    if (psf == "gaussian") spec.psf.from_file = false;
    else if (psf == "file") spec.psf.from_file = true;
    else throw ConfigError("key 'psf': unknown value '" + psf + "'");
    spec.psf.sigma_psf = get_double("psf_sigma");
    spec.psf.path = get("psf_path");
    if (spec.psf.from_file && spec.psf.path.empty())
        throw ConfigError("psf=file requires psf_path");
    spec.seed = static_cast<std::uint64_t>(get_double("seed"));
    return spec;
}

AdmmConfig RunConfig::admm_config() const {
    AdmmConfig cfg;
    cfg.beta = get_double("beta");
    cfg.lambda = get_double("lambda");
    cfg.q = get_int("q");
    cfg.rho = get_double("rho");
    cfg.theta0 = get_double("theta0");
    cfg.inner_solver = parse_solver(get("solver"));
    cfg.stop_tol = get_double("stop_tol");
    cfg.max_outer = get_int("max_outer");
    cfg.newton_sched.C = get_double("newton_C");
    cfg.newton_sched.C2 = get_double("newton_C2");
    cfg.newton_sched.C_delta = get_double("newton_C_delta");
    cfg.newton_sched.max_inner = get_int("max_inner");
    cfg.model.alpha = get_double("alpha");
    cfg.model.sigma = get_double("sigma");
    cfg.model.alpha_prime = get_double("alpha_prime");
    return cfg;
}

double RunConfig::u_prime() const {
    const std::string& v = get("u_prime");
    if (v.empty()) return get_double("peak");
    return get_double("u_prime");
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec s;
    s.sigmas = get_doubles("sweep_sigmas");
    s.alpha_primes = get_doubles("sweep_alpha_primes");
    s.q_values.clear();
    for (double q : get_doubles("sweep_q")) s.q_values.push_back(static_cast<int>(q));
    s.lambdas = get_doubles("sweep_lambdas");
    s.solvers.clear();
    std::stringstream ss(get("sweep_solvers"));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (!cell.empty()) s.solvers.push_back(parse_solver(cell));
    }
    s.checkpoints_s = get_doubles("sweep_checkpoints");
    s.time_budget_s = get_double("time_budget_s");
    s.jobs = get_int("jobs");
    return s;
}

std::vector<std::string> RunConfig::resolved() const {
    std::vector<std::string> out;
    for (const auto& kv : kSchema) {
        std::string key = kv.first;
        out.push_back(key + " = " + get(key));
    }
    return out;
}

}  // namespace pgr
