#ifndef PGRESTORE_CONFIG_HPP
#define PGRESTORE_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgrestore/admm.hpp"
#include "pgrestore/simulate.hpp"

namespace pgr {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value run configuration. '#' starts a comment; blank lines are
/// ignored; unknown keys are rejected with their line number. Absent keys
/// take documented defaults and are echoed back by resolved().
class RunConfig {
public:
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);

    SimSpec sim_spec() const;
    AdmmConfig admm_config() const;
    SweepSpec sweep_spec() const;

    // u' for bound derivation; defaults to the phantom peak.
    double u_prime() const;

    // Every known key with its effective value, defaults included.
    std::vector<std::string> resolved() const;

private:
    std::map<std::string, std::string> values_;

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
};

}  // namespace pgr

#endif
