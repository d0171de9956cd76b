#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "predprey/grid.hpp"
#include "predprey/kinetics.hpp"
#include "predprey/simulate.hpp"

namespace predprey {

/// Flat structured-text configuration: `key = value` lines under `[section]`
/// headers, `#`/`;` comments. Unknown keys and duplicate keys are errors.
class Config {
public:
    static Config parse(std::istream& in);
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    long get_int_or(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    std::vector<long> get_int_list(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }
    std::vector<std::string> keys(const std::string& section) const;

    /// Reject unknown sections/keys against the documented registry.
    void validate_keys() const;

    /// Serialize back to the flat text format (reproducibility echo).
    std::string to_text() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

ModelSpec model_from_config(const Config& cfg);
Grid grid_from_config(const Config& cfg);

/// [sim] section; base values default to the unique interior equilibrium
/// when one exists, otherwise (a/2, max(f(0), v0)/2).
ICSpec ic_from_config(const Config& cfg, const ModelSpec& model);
SimOptions sim_options_from_config(const Config& cfg);

/// Shared parameter names for sweeps: `a b m n alpha beta gamma` set the
/// paired f/g values together, `e` sets c = e / g.b, dotted names address one
/// family field. Throws ConfigError for names the model does not have.
void set_model_parameter(ModelSpec& model, const std::string& name, double value);

} // namespace predprey
