#include "predprey/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "predprey/equilibria.hpp"

namespace predprey {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// section -> allowed keys
const std::map<std::string, std::set<std::string>>& key_registry() {
    static const std::map<std::string, std::set<std::string>> reg = {
        {"model",
         {"f.family", "f.a", "f.b", "f.m", "f.n", "f.p", "f.gamma", "f.alpha", "f.beta",
          "g.family", "g.b", "g.m", "g.n", "g.alpha", "g.beta",
          "h.family", "h.beta", "h.d", "h.p", "h.r",
          "c", "e", "d1", "d2"}},
        {"grid", {"dimension", "lengths", "points"}},
        {"sim",
         {"t_end", "dt", "output_interval", "ic", "ic.amplitude", "ic.u", "ic.v", "seed",
          "safety", "target.u", "target.v"}},
        {"steady",
         {"strategy", "multistart.n", "seed", "newton.tol", "newton.max_iters",
          "continuation.c_min", "continuation.c_max", "continuation.steps"}},
        {"experiment", {"proposition", "trials", "t_end", "dt", "ladder", "seed"}},
        {"sweep", {"parameter", "values", "experiment"}},
        {"output", {"snapshot_format", "series"}},
        {"check", {"v_max", "samples"}},
        {"dispersion", {"k_max", "n_k"}},
    };
    return reg;
}

} // namespace

Config Config::parse(std::istream& in) {
    Config cfg;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            }
            cfg.sections_[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        auto& sec = cfg.sections_[section];
        if (sec.count(key)) {
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "' in [" + section + "]");
        }
        sec[key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in);
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end() || !it->second.count(key)) {
        throw ConfigError("missing required config key [" + section + "] " + key);
    }
    return it->second.at(key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + ": not a number: '" + v + "'");
    }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int_or(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key);
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + ": not an integer: '" + v + "'");
    }
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(section, key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config key [" + section + "] " + key + ": bad list entry '" + item + "'");
        }
    }
    return out;
}

std::vector<long> Config::get_int_list(const std::string& section, const std::string& key) const {
    std::vector<long> out;
    for (double v : get_list(section, key)) out.push_back(static_cast<long>(v));
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::vector<std::string> Config::keys(const std::string& section) const {
    std::vector<std::string> out;
    auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& [k, v] : it->second) out.push_back(k);
    return out;
}

void Config::validate_keys() const {
    const auto& reg = key_registry();
    for (const auto& [section, kv] : sections_) {
        auto rit = reg.find(section);
        if (rit == reg.end()) throw ConfigError("unknown config section [" + section + "]");
        for (const auto& [key, value] : kv) {
            if (!rit->second.count(key)) {
                throw ConfigError("unknown config key [" + section + "] " + key);
            }
        }
    }
}

std::string Config::to_text() const {
    std::ostringstream os;
    for (const auto& [section, kv] : sections_) {
        os << '[' << section << "]\n";
        for (const auto& [key, value] : kv) os << key << " = " << value << '\n';
        os << '\n';
    }
    return os.str();
}

namespace {

PreyFamily prey_family_from_string(const std::string& s) {
    if (s == "prey-richards") return PreyFamily::Richards;
    if (s == "prey-weak-allee") return PreyFamily::WeakAllee;
    if (s == "prey-logistic-ivlev") return PreyFamily::LogisticIvlev;
    if (s == "prey-holling2-logistic") return PreyFamily::Holling2Logistic;
    if (s == "prey-holling4-logistic") return PreyFamily::Holling4Logistic;
    throw ConfigError("unknown prey growth family '" + s + "'");
}

ResponseFamily response_family_from_string(const std::string& s) {
    if (s == "holling2") return ResponseFamily::Holling2;
    if (s == "holling4") return ResponseFamily::Holling4;
    if (s == "ivlev") return ResponseFamily::Ivlev;
    throw ConfigError("unknown functional response family '" + s + "'");
}

PredatorFamily predator_family_from_string(const std::string& s) {
    if (s == "logistic") return PredatorFamily::Logistic;
    if (s == "weak-allee") return PredatorFamily::WeakAllee;
    if (s == "strong-allee") return PredatorFamily::StrongAllee;
    if (s == "rational-strong-allee") return PredatorFamily::RationalStrongAllee;
    throw ConfigError("unknown predator growth family '" + s + "'");
}

// family tag -> parameters it accepts (beyond the family key itself)
std::set<std::string> allowed_params(PreyFamily f) {
    switch (f) {
    case PreyFamily::Richards: return {"a", "b", "m", "p", "gamma"};
    case PreyFamily::WeakAllee: return {"a", "b", "m", "p", "gamma"};
    case PreyFamily::LogisticIvlev: return {"a", "gamma", "alpha", "beta"};
    case PreyFamily::Holling2Logistic: return {"a", "b", "m"};
    case PreyFamily::Holling4Logistic: return {"a", "b", "m", "n", "gamma"};
    }
    return {};
}

std::set<std::string> allowed_params(ResponseFamily g) {
    switch (g) {
    case ResponseFamily::Holling2: return {"b", "m"};
    case ResponseFamily::Holling4: return {"b", "m", "n"};
    case ResponseFamily::Ivlev: return {"alpha", "beta"};
    }
    return {};
}

std::set<std::string> allowed_params(PredatorFamily h) {
    switch (h) {
    case PredatorFamily::Logistic: return {"beta", "d"};
    case PredatorFamily::WeakAllee: return {"beta", "d", "p"};
    case PredatorFamily::StrongAllee: return {"beta", "d", "p"};
    case PredatorFamily::RationalStrongAllee: return {"beta", "d", "p", "r"};
    }
    return {};
}

void reject_foreign_params(const Config& cfg, const std::string& prefix,
                           const std::set<std::string>& allowed) {
    for (const auto& key : cfg.keys("model")) {
        if (key.rfind(prefix + ".", 0) != 0) continue;
        const std::string param = key.substr(prefix.size() + 1);
        if (param == "family") continue;
        if (!allowed.count(param)) {
            throw ConfigError("config key [model] " + key + " does not apply to the selected " +
                              prefix + " family");
        }
    }
}

} // namespace

ModelSpec model_from_config(const Config& cfg) {
    ModelSpec m;
    m.f.family = prey_family_from_string(cfg.get("model", "f.family"));
    m.g.family = response_family_from_string(cfg.get("model", "g.family"));
    m.h.family = predator_family_from_string(cfg.get("model", "h.family"));

    reject_foreign_params(cfg, "f", allowed_params(m.f.family));
    reject_foreign_params(cfg, "g", allowed_params(m.g.family));
    reject_foreign_params(cfg, "h", allowed_params(m.h.family));

    m.f.a = cfg.get_double_or("model", "f.a", m.f.a);
    m.f.b = cfg.get_double_or("model", "f.b", m.f.b);
    m.f.m = cfg.get_double_or("model", "f.m", m.f.m);
    m.f.n = cfg.get_double_or("model", "f.n", m.f.n);
    m.f.p = cfg.get_double_or("model", "f.p", m.f.p);
    m.f.gamma = cfg.get_double_or("model", "f.gamma", m.f.gamma);
    m.f.alpha = cfg.get_double_or("model", "f.alpha", m.f.alpha);
    m.f.beta = cfg.get_double_or("model", "f.beta", m.f.beta);

    m.g.b = cfg.get_double_or("model", "g.b", m.g.b);
    m.g.m = cfg.get_double_or("model", "g.m", m.g.m);
    m.g.n = cfg.get_double_or("model", "g.n", m.g.n);
    m.g.alpha = cfg.get_double_or("model", "g.alpha", m.g.alpha);
    m.g.beta = cfg.get_double_or("model", "g.beta", m.g.beta);

    m.h.beta = cfg.get_double_or("model", "h.beta", m.h.beta);
    m.h.d = cfg.get_double_or("model", "h.d", m.h.d);
    m.h.p = cfg.get_double_or("model", "h.p", m.h.p);
    m.h.r = cfg.get_double_or("model", "h.r", m.h.r);

    if (cfg.has("model", "c") && cfg.has("model", "e")) {
        throw ConfigError("[model] c and e are aliases; give only one");
    }
    if (cfg.has("model", "e")) {
        m.c = cfg.get_double("model", "e") / m.g.b;  // c = e/b
    } else {
        m.c = cfg.get_double_or("model", "c", 0.0);
    }
    m.d1 = cfg.get_double_or("model", "d1", 1.0);
    m.d2 = cfg.get_double_or("model", "d2", 1.0);

    m.validate();
    return m;
}

Grid grid_from_config(const Config& cfg) {
    const int dim = static_cast<int>(cfg.get_int_or("grid", "dimension", 1));
    std::vector<double> lengths = cfg.has("grid", "lengths")
                                      ? cfg.get_list("grid", "lengths")
                                      : std::vector<double>(static_cast<size_t>(dim), 1.0);
    std::vector<int> points;
    if (cfg.has("grid", "points")) {
        for (long p : cfg.get_int_list("grid", "points")) points.push_back(static_cast<int>(p));
    } else {
        points.assign(static_cast<size_t>(dim), 201);
    }
    if (points.size() == 1 && dim == 2) points.push_back(points[0]);
    if (lengths.size() == 1 && dim == 2) lengths.push_back(lengths[0]);
    return build_grid(dim, lengths, points);
}

ICSpec ic_from_config(const Config& cfg, const ModelSpec& model) {
    ICSpec ic;
    const std::string kind = cfg.get_or("sim", "ic", "constant-noise");
    if (kind == "constant-noise") {
        ic.kind = ICSpec::Kind::ConstantNoise;
    } else if (kind == "bump") {
        ic.kind = ICSpec::Kind::Bump;
    } else if (kind == "random") {
        ic.kind = ICSpec::Kind::RandomPositive;
    } else {
        throw ConfigError("unknown [sim] ic kind '" + kind + "'");
    }
    ic.amplitude = cfg.get_double_or("sim", "ic.amplitude", ic.kind == ICSpec::Kind::RandomPositive ? 0.9 : 0.1);
    ic.seed = static_cast<std::uint64_t>(cfg.get_int_or("sim", "seed", 1));

    double base_u = 0.0, base_v = 0.0;
    bool have_base = false;
    if (cfg.has("sim", "ic.u") || cfg.has("sim", "ic.v")) {
        base_u = cfg.get_double("sim", "ic.u");
        base_v = cfg.get_double("sim", "ic.v");
        have_base = true;
    } else {
        int interior = 0;
        for (const auto& eq : find_constant_equilibria(model)) {
            if (eq.kind == EquilibriumKind::PositiveInterior) {
                ++interior;
                base_u = eq.u;
                base_v = eq.v;
            }
        }
        have_base = interior == 1;
    }
    if (!have_base) {
        base_u = compute_prey_capacity(model) / 2.0;
        base_v = std::max(model.f(0.0), compute_v0(model)) / 2.0;
    }
    ic.base_u = base_u;
    ic.base_v = base_v;
    return ic;
}

SimOptions sim_options_from_config(const Config& cfg) {
    SimOptions opt;
    opt.t_end = cfg.get_double_or("sim", "t_end", 100.0);
    opt.dt = cfg.get_double_or("sim", "dt", 0.1);
    opt.output_interval = cfg.get_double_or("sim", "output_interval", 1.0);
    opt.reaction_dt_safety = cfg.get_double_or("sim", "safety", 0.5);
    if (cfg.has("sim", "target.u") && cfg.has("sim", "target.v")) {
        opt.target = {cfg.get_double("sim", "target.u"), cfg.get_double("sim", "target.v")};
    }
    return opt;
}

void set_model_parameter(ModelSpec& model, const std::string& name, double value) {
    auto set_f = [&](const std::string& param) -> bool {
        if (param == "a") model.f.a = value;
        else if (param == "b") model.f.b = value;
        else if (param == "m") model.f.m = value;
        else if (param == "n") model.f.n = value;
        else if (param == "p") model.f.p = value;
        else if (param == "gamma") model.f.gamma = value;
        else if (param == "alpha") model.f.alpha = value;
        else if (param == "beta") model.f.beta = value;
        else return false;
        return true;
    };
    auto set_g = [&](const std::string& param) -> bool {
        if (param == "b") model.g.b = value;
        else if (param == "m") model.g.m = value;
        else if (param == "n") model.g.n = value;
        else if (param == "alpha") model.g.alpha = value;
        else if (param == "beta") model.g.beta = value;
        else return false;
        return true;
    };
    auto set_h = [&](const std::string& param) -> bool {
        if (param == "beta") model.h.beta = value;
        else if (param == "d") model.h.d = value;
        else if (param == "p") model.h.p = value;
        else if (param == "r") model.h.r = value;
        else return false;
        return true;
    };

    bool ok = false;
    if (name == "c") {
        model.c = value;
        ok = true;
    } else if (name == "e") {
        model.c = value / model.g.b;
        ok = true;
    } else if (name == "d1") {
        model.d1 = value;
        ok = true;
    } else if (name == "d2") {
        model.d2 = value;
        ok = true;
    } else if (name == "a") {
        ok = set_f("a");
    } else if (name == "b" || name == "m" || name == "n" || name == "alpha" || name == "beta") {
        // shared f/g parameters move together to keep the pairing consistent
        ok = set_f(name);
        ok = set_g(name) && ok;
    } else if (name == "gamma") {
        ok = set_f("gamma");
    } else if (name == "d" || name == "p" || name == "r") {
        ok = set_h(name);
        if (name == "p") ok = true;  // h.p; use f.p explicitly for the prey exponent
    } else if (name.rfind("f.", 0) == 0) {
        ok = set_f(name.substr(2));
    } else if (name.rfind("g.", 0) == 0) {
        ok = set_g(name.substr(2));
    } else if (name.rfind("h.", 0) == 0) {
        ok = set_h(name.substr(2));
    }
    if (!ok) throw ConfigError("unknown model parameter '" + name + "'");
    model.validate();
}

} // namespace predprey
