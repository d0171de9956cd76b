#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "predprey/assumptions.hpp"
#include "predprey/config.hpp"
#include "predprey/equilibria.hpp"
#include "predprey/experiments.hpp"
#include "predprey/monotone.hpp"
#include "predprey/steady.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace predprey;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;  // <0: keep the config's seed
    int threads = 1;
};

Config load_config(const CommonArgs& args) {
    Config cfg = Config::parse_file(args.config_path);
    cfg.validate_keys();
    if (args.seed >= 0) {
        cfg.set("sim", "seed", std::to_string(args.seed));
        cfg.set("experiment", "seed", std::to_string(args.seed));
        cfg.set("steady", "seed", std::to_string(args.seed));
    }
    return cfg;
}

std::ofstream open_out(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    const auto path = fs::path(args.out_dir) / name;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write output file " + path.string());
    std::cerr << "writing " << path.string() << '\n';
    return os;
}

json equilibrium_json(const Equilibrium& eq) {
    return json{{"u", eq.u},
                {"v", eq.v},
                {"kind", to_string(eq.kind)},
                {"degenerate", eq.degenerate},
                {"jacobian", eq.jacobian}};
}

json assumption_json(const AssumptionReport& rep) {
    json j;
    j["A1"] = to_string(rep.a1);
    j["A1'"] = to_string(rep.a1prime);
    j["A2"] = to_string(rep.a2);
    j["A2'"] = to_string(rep.a2prime);
    j["A3"] = to_string(rep.a3);
    j["A4"] = to_string(rep.a4);
    j["A5"] = to_string(rep.a5);
    j["capacity"] = rep.capacity;
    j["f0"] = rep.f_at_zero;
    j["v0"] = rep.v0;
    if (rep.interior_max) j["lambda"] = *rep.interior_max;
    if (rep.predator_zero) j["d"] = *rep.predator_zero;
    j["prey_case"] = rep.prey_case_two ? 2 : 1;
    if (rep.envelope) {
        json terms = json::array();
        for (const auto& t : rep.envelope->terms) {
            terms.push_back({{"q", t.exponent}, {"k", t.lower}, {"kbar", t.upper}});
        }
        j["envelope"] = {{"v_max", rep.envelope->v_max}, {"terms", terms}};
    }
    json wit = json::array();
    for (const auto& w : rep.witnesses) {
        wit.push_back({{"assumption", w.assumption}, {"x", w.x}, {"value", w.value}, {"note", w.note}});
    }
    j["witnesses"] = wit;
    return j;
}

json steady_solution_json(const SteadySolution& s) {
    return json{{"residual_sup", s.residual_sup}, {"constant", s.constant},
                {"strictly_positive", s.strictly_positive}, {"harnack_u", s.harnack_u},
                {"harnack_v", s.harnack_v},         {"apriori_u_ok", s.apriori_u_ok},
                {"newton_iters", s.newton_iters},   {"c", s.at_c},
                {"u_mean", s.u.mean()},             {"v_mean", s.v.mean()}};
}

int cmd_check(const CommonArgs& args) {
    const Config cfg = load_config(args);
    const ModelSpec model = model_from_config(cfg);
    const double vmax_default = std::max({2.0, 2.0 * model.f(0.0), 2.0 * compute_v0(model)}) + 1.0;
    const double v_max = cfg.get_double_or("check", "v_max", vmax_default);
    const int samples = static_cast<int>(cfg.get_int_or("check", "samples", 10000));
    const AssumptionReport rep = check_assumptions(model, v_max, samples);
    const json j = assumption_json(rep);
    open_out(args, "assumptions.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_equilibria(const CommonArgs& args, bool with_dispersion) {
    const Config cfg = load_config(args);
    const ModelSpec model = model_from_config(cfg);
    json j;
    j["equilibria"] = json::array();
    const auto eqs = find_constant_equilibria(model);
    for (const auto& eq : eqs) j["equilibria"].push_back(equilibrium_json(eq));
    try {
        const SmallCCertificate cert = certify_small_c(model);
        j["small_c_certificate"] = {{"c1", cert.c1},
                                    {"case", cert.case_tag},
                                    {"interval_left", cert.interval_left},
                                    {"min_hf_prime", cert.min_hf_prime},
                                    {"max_g_prime", cert.max_g_prime},
                                    {"ratio", cert.ratio},
                                    {"c0", cert.c0},
                                    {"valid", cert.valid}};
    } catch (const AssumptionError& err) {
        j["small_c_certificate"] = {{"error", err.what()}};
    }
    if (with_dispersion) {
        const double k_max = cfg.get_double_or("dispersion", "k_max", 50.0);
        const int n_k = static_cast<int>(cfg.get_int_or("dispersion", "n_k", 512));
        j["dispersion"] = json::array();
        int idx = 0;
        for (const auto& eq : eqs) {
            if (eq.kind != EquilibriumKind::PositiveInterior || eq.degenerate) continue;
            const DispersionReport rep = dispersion(model, eq, k_max, n_k);
            json d = {{"u", eq.u},
                      {"v", eq.v},
                      {"stable_at_zero", rep.stable_at_zero},
                      {"turing_unstable", rep.turing_unstable}};
            if (rep.unstable_band) d["unstable_band"] = {rep.unstable_band->first, rep.unstable_band->second};
            const std::string csv = "dispersion-" + std::to_string(idx++) + ".csv";
            auto os = open_out(args, csv);
            os << "k,re_lambda1,im_lambda1,re_lambda2,im_lambda2,growth\n";
            os.precision(17);
            for (size_t i = 0; i < rep.k.size(); ++i) {
                os << rep.k[i] << ',' << rep.lambda1[i].real() << ',' << rep.lambda1[i].imag()
                   << ',' << rep.lambda2[i].real() << ',' << rep.lambda2[i].imag() << ','
                   << rep.growth[i] << '\n';
            }
            d["csv"] = (fs::path(args.out_dir) / csv).string();
            j["dispersion"].push_back(d);
        }
    }
    open_out(args, "equilibria.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_iterate(const CommonArgs& args, double tol, long max_steps) {
    const Config cfg = load_config(args);
    const ModelSpec model = model_from_config(cfg);
    const BoundsBox box = construct_bounds(model);
    const double K = estimate_lipschitz(model, box);
    const IterationTrace trace = monotone_iterate(model, box, K, tol, static_cast<int>(max_steps));
    {
        auto os = open_out(args, "iterate.csv");
        write_trace_csv(trace, os);
    }
    json j = {{"box", {{"u_low", box.u_low}, {"v_low", box.v_low}, {"u_high", box.u_high},
                       {"v_high", box.v_high}, {"epsilon", box.epsilon}, {"abar", box.abar}}},
              {"K", K},
              {"steps", trace.step_count},
              {"converged", trace.converged},
              {"unique", trace.unique_limits},
              {"limits", {{"u_upper", trace.u_upper_limit}, {"u_lower", trace.u_lower_limit},
                          {"v_upper", trace.v_upper_limit}, {"v_lower", trace.v_lower_limit}}},
              {"limit_residuals", trace.limit_residuals}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const Config cfg = load_config(args);
    const ModelSpec model = model_from_config(cfg);
    const Grid grid = grid_from_config(cfg);
    const ICSpec ic = ic_from_config(cfg, model);
    SimOptions opt = sim_options_from_config(cfg);

    std::ofstream series;
    if (cfg.get_or("output", "series", "on") != "off") {
        series = open_out(args, "series.csv");
        opt.series = &series;
    }
    if (!opt.target) {
        for (const auto& eq : find_constant_equilibria(model)) {
            if (eq.kind == EquilibriumKind::PositiveInterior) {
                opt.target = {{eq.u, eq.v}};
                break;
            }
        }
    }
    try {
        const BoundsBox box = construct_bounds(model);
        opt.box = box;
    } catch (const AssumptionError&) {
    } catch (const NumericalError&) {
    }

    const SimOutcome out = simulate(model, grid, ic, opt);
    {
        auto os = open_out(args, cfg.get_or("output", "snapshot_format", "csv") == "binary"
                                     ? "final.bin"
                                     : "final.csv");
        if (cfg.get_or("output", "snapshot_format", "csv") == "binary") {
            write_fields_binary({&out.u, &out.v}, os);
        } else {
            write_fields_csv(grid, {&out.u, &out.v}, os);
        }
    }
    json j = {{"classification", to_string(out.cls)},
              {"t_reached", out.t_reached},
              {"steps", out.steps},
              {"rejections", out.rejections},
              {"final_change_rate", out.final_change_rate},
              {"u_range_over_time", {out.u_min_over_time, out.u_max_over_time}},
              {"v_range_over_time", {out.v_min_over_time, out.v_max_over_time}}};
    if (out.box_entry_time) {
        j["box_entry_time"] = *out.box_entry_time;
        j["box_exit_after_entry"] = out.box_exit_after_entry;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_steady(const CommonArgs& args) {
    const Config cfg = load_config(args);
    const ModelSpec model = model_from_config(cfg);
    const Grid grid = grid_from_config(cfg);

    SearchOptions opts;
    const std::string strategy = cfg.get_or("steady", "strategy", "eigenmode");
    if (strategy == "eigenmode") {
        opts.strategy = SearchStrategy::Eigenmode;
    } else if (strategy == "multistart") {
        opts.strategy = SearchStrategy::Multistart;
        opts.include_eigenmode = true;
    } else if (strategy == "continuation") {
        opts.strategy = SearchStrategy::Continuation;
        opts.c_min = cfg.get_double("steady", "continuation.c_min");
        opts.c_max = cfg.get_double("steady", "continuation.c_max");
        opts.c_steps = static_cast<int>(cfg.get_int_or("steady", "continuation.steps", 10));
    } else {
        throw ConfigError("unknown steady strategy '" + strategy + "'");
    }
    opts.multistart_n = static_cast<int>(cfg.get_int_or("steady", "multistart.n", 20));
    opts.seed = static_cast<std::uint64_t>(cfg.get_int_or("steady", "seed", 1));
    opts.newton_tol = cfg.get_double_or("steady", "newton.tol", 1e-10);
    opts.newton_max_iters = static_cast<int>(cfg.get_int_or("steady", "newton.max_iters", 60));

    const SearchResult result = search_steady_states(model, grid, opts);
    json j;
    j["solutions"] = json::array();
    for (size_t i = 0; i < result.solutions.size(); ++i) {
        const auto& s = result.solutions[i];
        json meta = steady_solution_json(s);
        const std::string snap = "steady-" + std::to_string(i) + ".csv";
        auto os = open_out(args, snap);
        write_fields_csv(grid, {&s.u, &s.v}, os);
        meta["snapshot"] = (fs::path(args.out_dir) / snap).string();
        j["solutions"].push_back(meta);
    }
    j["newton_failures"] = result.newton_failures;
    j["continuation_failures"] = result.continuation_failures;
    open_out(args, "steady.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& prop) {
    Config cfg = load_config(args);
    if (!prop.empty()) cfg.set("experiment", "proposition", prop);
    ExperimentSpec spec = experiment_from_config(cfg, args.out_dir);
    spec.threads = args.threads;
    const VerdictReport report = verify_proposition(spec);
    std::cout << report.to_json_text() << '\n';
    switch (report.verdict) {
    case VerdictKind::Consistent: return 0;
    case VerdictKind::Inconsistent: return 1;
    case VerdictKind::Inconclusive: return 3;
    }
    return 3;
}

int cmd_sweep(const CommonArgs& args) {
    const Config cfg = load_config(args);
    const ModelSpec model = model_from_config(cfg);
    const Grid grid = grid_from_config(cfg);
    const std::string parameter = cfg.get("sweep", "parameter");
    const std::vector<double> values = cfg.get_list("sweep", "values");
    const std::string experiment = cfg.get_or("sweep", "experiment", "equilibria");
    SweepSettings settings;
    settings.sim = sim_options_from_config(cfg);
    settings.seed = static_cast<std::uint64_t>(cfg.get_int_or("sim", "seed", 1));
    const auto rows = parameter_sweep(model, grid, parameter, values, experiment, settings);
    {
        auto os = open_out(args, "sweep.csv");
        write_sweep_csv(parameter, rows, os);
    }
    write_sweep_csv(parameter, rows, std::cout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for diffusive predator-prey systems"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand too

    CommonArgs args;
    app.add_option("--config", args.config_path, "configuration file")->required();
    app.add_option("--out", args.out_dir, "output directory (default: out)");
    app.add_option("--seed", args.seed, "override the configured random seed");
    app.add_option("--threads", args.threads, "concurrent trials for experiments");

    auto* check = app.add_subcommand("check", "assumption report for the configured model");
    auto* equilibria = app.add_subcommand("equilibria", "constant equilibria and thresholds");
    bool with_dispersion = false;
    equilibria->add_flag("--dispersion", with_dispersion, "add a dispersion report per interior equilibrium");
    auto* iterate = app.add_subcommand("iterate", "monotone upper/lower iteration");
    double tol = 1e-10;
    long max_steps = 200000;
    iterate->add_option("--tol", tol, "convergence tolerance");
    iterate->add_option("--max-steps", max_steps, "step budget");
    auto* simulate_cmd = app.add_subcommand("simulate", "IMEX time integration");
    auto* steady = app.add_subcommand("steady", "steady-state search");
    auto* verify = app.add_subcommand("verify", "verify a proposition");
    std::string prop;
    verify->add_option("proposition", prop, "proposition id (overrides the config)");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(args);
        if (equilibria->parsed()) return cmd_equilibria(args, with_dispersion);
        if (iterate->parsed()) return cmd_iterate(args, tol, max_steps);
        if (simulate_cmd->parsed()) return cmd_simulate(args);
        if (steady->parsed()) return cmd_steady(args);
        if (verify->parsed()) return cmd_verify(args, prop);
        if (sweep->parsed()) return cmd_sweep(args);
    } catch (const ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 2;
    } catch (const DomainError& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 2;
    } catch (const AssumptionError& err) {
        std::cerr << "numerical failure: " << err.what() << '\n';
        return 3;
    } catch (const NumericalError& err) {
        std::cerr << "numerical failure: " << err.what() << '\n';
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    }
    return 2;
}
