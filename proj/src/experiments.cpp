#include "predprey/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "predprey/assumptions.hpp"
#include "predprey/equilibria.hpp"
#include "predprey/monotone.hpp"
#include "predprey/steady.hpp"

namespace predprey {

using nlohmann::json;

std::string to_string(VerdictKind v) {
    switch (v) {
    case VerdictKind::Consistent: return "consistent";
    case VerdictKind::Inconsistent: return "inconsistent";
    case VerdictKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

const std::vector<std::string>& known_propositions() {
    static const std::vector<std::string> ids = {
        "cor-2.3-1",  "cor-2.3-2",  "prop-4.1-a1", "prop-4.1-a2",
        "prop-4.2-b1", "prop-4.2-b2", "prop-4.2-b3", "prop-4.3",
        "prop-4.4",   "prop-4.5-weakallee", "prop-4.6-strongallee",
        "thm-3.5-1",  "thm-3.5-2",
    };
    return ids;
}

ExperimentSpec experiment_from_config(const Config& cfg, const std::string& out_dir) {
    ExperimentSpec spec;
    spec.proposition = cfg.get_or("experiment", "proposition", "");
    spec.model = model_from_config(cfg);
    spec.grid = grid_from_config(cfg);
    spec.t_end = cfg.get_double_or("experiment", "t_end", cfg.get_double_or("sim", "t_end", 300.0));
    spec.dt = cfg.get_double_or("experiment", "dt", cfg.get_double_or("sim", "dt", 0.1));
    spec.trials = static_cast<int>(cfg.get_int_or("experiment", "trials", 10));
    spec.seed = static_cast<std::uint64_t>(
        cfg.get_int_or("experiment", "seed", cfg.get_int_or("sim", "seed", 1)));
    if (cfg.has("experiment", "ladder")) spec.ladder = cfg.get_list("experiment", "ladder");
    spec.out_dir = out_dir;
    spec.echo = cfg;
    return spec;
}

std::string VerdictReport::to_json_text() const {
    json j;
    j["proposition"] = proposition;
    j["hypothesis_ok"] = hypothesis_ok;
    j["hypothesis"] = hypothesis_detail;
    j["verdict"] = to_string(verdict);
    j["trials"] = json::array();
    for (const auto& t : trials) {
        j["trials"].push_back({{"label", t.label},
                               {"consistent", t.consistent},
                               {"budget_exhausted", t.budget_exhausted},
                               {"counterexample", t.counterexample},
                               {"detail", t.detail},
                               {"artifacts", t.artifacts}});
    }
    j["artifacts"] = artifacts;
    j["config"] = config_echo;
    return j.dump(2);
}

namespace {

namespace fs = std::filesystem;

template <typename Fn>
void parallel_for(int n, int threads, Fn fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    const int workers = std::min(threads, n);
    for (int w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& f : futs) f.get();
}

void gate(bool ok, const std::string& inequality) {
    if (!ok) throw ConfigError("proposition hypothesis violated: " + inequality);
}

struct DLParams {
    double a, b, m, d, e;
};

DLParams require_holling2_logistic_shape(const ModelSpec& model, const std::string& prop) {
    if (model.f.family != PreyFamily::Holling2Logistic ||
        model.g.family != ResponseFamily::Holling2 ||
        model.h.family != PredatorFamily::Logistic) {
        throw ConfigError(prop + " requires the Holling-II / logistic-predator model "
                          "(f prey-holling2-logistic, g holling2, h logistic)");
    }
    return {model.f.a, model.f.b, model.f.m, model.h.d, model.c * model.g.b};
}

double max_prey_growth(const ModelSpec& model) {
    // max of f over [0, a], via the interior maximizer when there is one
    const double a = compute_prey_capacity(model);
    double best = std::max(model.f(0.0), 0.0);
    try {
        if (auto lambda = prey_interior_maximizer(model)) best = std::max(best, model.f(*lambda));
    } catch (const AssumptionError&) {
        for (int i = 0; i <= 2000; ++i) best = std::max(best, model.f(a * i / 2000.0));
    }
    return best;
}

ICSpec random_ic_for(const ModelSpec& model, std::uint64_t seed) {
    ICSpec ic;
    ic.kind = ICSpec::Kind::RandomPositive;
    ic.amplitude = 0.9;
    ic.seed = seed;
    double base_u = compute_prey_capacity(model) / 2.0;
    double base_v = std::max({model.f(0.0), compute_v0(model), 1e-2}) / 2.0;
    for (const auto& eq : find_constant_equilibria(model)) {
        if (eq.kind == EquilibriumKind::PositiveInterior) {
            base_u = eq.u;
            base_v = eq.v;
            break;
        }
    }
    ic.base_u = base_u;
    ic.base_v = std::max(base_v, 1e-2);
    return ic;
}

struct Runner {
    const ExperimentSpec& spec;
    VerdictReport report;
    std::mutex artifacts_mutex;  // trials run concurrently

    explicit Runner(const ExperimentSpec& s) : spec(s) {
        report.proposition = s.proposition;
        report.config_echo = s.echo.to_text();
        fs::create_directories(spec.out_dir);
    }

    std::string artifact_path(const std::string& stem) const {
        return (fs::path(spec.out_dir) / (spec.proposition + "-" + stem)).string();
    }

    void write_snapshot(const Grid& grid, const Field& u, const Field& v,
                        const std::string& stem, TrialOutcome& t) {
        const std::string path = artifact_path(stem + ".csv");
        std::ofstream os(path);
        write_fields_csv(grid, {&u, &v}, os);
        t.artifacts.push_back(path);
        const std::lock_guard<std::mutex> lock(artifacts_mutex);
        report.artifacts.push_back(path);
    }

    // One attractivity simulation: expected is either a target state or a
    // boundary classification. A miss counts as a counterexample only when
    // the claim actually covers this parameter point (allow_counterexample);
    // on an uncertified ladder rung the honest outcome is merely inconsistent,
    // since the proposition's threshold may sit below the rung.
    TrialOutcome sim_trial(const ModelSpec& model, const std::string& label, std::uint64_t seed,
                           SimClass expected_cls, double target_u, double target_v,
                           bool allow_counterexample = true) {
        TrialOutcome t;
        t.label = label;
        SimOptions opt;
        opt.t_end = spec.t_end;
        opt.dt = spec.dt;
        opt.output_interval = std::max(spec.dt, 0.5);
        opt.target = {{target_u, target_v}};
        SimOutcome out;
        try {
            out = simulate(model, spec.grid, random_ic_for(model, seed), opt);
        } catch (const NumericalError& err) {
            t.budget_exhausted = true;
            t.detail = std::string("numerical failure: ") + err.what();
            return t;
        }
        const double dist =
            std::max(std::abs(out.u.max() - target_u),
                     std::max(std::abs(out.u.min() - target_u),
                              std::max(std::abs(out.v.max() - target_v),
                                       std::abs(out.v.min() - target_v))));
        std::ostringstream detail;
        detail << to_string(out.cls) << " t=" << out.t_reached << " dist=" << dist;
        t.detail = detail.str();
        if (out.cls == SimClass::BudgetExhausted) {
            t.budget_exhausted = true;
        } else if (out.cls == expected_cls && dist < 1e-4) {
            t.consistent = true;
        } else if (allow_counterexample) {
            // settled somewhere the proposition says it cannot
            t.counterexample = true;
            write_snapshot(spec.grid, out.u, out.v, label + "-counter", t);
        }
        return t;
    }

    // Monotone-iteration uniqueness check at the model's current parameters.
    TrialOutcome monotone_trial(const ModelSpec& model, const std::string& label) {
        TrialOutcome t;
        t.label = label;
        try {
            const BoundsBox box = construct_bounds(model);
            const double K = estimate_lipschitz(model, box);
            const IterationTrace trace = monotone_iterate(model, box, K, 1e-11, 200000);
            std::ostringstream detail;
            detail << "steps=" << trace.step_count << " unique=" << trace.unique_limits;
            t.detail = detail.str();
            if (!trace.converged) {
                t.budget_exhausted = true;
            } else {
                t.consistent = trace.unique_limits;
            }
        } catch (const AssumptionError& err) {
            t.detail = std::string("hypothesis not yet active: ") + err.what();
        } catch (const NumericalError& err) {
            t.budget_exhausted = true;
            t.detail = std::string("numerical failure: ") + err.what();
        }
        return t;
    }

    // Steady-state search rung; `mode` selects the consistency predicate.
    enum class SearchCheck { OnlyConstantPositives, NoStrictlyPositive };

    TrialOutcome search_trial(const ModelSpec& model, const std::string& label, bool top_rung,
                              SearchCheck mode) {
        TrialOutcome t;
        t.label = label;
        SearchOptions opts;
        opts.strategy = SearchStrategy::Multistart;
        opts.include_eigenmode = true;
        opts.multistart_n = 20;
        opts.seed = spec.seed;
        SearchResult found;
        try {
            found = search_steady_states(model, spec.grid, opts);
        } catch (const NumericalError& err) {
            t.budget_exhausted = true;
            t.detail = std::string("numerical failure: ") + err.what();
            return t;
        }
        int interior = 0;
        for (const auto& eq : find_constant_equilibria(model)) {
            if (eq.kind == EquilibriumKind::PositiveInterior) ++interior;
        }
        int positive_constant = 0, positive_nonconstant = 0;
        const SteadySolution* offender = nullptr;
        for (const auto& s : found.solutions) {
            if (!s.strictly_positive) continue;
            if (s.constant) {
                ++positive_constant;
            } else {
                ++positive_nonconstant;
                offender = &s;
            }
        }
        std::ostringstream detail;
        detail << "interior_eq=" << interior << " pos_const=" << positive_constant
               << " pos_nonconst=" << positive_nonconstant;
        t.detail = detail.str();
        switch (mode) {
        case SearchCheck::OnlyConstantPositives:
            t.consistent = interior == 1 && positive_nonconstant == 0 && positive_constant >= 1;
            if (positive_nonconstant > 0 && top_rung) {
                t.counterexample = true;
                write_snapshot(spec.grid, offender->u, offender->v, label + "-counter", t);
            }
            break;
        case SearchCheck::NoStrictlyPositive:
            t.consistent = positive_constant == 0 && positive_nonconstant == 0;
            if (!t.consistent && top_rung) {
                const SteadySolution* any = offender;
                if (!any) {
                    for (const auto& s : found.solutions) {
                        if (s.strictly_positive) any = &s;
                    }
                }
                if (any) {
                    t.counterexample = true;
                    write_snapshot(spec.grid, any->u, any->v, label + "-counter", t);
                }
            }
            break;
        }
        return t;
    }

    // Aggregate a fixed block of trials (no ladder semantics).
    void finish_fixed() {
        bool any_counter = false, any_budget = false, all_ok = !report.trials.empty();
        for (const auto& t : report.trials) {
            any_counter = any_counter || t.counterexample;
            any_budget = any_budget || t.budget_exhausted;
            all_ok = all_ok && t.consistent;
        }
        if (any_counter) {
            report.verdict = VerdictKind::Inconsistent;
        } else if (any_budget) {
            report.verdict = VerdictKind::Inconclusive;
        } else if (all_ok) {
            report.verdict = VerdictKind::Consistent;
        } else {
            report.verdict = VerdictKind::Inconclusive;
        }
    }

    // Walk a ladder of parameter rungs; each rung yields a block of trials.
    // Consistent after three consecutive fully-consistent rungs (all rungs
    // when the ladder is shorter than three).
    void run_ladder(const std::vector<double>& ladder,
                    const std::function<std::vector<TrialOutcome>(double, bool)>& rung_fn) {
        const int need = std::min<int>(3, static_cast<int>(ladder.size()));
        int consecutive = 0;
        bool any_counter = false, any_budget = false;
        for (size_t r = 0; r < ladder.size(); ++r) {
            const bool top = r + 1 == ladder.size();
            auto outcomes = rung_fn(ladder[r], top);
            bool rung_ok = !outcomes.empty();
            for (auto& t : outcomes) {
                rung_ok = rung_ok && t.consistent;
                any_counter = any_counter || t.counterexample;
                any_budget = any_budget || t.budget_exhausted;
                report.trials.push_back(std::move(t));
            }
            consecutive = rung_ok ? consecutive + 1 : 0;
            if (consecutive >= need && !any_counter && !any_budget) {
                report.verdict = VerdictKind::Consistent;
                return;
            }
        }
        if (any_counter) {
            report.verdict = VerdictKind::Inconsistent;
        } else {
            report.verdict = VerdictKind::Inconclusive;
        }
    }

    std::vector<TrialOutcome> attractivity_rung(const ModelSpec& model, const std::string& label,
                                                SimClass expected, double tu, double tv,
                                                bool allow_counterexample = true) {
        std::vector<TrialOutcome> outcomes(static_cast<size_t>(spec.trials));
        parallel_for(spec.trials, spec.threads, [&](int i) {
            outcomes[static_cast<size_t>(i)] =
                sim_trial(model, label + "-sim" + std::to_string(i),
                          spec.seed + static_cast<std::uint64_t>(i) * 7919u, expected, tu, tv,
                          allow_counterexample);
        });
        return outcomes;
    }
};

// Unique interior equilibrium of the model, or nullopt.
std::optional<Equilibrium> unique_interior(const ModelSpec& model) {
    std::optional<Equilibrium> found;
    int count = 0;
    for (const auto& eq : find_constant_equilibria(model)) {
        if (eq.kind == EquilibriumKind::PositiveInterior) {
            ++count;
            found = eq;
        }
    }
    if (count != 1) return std::nullopt;
    return found;
}

// Shared machinery of the small-conversion-rate attractivity propositions
// (cor-2.3-1, prop-4.2-b2, prop-4.5): descending c-ladder, each rung checks a
// unique interior equilibrium, the monotone uniqueness flag and n simulations.
void run_small_c_attractivity(Runner& R, const ModelSpec& base, std::vector<double> ladder) {
    double certified_below = 0.0;  // rungs under this are inside the certificate
    if (ladder.empty()) {
        double c_scale = 0.0;
        try {
            const SmallCCertificate cert = certify_small_c(base);
            if (cert.valid) {
                c_scale = cert.c0 * 0.9;
                certified_below = cert.c0;
            } else {
                c_scale = 0.2 * cert.c1;
            }
        } catch (const AssumptionError&) {
            c_scale = 0.0;
        }
        if (c_scale <= 0.0) {
            const double a = compute_prey_capacity(base);
            c_scale = 0.2 * (-base.h(base.f(0.0)) / base.g(a));
        }
        ladder = {c_scale, c_scale / 2.0, c_scale / 4.0};
    }
    R.run_ladder(ladder, [&](double c, bool top) {
        std::vector<TrialOutcome> outcomes;
        ModelSpec model = base;
        model.c = c;
        const std::string label = "c=" + std::to_string(c);
        (void)top;
        auto eq = unique_interior(model);
        TrialOutcome count_trial;
        count_trial.label = label + "-equilibria";
        count_trial.consistent = eq.has_value();
        count_trial.detail = eq ? "one interior equilibrium" : "interior equilibrium count != 1";
        outcomes.push_back(count_trial);
        if (!eq) return outcomes;
        outcomes.push_back(R.monotone_trial(model, label + "-monotone"));
        auto sims = R.attractivity_rung(model, label, SimClass::ConvergedToConstant, eq->u, eq->v,
                                        c < certified_below);
        std::move(sims.begin(), sims.end(), std::back_inserter(outcomes));
        return outcomes;
    });
}

// Large-conversion-rate rungs shared by prop-4.1, prop-4.6 and thm-3.5.
void run_large_c_search(Runner& R, const ModelSpec& base, std::vector<double> ladder,
                        bool values_are_e, Runner::SearchCheck mode) {
    if (ladder.empty()) ladder = {10.0, 50.0, 100.0, 500.0};
    R.run_ladder(ladder, [&](double value, bool top) {
        ModelSpec model = base;
        model.c = values_are_e ? value / model.g.b : value;
        const std::string label = (values_are_e ? "e=" : "c=") + std::to_string(value);
        std::vector<TrialOutcome> outcomes;
        outcomes.push_back(R.search_trial(model, label, top, mode));
        return outcomes;
    });
}

} // namespace

VerdictReport verify_proposition(const ExperimentSpec& spec) {
    const auto& ids = known_propositions();
    if (std::find(ids.begin(), ids.end(), spec.proposition) == ids.end()) {
        throw ConfigError("unknown proposition id '" + spec.proposition + "'");
    }
    spec.model.validate();
    Runner R(spec);
    const ModelSpec& model = spec.model;
    const std::string& id = spec.proposition;

    const double vmax_probe = std::max({2.0, 2.0 * model.f(0.0), 2.0 * compute_v0(model)}) + 1.0;

    if (id == "cor-2.3-1") {
        const AssumptionReport rep = check_assumptions(model, vmax_probe);
        gate(rep.small_c_hypotheses(), "(A1), (A2), (A3)");
        gate(model.f(0.0) > *rep.predator_zero, "f(0) > d");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "f(0) > d with (A1),(A2),(A3)";
        run_small_c_attractivity(R, model, spec.ladder);
    } else if (id == "cor-2.3-2") {
        const AssumptionReport rep = check_assumptions(model, vmax_probe);
        gate(rep.small_c_hypotheses(), "(A1), (A2), (A3)");
        const double fmax = max_prey_growth(model);
        gate(fmax < *rep.predator_zero, "max_{[0,a]} f(u) < d");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "max f < d";
        const double d = *rep.predator_zero;
        auto outcomes =
            R.attractivity_rung(model, "takeover", SimClass::ConvergedToPredatorOnly, 0.0, d);
        for (auto& t : outcomes) R.report.trials.push_back(std::move(t));
        R.finish_fixed();
    } else if (id == "prop-4.1-a1" || id == "prop-4.1-a2") {
        const DLParams dl = require_holling2_logistic_shape(model, id);
        if (id == "prop-4.1-a1") {
            gate(dl.a > dl.b * dl.d, "a > b d");
            R.report.hypothesis_detail = "a > b d";
        } else {
            gate(dl.a < dl.b * dl.d, "a < b d");
            R.report.hypothesis_detail = "a < b d";
        }
        R.report.hypothesis_ok = true;
        run_large_c_search(R, model, spec.ladder, true,
                           id == "prop-4.1-a1" ? Runner::SearchCheck::OnlyConstantPositives
                                               : Runner::SearchCheck::NoStrictlyPositive);
    } else if (id == "prop-4.2-b1") {
        const DLParams dl = require_holling2_logistic_shape(model, id);
        gate(dl.d < 0.0, "d < 0");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "d < 0";
        const double a = compute_prey_capacity(model);
        std::vector<double> ladder = spec.ladder;
        if (ladder.empty()) {
            const double e_scale = 0.5 * model.h.beta * (-dl.d) * model.g.b / model.g(a);
            ladder = {e_scale, e_scale / 2.0, e_scale / 4.0};
        }
        R.run_ladder(ladder, [&](double e, bool) {
            ModelSpec m = model;
            m.c = e / m.g.b;
            // the e0 threshold is non-constructive: rung misses are not counterexamples
            return R.attractivity_rung(m, "e=" + std::to_string(e), SimClass::ConvergedToPreyOnly,
                                       a, 0.0, false);
        });
    } else if (id == "prop-4.2-b2") {
        const DLParams dl = require_holling2_logistic_shape(model, id);
        gate(dl.d > 0.0 && dl.d < dl.a / dl.b, "0 < d < a/b");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "0 < d < a/b";
        run_small_c_attractivity(R, model, spec.ladder);
    } else if (id == "prop-4.2-b3") {
        const DLParams dl = require_holling2_logistic_shape(model, id);
        const double threshold = (dl.a * dl.m + 1.0) * (dl.a * dl.m + 1.0) / (4.0 * dl.m * dl.b);
        gate(dl.d > threshold, "d > (am+1)^2/(4mb)");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "d > (am+1)^2/(4mb)";
        auto outcomes =
            R.attractivity_rung(model, "takeover", SimClass::ConvergedToPredatorOnly, 0.0, dl.d);
        for (auto& t : outcomes) R.report.trials.push_back(std::move(t));
        R.finish_fixed();
    } else if (id == "prop-4.3") {
        const DLParams dl = require_holling2_logistic_shape(model, id);
        gate(dl.d > 0.0, "d > 0");
        gate(dl.m > 0.0, "m > 0");
        gate(dl.e > 0.0, "e > 0");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "d > 0";
        const LargeAThresholds th = holling2_large_a_threshold(dl.b, dl.d, dl.e, dl.m);
        ModelSpec m = model;
        m.f.a = 1.1 * th.a0;
        TrialOutcome t = R.monotone_trial(m, "a=1.1*a0");
        std::ostringstream extra;
        extra << " (a0=" << th.a0 << ", a1=" << th.a1 << ", a2=" << th.a2 << ", a3=" << th.a3 << ")";
        t.detail += extra.str();
        R.report.trials.push_back(std::move(t));
        R.finish_fixed();
    } else if (id == "prop-4.4") {
        const DLParams dl = require_holling2_logistic_shape(model, id);
        gate(dl.d > 0.0 && dl.d < dl.a / dl.b, "0 < d < a/b");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "0 < d < a/b";
        std::vector<double> ladder = spec.ladder;
        if (ladder.empty()) ladder = {1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
        R.run_ladder(ladder, [&](double mval, bool) {
            ModelSpec m = model;
            m.f.m = mval;
            m.g.m = mval;
            std::vector<TrialOutcome> outcomes;
            outcomes.push_back(R.monotone_trial(m, "m=" + std::to_string(mval)));
            return outcomes;
        });
    } else if (id == "prop-4.5-weakallee") {
        if (model.f.family != PreyFamily::Holling2Logistic ||
            model.g.family != ResponseFamily::Holling2 ||
            model.h.family != PredatorFamily::WeakAllee) {
            throw ConfigError(id + " requires f prey-holling2-logistic, g holling2, h weak-allee");
        }
        gate(model.h.d < model.f.a / model.f.b, "d < a/b");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "d < a/b (weak-Allee predator)";
        run_small_c_attractivity(R, model, spec.ladder);
    } else if (id == "prop-4.6-strongallee") {
        if (model.f.family != PreyFamily::Holling4Logistic ||
            model.g.family != ResponseFamily::Holling4 ||
            model.h.family != PredatorFamily::StrongAllee) {
            throw ConfigError(id + " requires f prey-holling4-logistic, g holling4, h strong-allee");
        }
        gate(model.f.a > model.f.b * (model.h.d + model.h.p), "a > b(d+p)");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "a > b(d+p)";
        std::vector<double> ladder = spec.ladder;
        if (ladder.empty()) ladder = {500.0, 1000.0, 2000.0};
        run_large_c_search(R, model, ladder, true, Runner::SearchCheck::OnlyConstantPositives);
    } else if (id == "thm-3.5-1") {
        const AssumptionReport rep = check_assumptions(model, vmax_probe);
        gate(rep.large_c_hypotheses(), "(A1'), (A2'), (A5)");
        gate(rep.a4 == Verdict::Pass, "(A4)");
        gate(model.f(0.0) > rep.v0, "f(0) > v0");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "f(0) > v0 with (A4)";
        run_large_c_search(R, model, spec.ladder, false, Runner::SearchCheck::OnlyConstantPositives);
    } else if (id == "thm-3.5-2") {
        const AssumptionReport rep = check_assumptions(model, vmax_probe);
        gate(rep.large_c_hypotheses(), "(A1'), (A2'), (A5)");
        gate(model.f(0.0) < rep.v0, "f(0) < v0");
        bool h_positive_below = rep.v0 > 0.0;
        for (int i = 1; i < 2000 && h_positive_below; ++i) {
            const double v = rep.v0 * i / 2000.0;
            if (!(model.h(v) > 0.0)) h_positive_below = false;
        }
        gate(h_positive_below, "h(v) > 0 for v < v0");
        R.report.hypothesis_ok = true;
        R.report.hypothesis_detail = "f(0) < v0, h > 0 below v0";
        run_large_c_search(R, model, spec.ladder, false, Runner::SearchCheck::NoStrictlyPositive);
    }

    const std::string path = (fs::path(spec.out_dir) / ("verdict-" + id + ".json")).string();
    std::ofstream os(path);
    os << R.report.to_json_text() << '\n';
    R.report.artifacts.push_back(path);
    return std::move(R.report);
}

std::vector<SweepRow> parameter_sweep(const ModelSpec& base, const Grid& grid,
                                      const std::string& parameter,
                                      const std::vector<double>& values,
                                      const std::string& experiment,
                                      const SweepSettings& settings) {
    if (experiment != "equilibria" && experiment != "simulate-classify" &&
        experiment != "steady-search") {
        throw ConfigError("unknown sweep experiment '" + experiment + "'");
    }
    std::vector<SweepRow> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 0; i < values.size(); ++i) {
        ModelSpec model = base;
        set_model_parameter(model, parameter, values[i]);  // validates the name
        SweepRow row;
        row.value = values[i];
        row.harnack_u = nan;
        row.harnack_v = nan;

        int interior = 0;
        for (const auto& eq : find_constant_equilibria(model)) {
            if (eq.kind == EquilibriumKind::PositiveInterior) ++interior;
        }
        row.interior_equilibria = interior;

        if (experiment == "equilibria") {
            row.classification = "interior=" + std::to_string(interior);
            row.uniqueness = interior == 1;
            // refine with the monotone uniqueness flag when the box hypotheses hold
            try {
                const BoundsBox box = construct_bounds(model);
                const double K = estimate_lipschitz(model, box);
                const IterationTrace tr = monotone_iterate(model, box, K, 1e-11, 200000);
                if (tr.converged) row.uniqueness = tr.unique_limits;
            } catch (const AssumptionError&) {
            } catch (const NumericalError&) {
            }
        } else if (experiment == "simulate-classify") {
            SimOptions opt = settings.sim;
            const SimOutcome out = simulate(
                model, grid, random_ic_for(model, settings.seed + i * 7919u), opt);
            row.classification = to_string(out.cls);
            row.uniqueness = out.cls == SimClass::ConvergedToConstant;
            if (out.u.min() > 0.0 && out.v.min() > 0.0) {
                row.harnack_u = out.u.max() / out.u.min();
                row.harnack_v = out.v.max() / out.v.min();
            }
        } else {
            SearchOptions opts;
            opts.strategy = SearchStrategy::Multistart;
            opts.include_eigenmode = true;
            opts.multistart_n = settings.multistart_n;
            opts.newton_tol = settings.newton_tol;
            opts.seed = settings.seed + i * 7919u;
            const SearchResult found = search_steady_states(model, grid, opts);
            int pos_const = 0, pos_nonconst = 0;
            double hu = 1.0, hv = 1.0;
            for (const auto& s : found.solutions) {
                if (!s.strictly_positive) continue;
                (s.constant ? pos_const : pos_nonconst) += 1;
                hu = std::max(hu, s.harnack_u);
                hv = std::max(hv, s.harnack_v);
            }
            row.classification = "pos_const=" + std::to_string(pos_const) +
                                 " pos_nonconst=" + std::to_string(pos_nonconst);
            row.uniqueness = pos_const + pos_nonconst == 1;
            row.harnack_u = hu;
            row.harnack_v = hv;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows,
                     std::ostream& os) {
    os << parameter << ",interior_equilibria,classification,uniqueness,harnack_u,harnack_v\n";
    os.precision(17);
    for (const auto& r : rows) {
        os << r.value << ',' << r.interior_equilibria << ',' << r.classification << ','
           << (r.uniqueness ? 1 : 0) << ',' << r.harnack_u << ',' << r.harnack_v << '\n';
    }
}

} // namespace predprey
