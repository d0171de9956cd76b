#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "predprey/config.hpp"
#include "predprey/grid.hpp"
#include "predprey/kinetics.hpp"
#include "predprey/simulate.hpp"

namespace predprey {

enum class VerdictKind { Consistent, Inconsistent, Inconclusive };

std::string to_string(VerdictKind v);

struct TrialOutcome {
    std::string label;
    bool consistent = false;
    bool budget_exhausted = false;
    bool counterexample = false;  // face-value counter-artifact at the extreme rung
    std::string detail;
    std::vector<std::string> artifacts;
};

struct ExperimentSpec {
    std::string proposition;
    ModelSpec model;
    Grid grid;
    double t_end = 300.0;
    double dt = 0.1;
    int trials = 10;
    std::uint64_t seed = 1;
    int threads = 1;
    std::vector<double> ladder;  // proposition default when empty
    std::string out_dir = "out";
    Config echo;  // the exact configuration, embedded in the report
};

ExperimentSpec experiment_from_config(const Config& cfg, const std::string& out_dir);

struct VerdictReport {
    std::string proposition;
    bool hypothesis_ok = false;
    std::string hypothesis_detail;
    std::vector<TrialOutcome> trials;
    VerdictKind verdict = VerdictKind::Inconclusive;
    std::vector<std::string> artifacts;
    std::string config_echo;

    std::string to_json_text() const;
};

/// Dispatch the proposition's operational test. The hypothesis gate exactly
/// mirrors the proposition's inequality; a mismatch throws ConfigError naming
/// it and never produces a verdict. Ladder claims ("there exists e0 ...")
/// aggregate per the three-consecutive-consistent-rungs rule; `inconsistent`
/// requires a concrete counter-trial artifact; any budget-exhausted trial
/// makes the verdict `inconclusive` at best.
VerdictReport verify_proposition(const ExperimentSpec& spec);

const std::vector<std::string>& known_propositions();

struct SweepRow {
    double value = 0.0;
    int interior_equilibria = 0;
    std::string classification;
    bool uniqueness = false;
    double harnack_u = 0.0;  // NaN where not applicable
    double harnack_v = 0.0;
};

struct SweepSettings {
    SimOptions sim;
    int multistart_n = 20;
    double newton_tol = 1e-10;
    std::uint64_t seed = 1;
};

/// One row per parameter value; experiment is one of
/// equilibria | simulate-classify | steady-search.
std::vector<SweepRow> parameter_sweep(const ModelSpec& base, const Grid& grid,
                                      const std::string& parameter,
                                      const std::vector<double>& values,
                                      const std::string& experiment,
                                      const SweepSettings& settings);

void write_sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows,
                     std::ostream& os);

} // namespace predprey
