#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>

#include "predprey/grid.hpp"
#include "predprey/kinetics.hpp"
#include "predprey/monotone.hpp"

namespace predprey {

enum class SimClass {
    ConvergedToConstant,
    ConvergedToPredatorOnly,  // (0, v0)-type
    ConvergedToPreyOnly,      // (a, 0)-type
    NonconstantAttractorSuspected,
    BudgetExhausted,
};

std::string to_string(SimClass c);

struct ICSpec {
    enum class Kind { ConstantNoise, Bump, RandomPositive };
    Kind kind = Kind::ConstantNoise;
    double base_u = 1.0;
    double base_v = 1.0;
    double amplitude = 0.1;
    std::uint64_t seed = 1;
};

std::pair<Field, Field> make_initial_condition(const Grid& grid, const ICSpec& ic);

// Classification thresholds (operational definitions of the convergence dichotomies).
inline constexpr double kChangeRateTol = 1e-9;   // sup-norm time-derivative proxy
inline constexpr double kConstantStdTol = 1e-6;  // spatial std < tol*(1+mean)
inline constexpr double kBoundaryZeroTol = 1e-6; // a field counts as extinct below this sup
inline constexpr double kPatternStdTol = 1e-3;   // spatial std above this suggests a pattern
inline constexpr double kBoxFaceTol = 1e-8;      // slack on BoundsBox faces

struct SimOptions {
    double t_end = 100.0;
    double dt = 0.1;  // cap; the stability policy may run below it
    double output_interval = 1.0;
    std::optional<BoundsBox> box;                      // containment monitor
    std::optional<std::pair<double, double>> target;   // distance column reference
    std::ostream* series = nullptr;                    // CSV sink, optional
    double reaction_dt_safety = 0.5;  // dt <= safety / sampled reaction Lipschitz
};

struct SimOutcome {
    Field u, v;
    double t_reached = 0.0;
    SimClass cls = SimClass::BudgetExhausted;
    std::optional<double> box_entry_time;  // first time both fields lie in the box
    bool box_exit_after_entry = false;
    double box_worst_violation = 0.0;      // after entry
    double u_min_over_time = 0.0, u_max_over_time = 0.0;
    double v_min_over_time = 0.0, v_max_over_time = 0.0;
    double final_change_rate = 0.0;
    int steps = 0;
    int rejections = 0;
};

/// IMEX time stepping for the reaction-diffusion system: reaction advanced by
/// an explicit two-stage (Heun) step, diffusion by backward Euler (tridiagonal
/// solve in 1D, alternating-direction sweeps in 2D). A step that produces a
/// negative value is rejected and retried at dt/2 (up to 20 halvings, then
/// NumericalError); non-finite values abort.
SimOutcome simulate(const ModelSpec& model, const Grid& grid, Field u0, Field v0,
                    const SimOptions& opt);

SimOutcome simulate(const ModelSpec& model, const Grid& grid, const ICSpec& ic,
                    const SimOptions& opt);

/// Backward-Euler diffusion sub-step (I - dt D Lap)x = field, in place.
/// Conserves the trapezoid mass to roundoff.
void diffuse_implicit(const Grid& grid, Field& field, double D, double dt);

} // namespace predprey
