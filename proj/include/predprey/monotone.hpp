#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "predprey/kinetics.hpp"

namespace predprey {

/// Coupled constant upper/lower solution rectangle:
///   f(u_high) - v_low <= 0,  h(v_high) + c g(u_high) <= 0,
///   f(u_low) - v_high >= 0,  h(v_low) + c g(u_low) >= 0.
struct BoundsBox {
    double u_low = 0.0;
    double v_low = 0.0;
    double u_high = 0.0;
    double v_high = 0.0;
    double epsilon = 0.0;  // the eps that produced the box
    double abar = 0.0;     // crossing of f with v_high; u_low = abar/2
};

/// Assemble the box for a given eps:
///   u_high = a + eps, v_low = d - eps, v_high = h^{-1}(-c g(a+eps)) + eps,
///   abar = largest root of f(u) = v_high in (0, a], u_low = abar/2.
/// Verifies the box inequalities before returning.
BoundsBox construct_bounds_with_epsilon(const ModelSpec& model, double eps);

/// Pick eps as the largest value of the geometric grid {d/2, d/4, ...} for
/// which eps < d and f(0) - [h^{-1}(-c g(a+eps)) + eps] > 0, then assemble.
/// Requires (A1), (A2), (A3) and h(f(0)) < -c g(a); throws AssumptionError
/// otherwise, NumericalError when no grid eps is feasible.
BoundsBox construct_bounds(const ModelSpec& model);

/// Sampled bound on the reaction Lipschitz constant over an axis-aligned box:
/// max over the sample grid of the per-component sums of |partials|.
double reaction_lipschitz(const std::function<double(double, double)>& ru_du,
                          const std::function<double(double, double)>& ru_dv,
                          const std::function<double(double, double)>& rv_du,
                          const std::function<double(double, double)>& rv_dv,
                          double u_lo, double u_hi, double v_lo, double v_hi,
                          int samples_per_axis);

/// K = 1.05 x sampled Lipschitz bound over the box (200x200 grid), floored at 1e-8.
double estimate_lipschitz(const ModelSpec& model, const BoundsBox& box, int samples_per_axis = 200);

struct IterationStep {
    double u_upper, u_lower, v_upper, v_lower;
};

struct IterationTrace {
    std::vector<IterationStep> steps;  // step 0 is the box itself
    double u_upper_limit = 0.0;  // u-tilde
    double u_lower_limit = 0.0;  // u-check
    double v_upper_limit = 0.0;  // v-tilde
    double v_lower_limit = 0.0;  // v-check
    double K = 0.0;
    int step_count = 0;
    bool converged = false;
    bool unique_limits = false;  // |u~ - u_check| and |v~ - v_check| < 10 tol
    // |f(u~)-v_check|, |h(v~)+c g(u~)|, |f(u_check)-v~|, |h(v_check)+c g(u_check)|
    std::array<double, 4> limit_residuals{};
};

/// The four coupled upper/lower-solution updates, run until successive
/// changes drop below tol or max_steps is hit:
///   u_up'  = u_up + g(u_up)/K [f(u_up) - v_lo]
///   u_lo'  = u_lo + g(u_lo)/K [f(u_lo) - v_up]
///   v_up'  = v_up + v_up/K [h(v_up) + c g(u_up)]
///   v_lo'  = v_lo + v_lo/K [h(v_lo) + c g(u_lo)]
/// Monotone ordering is asserted at every step (1e-13 slack); a violation
/// throws MonotonicityError since it indicates an invalid K or box.
IterationTrace monotone_iterate(const ModelSpec& model, const BoundsBox& box, double K,
                                double tol, int max_steps);

/// One row per step: step,u_upper,u_lower,v_upper,v_lower.
void write_trace_csv(const IterationTrace& trace, std::ostream& os);

} // namespace predprey
