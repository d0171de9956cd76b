#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "predprey/grid.hpp"
#include "predprey/kinetics.hpp"

namespace predprey {

/// Strict-positivity floor: a solution counts as strictly positive only when
/// both fields stay above this everywhere.
inline constexpr double kPositiveFloor = 1e-8;

struct SteadySolution {
    Field u, v;
    double residual_sup = 0.0;
    bool constant = false;           // spatial std rule, as in the simulator
    bool strictly_positive = false;  // min of both fields > kPositiveFloor
    double harnack_u = 0.0;          // sup/inf, infinity when a field touches zero
    double harnack_v = 0.0;
    bool apriori_u_ok = false;       // max u <= a + 1e-6
    int newton_iters = 0;
    double at_c = 0.0;               // conversion rate this solution was found at
};

/// Componentwise residual of the discretized steady system with Neumann closure:
///   r_u = d1 Lap u + g(u)(f(u) - v),  r_v = d2 Lap v + v (h(v) + c g(u)).
std::pair<Field, Field> steady_residual(const ModelSpec& model, const Grid& grid,
                                        const Field& U, const Field& V);

struct NewtonFailure {
    enum class Reason { Stagnated, PositivityLoss, MaxIters } reason;
    int iters = 0;
    double final_residual = 0.0;
    std::string detail;
};

struct NewtonResult {
    std::optional<SteadySolution> solution;  // set on success
    std::optional<NewtonFailure> failure;    // set on failure
    bool ok() const { return solution.has_value(); }
};

/// Damped Newton on the stacked system; Jacobian from analytic reaction
/// derivatives plus the Laplacian stencil; the line search halves the step
/// until the residual sup-norm decreases (max 30 halvings). A strictly
/// positive guess is required; an accepted iterate leaving positivity is a
/// positivity-loss failure.
NewtonResult newton_solve(const ModelSpec& model, const Grid& grid, Field U, Field V,
                          double tol = 1e-10, int max_iters = 60);

enum class SearchStrategy { Eigenmode, Multistart, Continuation };

struct SearchOptions {
    SearchStrategy strategy = SearchStrategy::Eigenmode;
    int multistart_n = 20;
    std::uint64_t seed = 1;
    double c_min = 0.0, c_max = 0.0;  // continuation range
    int c_steps = 10;
    double newton_tol = 1e-10;
    int newton_max_iters = 60;
    bool include_eigenmode = false;  // add eigenmode seeds on top of the strategy
};

struct SearchResult {
    std::vector<SteadySolution> solutions;       // deduplicated (sup distance < 1e-6)
    std::vector<double> continuation_failures;   // c values where the branch was lost
    int newton_failures = 0;
};

/// Seeds Newton from constant equilibria, eigenmode perturbations
/// (equilibrium +- {0.01,0.1,0.3} x cos(j pi x/L), j=1..5 per axis), random
/// smooth multistarts, or natural continuation in c. Boundary constant states
/// enter by direct residual verification, not via Newton.
SearchResult search_steady_states(const ModelSpec& model, const Grid& grid,
                                  const SearchOptions& opts);

/// The conversion-rate transform w = c u, rho = 1/c:
///   -d1 Lap w = w q(rho w)[f(rho w) - v],  -d2 Lap v = v[h(v) + q(rho w) w].
struct TransformedModel {
    ModelSpec base;
    double rho = 0.0;

    double w_reaction(double w, double v) const {
        return w * base.g.q(rho * w) * (base.f(rho * w) - v);
    }
    double v_reaction(double w, double v) const {
        return v * (base.h(v) + base.g.q(rho * w) * w);
    }
    /// Unique positive constant state of the rho=0 system.
    double w_star() const { return -base.h(base.f(0.0)) / base.g.deriv(0.0); }
    double v_star() const { return base.f(0.0); }
};

/// rho = 1/c; requires c > 0.
TransformedModel transform_to_rho(const ModelSpec& model);

/// The rho = 0 limit system (w-equation reaction w g'(0)(f(0) - v)).
TransformedModel rho_zero_limit(const ModelSpec& model);

std::pair<Field, Field> transformed_steady_residual(const TransformedModel& tm, const Grid& grid,
                                                    const Field& W, const Field& V);

/// The rho=0 identity functional
///   G = -int [d1 w*|grad w|^2/w^2 + d2 v*|grad v|^2/v^2] + int (v-v*)[h(v)-h(v*)]
/// with (w*, v*) = (-h(f(0))/g'(0), f(0)); trapezoid-consistent quadrature
/// (edge midpoints for the gradient terms). Requires strictly positive fields,
/// an A4-satisfying h and h(f(0)) < 0.
double lyapunov_G(const TransformedModel& tm, const Grid& grid, const Field& W, const Field& V);

/// sup/inf of a strictly positive field.
double harnack_ratio(const Field& field);

} // namespace predprey
