#include "predprey/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "predprey/assumptions.hpp"
#include "predprey/equilibria.hpp"
#include "predprey/simulate.hpp"

namespace predprey {

namespace {

void check_conforming(const Grid& grid, const Field& U, const Field& V, const char* who) {
    if (U.values.size() != static_cast<size_t>(grid.total()) ||
        V.values.size() != static_cast<size_t>(grid.total())) {
        throw DomainError(std::string(who) + ": fields do not conform to grid");
    }
}

double residual_sup(const std::pair<Field, Field>& r) {
    double best = 0.0;
    for (double x : r.first.values) best = std::max(best, std::abs(x));
    for (double x : r.second.values) best = std::max(best, std::abs(x));
    return best;
}

bool constant_by_std(const Field& f) {
    return f.stddev() < kConstantStdTol * (1.0 + std::abs(f.mean()));
}

SteadySolution make_solution(const ModelSpec& model, const Grid&, Field U, Field V,
                             double res, int iters) {
    SteadySolution s;
    s.residual_sup = res;
    s.newton_iters = iters;
    s.at_c = model.c;
    s.constant = constant_by_std(U) && constant_by_std(V);
    s.strictly_positive = U.min() > kPositiveFloor && V.min() > kPositiveFloor;
    s.harnack_u = U.min() > 0.0 ? U.max() / U.min() : std::numeric_limits<double>::infinity();
    s.harnack_v = V.min() > 0.0 ? V.max() / V.min() : std::numeric_limits<double>::infinity();
    s.apriori_u_ok = U.max() <= compute_prey_capacity(model) + 1e-6;
    U.name = "u";
    V.name = "v";
    s.u = std::move(U);
    s.v = std::move(V);
    return s;
}

} // namespace

std::pair<Field, Field> steady_residual(const ModelSpec& model, const Grid& grid,
                                        const Field& U, const Field& V) {
    check_conforming(grid, U, V, "steady_residual");
    Field ru = apply_laplacian(grid, U);
    Field rv = apply_laplacian(grid, V);
    for (size_t i = 0; i < U.values.size(); ++i) {
        ru.values[i] = model.d1 * ru.values[i] + model.reaction_u(U.values[i], V.values[i]);
        rv.values[i] = model.d2 * rv.values[i] + model.reaction_v(U.values[i], V.values[i]);
    }
    ru.name = "residual_u";
    rv.name = "residual_v";
    return {std::move(ru), std::move(rv)};
}

namespace {

// Laplacian row entries (units 1/h^2) for the interleaved Newton system.
template <typename Fn>
void for_each_laplacian_entry(const Grid& grid, int ix, int iy, Fn&& fn) {
    const double ihx2 = 1.0 / (grid.spacing[0] * grid.spacing[0]);
    fn(grid.index(ix == 0 ? 1 : ix - 1, iy), ihx2);
    fn(grid.index(ix == grid.nx() - 1 ? grid.nx() - 2 : ix + 1, iy), ihx2);
    double diag = -2.0 * ihx2;
    if (grid.dim == 2) {
        const double ihy2 = 1.0 / (grid.spacing[1] * grid.spacing[1]);
        fn(grid.index(ix, iy == 0 ? 1 : iy - 1), ihy2);
        fn(grid.index(ix, iy == grid.ny() - 1 ? grid.ny() - 2 : iy + 1), ihy2);
        diag += -2.0 * ihy2;
    }
    fn(grid.index(ix, iy), diag);
}

} // namespace

NewtonResult newton_solve(const ModelSpec& model, const Grid& grid, Field U, Field V,
                          double tol, int max_iters) {
    check_conforming(grid, U, V, "newton_solve");
    if (!(U.min() > 0.0) || !(V.min() > 0.0)) {
        throw DomainError("newton_solve: guess must be strictly positive");
    }
    const int n = grid.total();
    const int dim = 2 * n;

    auto res = steady_residual(model, grid, U, V);
    double res_norm = residual_sup(res);

    Eigen::SparseMatrix<double> J(dim, dim);
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs(dim), delta(dim);

    for (int iter = 1; iter <= max_iters; ++iter) {
        if (res_norm < tol) {
            return {make_solution(model, grid, std::move(U), std::move(V), res_norm, iter - 1),
                    std::nullopt};
        }

        trips.clear();
        for (int iy = 0; iy < grid.ny(); ++iy) {
            for (int ix = 0; ix < grid.nx(); ++ix) {
                const int id = grid.index(ix, iy);
                const double ui = U.values[id];
                const double vi = V.values[id];
                for_each_laplacian_entry(grid, ix, iy, [&](int j, double coeff) {
                    trips.emplace_back(2 * id, 2 * j, model.d1 * coeff);
                    trips.emplace_back(2 * id + 1, 2 * j + 1, model.d2 * coeff);
                });
                trips.emplace_back(2 * id, 2 * id, model.ru_du(ui, vi));
                trips.emplace_back(2 * id, 2 * id + 1, model.ru_dv(ui, vi));
                trips.emplace_back(2 * id + 1, 2 * id, model.rv_du(ui, vi));
                trips.emplace_back(2 * id + 1, 2 * id + 1, model.rv_dv(ui, vi));
                rhs[2 * id] = -res.first.values[id];
                rhs[2 * id + 1] = -res.second.values[id];
            }
        }
        J.setFromTriplets(trips.begin(), trips.end());

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            return {std::nullopt,
                    NewtonFailure{NewtonFailure::Reason::Stagnated, iter, res_norm,
                                  "singular Jacobian"}};
        }
        delta = lu.solve(rhs);

        // Line search: halve until the residual sup-norm decreases.
        double step = 1.0;
        bool improved = false;
        Field U_try, V_try;
        std::pair<Field, Field> res_try;
        double res_try_norm = 0.0;
        for (int halving = 0; halving <= 30; ++halving) {
            U_try = U;
            V_try = V;
            for (int id = 0; id < n; ++id) {
                U_try.values[id] += step * delta[2 * id];
                V_try.values[id] += step * delta[2 * id + 1];
            }
            if (U_try.all_finite() && V_try.all_finite()) {
                res_try = steady_residual(model, grid, U_try, V_try);
                res_try_norm = residual_sup(res_try);
                if (res_try_norm < res_norm) {
                    improved = true;
                    break;
                }
            }
            step /= 2.0;
        }
        if (!improved) {
            return {std::nullopt,
                    NewtonFailure{NewtonFailure::Reason::Stagnated, iter, res_norm,
                                  "line search found no residual decrease"}};
        }
        U = std::move(U_try);
        V = std::move(V_try);
        res = std::move(res_try);
        res_norm = res_try_norm;

        if (U.min() <= 0.0 || V.min() <= 0.0) {
            return {std::nullopt,
                    NewtonFailure{NewtonFailure::Reason::PositivityLoss, iter, res_norm,
                                  "iterate left the positive cone"}};
        }
    }
    if (res_norm < tol) {
        return {make_solution(model, grid, std::move(U), std::move(V), res_norm, max_iters),
                std::nullopt};
    }
    return {std::nullopt,
            NewtonFailure{NewtonFailure::Reason::MaxIters, max_iters, res_norm,
                          "residual still above tol"}};
}

namespace {

// Exact constant states (boundary equilibria included) verified by residual.
void add_constant_states(const ModelSpec& model, const Grid& grid, double tol,
                         std::vector<SteadySolution>& out) {
    for (const auto& eq : find_constant_equilibria(model)) {
        Field U(grid.total(), eq.u, "u");
        Field V(grid.total(), eq.v, "v");
        const double res = residual_sup(steady_residual(model, grid, U, V));
        if (res < tol) {
            out.push_back(make_solution(model, grid, std::move(U), std::move(V), res, 0));
        }
    }
}

bool same_solution(const SteadySolution& a, const SteadySolution& b) {
    if (std::abs(a.at_c - b.at_c) > 1e-15 * (1.0 + std::abs(a.at_c))) return false;
    return sup_distance(a.u, b.u) < 1e-6 && sup_distance(a.v, b.v) < 1e-6;
}

void dedup_insert(std::vector<SteadySolution>& sols, SteadySolution cand) {
    for (const auto& s : sols) {
        if (same_solution(s, cand)) return;
    }
    sols.push_back(std::move(cand));
}

std::vector<std::pair<Field, Field>> eigenmode_seeds(const ModelSpec& model, const Grid& grid) {
    std::vector<std::pair<Field, Field>> seeds;
    std::vector<Equilibrium> interior;
    for (const auto& eq : find_constant_equilibria(model)) {
        if (eq.kind == EquilibriumKind::PositiveInterior && !eq.degenerate) interior.push_back(eq);
    }
    const double amps[] = {0.01, 0.1, 0.3};
    for (const auto& eq : interior) {
        for (int axis = 0; axis < grid.dim; ++axis) {
            for (int j = 1; j <= 5; ++j) {
                for (double amp : amps) {
                    for (double sign : {1.0, -1.0}) {
                        Field U(grid.total(), 0.0, "u");
                        Field V(grid.total(), 0.0, "v");
                        for (int iy = 0; iy < grid.ny(); ++iy) {
                            for (int ix = 0; ix < grid.nx(); ++ix) {
                                const double coord = axis == 0 ? grid.x(ix) : grid.y(iy);
                                const double mode =
                                    std::cos(j * M_PI * coord / grid.length[axis]);
                                const int id = grid.index(ix, iy);
                                U.values[id] = eq.u * (1.0 + sign * amp * mode);
                                V.values[id] = eq.v * (1.0 - sign * amp * mode);
                            }
                        }
                        seeds.emplace_back(std::move(U), std::move(V));
                    }
                }
            }
        }
    }
    return seeds;
}

std::vector<std::pair<Field, Field>> multistart_seeds(const ModelSpec& model, const Grid& grid,
                                                      int count, std::uint64_t seed) {
    std::vector<std::pair<Field, Field>> seeds;
    if (count <= 0) return seeds;

    double u_scale = compute_prey_capacity(model) / 2.0;
    double v_scale = std::max(model.f(0.0), compute_v0(model)) / 2.0;
    for (const auto& eq : find_constant_equilibria(model)) {
        if (eq.kind == EquilibriumKind::PositiveInterior) {
            u_scale = eq.u;
            v_scale = eq.v;
            break;
        }
    }
    v_scale = std::max(v_scale, 1e-3);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> base(0.3, 1.5);
    std::uniform_real_distribution<double> coeff(-0.3, 0.3);
    for (int k = 0; k < count; ++k) {
        Field U(grid.total(), 0.0, "u");
        Field V(grid.total(), 0.0, "v");
        // low-frequency random fields, clamped positive
        double bu = base(rng) * u_scale, bv = base(rng) * v_scale;
        double cu[4], cv[4];
        for (int j = 0; j < 4; ++j) {
            cu[j] = coeff(rng) * bu;
            cv[j] = coeff(rng) * bv;
        }
        for (int iy = 0; iy < grid.ny(); ++iy) {
            for (int ix = 0; ix < grid.nx(); ++ix) {
                const int id = grid.index(ix, iy);
                double su = bu, sv = bv;
                for (int j = 1; j <= 4; ++j) {
                    const double mx = std::cos(j * M_PI * grid.x(ix) / grid.length[0]);
                    su += cu[j - 1] * mx;
                    sv += cv[j - 1] * mx;
                    if (grid.dim == 2) {
                        const double my = std::cos(j * M_PI * grid.y(iy) / grid.length[1]);
                        su += 0.5 * cu[j - 1] * my;
                        sv += 0.5 * cv[j - 1] * my;
                    }
                }
                U.values[id] = std::max(su, 0.05 * u_scale);
                V.values[id] = std::max(sv, 0.05 * v_scale);
            }
        }
        seeds.emplace_back(std::move(U), std::move(V));
    }
    return seeds;
}

} // namespace

SearchResult search_steady_states(const ModelSpec& model, const Grid& grid,
                                  const SearchOptions& opts) {
    SearchResult result;

    if (opts.strategy == SearchStrategy::Continuation) {
        if (!(opts.c_max >= opts.c_min) || opts.c_steps < 1) {
            throw DomainError("continuation needs c_min <= c_max and steps >= 1");
        }
        ModelSpec m = model;
        m.c = opts.c_min;
        std::optional<std::pair<Field, Field>> guess;
        for (const auto& eq : find_constant_equilibria(m)) {
            if (eq.kind == EquilibriumKind::PositiveInterior) {
                guess = {Field(grid.total(), eq.u, "u"), Field(grid.total(), eq.v, "v")};
                break;
            }
        }
        for (int s = 0; s <= opts.c_steps; ++s) {
            m.c = opts.c_min + (opts.c_max - opts.c_min) * s / opts.c_steps;
            if (!guess) {
                result.continuation_failures.push_back(m.c);
                break;
            }
            auto r = newton_solve(m, grid, guess->first, guess->second, opts.newton_tol,
                                  opts.newton_max_iters);
            if (r.ok()) {
                guess = {r.solution->u, r.solution->v};
                dedup_insert(result.solutions, std::move(*r.solution));
            } else {
                result.continuation_failures.push_back(m.c);
                ++result.newton_failures;
                break;  // branch lost (fold or positivity loss)
            }
        }
        return result;
    }

    std::vector<SteadySolution> constants;
    add_constant_states(model, grid, opts.newton_tol, constants);
    for (auto& s : constants) dedup_insert(result.solutions, std::move(s));

    std::vector<std::pair<Field, Field>> seeds;
    if (opts.strategy == SearchStrategy::Eigenmode || opts.include_eigenmode) {
        auto es = eigenmode_seeds(model, grid);
        std::move(es.begin(), es.end(), std::back_inserter(seeds));
    }
    if (opts.strategy == SearchStrategy::Multistart) {
        auto ms = multistart_seeds(model, grid, opts.multistart_n, opts.seed);
        std::move(ms.begin(), ms.end(), std::back_inserter(seeds));
    }

    for (auto& [U, V] : seeds) {
        if (!(U.min() > 0.0) || !(V.min() > 0.0)) continue;
        auto r = newton_solve(model, grid, std::move(U), std::move(V), opts.newton_tol,
                              opts.newton_max_iters);
        if (r.ok()) {
            dedup_insert(result.solutions, std::move(*r.solution));
        } else {
            ++result.newton_failures;
        }
    }
    return result;
}

TransformedModel transform_to_rho(const ModelSpec& model) {
    if (!(model.c > 0.0)) throw DomainError("transform_to_rho requires c > 0");
    return TransformedModel{model, 1.0 / model.c};
}

TransformedModel rho_zero_limit(const ModelSpec& model) { return TransformedModel{model, 0.0}; }

std::pair<Field, Field> transformed_steady_residual(const TransformedModel& tm, const Grid& grid,
                                                    const Field& W, const Field& V) {
    check_conforming(grid, W, V, "transformed_steady_residual");
    Field rw = apply_laplacian(grid, W);
    Field rv = apply_laplacian(grid, V);
    for (size_t i = 0; i < W.values.size(); ++i) {
        rw.values[i] = tm.base.d1 * rw.values[i] + tm.w_reaction(W.values[i], V.values[i]);
        rv.values[i] = tm.base.d2 * rv.values[i] + tm.v_reaction(W.values[i], V.values[i]);
    }
    rw.name = "residual_w";
    rv.name = "residual_v";
    return {std::move(rw), std::move(rv)};
}

double lyapunov_G(const TransformedModel& tm, const Grid& grid, const Field& W, const Field& V) {
    check_conforming(grid, W, V, "lyapunov_G");
    if (tm.rho != 0.0) throw DomainError("lyapunov_G is defined for the rho=0 system");
    if (!(W.min() > 0.0) || !(V.min() > 0.0)) {
        throw DomainError("lyapunov_G requires strictly positive fields");
    }
    const ModelSpec& m = tm.base;
    const double f0 = m.f(0.0);
    if (!(m.h(f0) < 0.0)) throw AssumptionError("lyapunov_G requires h(f(0)) < 0");
    {
        // A4 gate, closed-form per family
        const auto rep = check_assumptions(
            m, std::max({2.0, 2.0 * f0, 2.0 * compute_v0(m)}) + 1.0, 256);
        if (rep.a4 != Verdict::Pass) throw AssumptionError("lyapunov_G requires (A4)");
    }
    const double ws = tm.w_star();
    const double vs = tm.v_star();

    // gradient terms on edge midpoints
    double grad_term = 0.0;
    auto edge_sum = [&](const Field& F, double dcoef, double star) {
        double acc = 0.0;
        for (int iy = 0; iy < grid.ny(); ++iy) {
            const double wy = grid.dim == 2
                                  ? grid.spacing[1] * ((iy == 0 || iy == grid.ny() - 1) ? 0.5 : 1.0)
                                  : 1.0;
            for (int ix = 0; ix + 1 < grid.nx(); ++ix) {
                const double df = (F.values[grid.index(ix + 1, iy)] - F.values[grid.index(ix, iy)]) /
                                  grid.spacing[0];
                const double mid = 0.5 * (F.values[grid.index(ix + 1, iy)] + F.values[grid.index(ix, iy)]);
                acc += wy * grid.spacing[0] * df * df / (mid * mid);
            }
        }
        if (grid.dim == 2) {
            for (int ix = 0; ix < grid.nx(); ++ix) {
                const double wx = grid.spacing[0] * ((ix == 0 || ix == grid.nx() - 1) ? 0.5 : 1.0);
                for (int iy = 0; iy + 1 < grid.ny(); ++iy) {
                    const double df =
                        (F.values[grid.index(ix, iy + 1)] - F.values[grid.index(ix, iy)]) /
                        grid.spacing[1];
                    const double mid =
                        0.5 * (F.values[grid.index(ix, iy + 1)] + F.values[grid.index(ix, iy)]);
                    acc += wx * grid.spacing[1] * df * df / (mid * mid);
                }
            }
        }
        return dcoef * star * acc;
    };
    grad_term = edge_sum(W, m.d1, ws) + edge_sum(V, m.d2, vs);

    // zero-order term on nodes (trapezoid)
    double react_term = 0.0;
    const double hvs = m.h(vs);
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            const double v = V.values[grid.index(ix, iy)];
            react_term += grid.weight(ix, iy) * (v - vs) * (m.h(v) - hvs);
        }
    }
    return -grad_term + react_term;
}

double harnack_ratio(const Field& field) {
    if (!(field.min() > 0.0)) throw DomainError("harnack_ratio requires a strictly positive field");
    return field.max() / field.min();
}

} // namespace predprey
