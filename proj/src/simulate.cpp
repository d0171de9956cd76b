#include "predprey/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

namespace predprey {

std::string to_string(SimClass c) {
    switch (c) {
    case SimClass::ConvergedToConstant: return "converged-to-constant";
    case SimClass::ConvergedToPredatorOnly: return "converged-to-(0,v0)-type";
    case SimClass::ConvergedToPreyOnly: return "converged-to-(a,0)-type";
    case SimClass::NonconstantAttractorSuspected: return "nonconstant-attractor-suspected";
    case SimClass::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
}

std::pair<Field, Field> make_initial_condition(const Grid& grid, const ICSpec& ic) {
    std::mt19937_64 rng(ic.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Field u(grid.total(), ic.base_u, "u");
    Field v(grid.total(), ic.base_v, "v");
    switch (ic.kind) {
    case ICSpec::Kind::ConstantNoise:
        for (auto& x : u.values) x = ic.base_u * (1.0 + ic.amplitude * unit(rng));
        for (auto& x : v.values) x = ic.base_v * (1.0 + ic.amplitude * unit(rng));
        break;
    case ICSpec::Kind::Bump: {
        for (int iy = 0; iy < grid.ny(); ++iy) {
            for (int ix = 0; ix < grid.nx(); ++ix) {
                double r2 = std::pow(grid.x(ix) - grid.length[0] / 2.0, 2);
                double w2 = std::pow(grid.length[0] / 10.0, 2);
                if (grid.dim == 2) {
                    r2 += std::pow(grid.y(iy) - grid.length[1] / 2.0, 2);
                    w2 += std::pow(grid.length[1] / 10.0, 2);
                }
                const double bump = std::exp(-r2 / (2.0 * w2));
                u.values[grid.index(ix, iy)] = ic.base_u * (1.0 + ic.amplitude * bump);
                v.values[grid.index(ix, iy)] = ic.base_v * (1.0 + ic.amplitude * bump);
            }
        }
        break;
    }
    case ICSpec::Kind::RandomPositive: {
        const double lo = std::max(0.01, 1.0 - ic.amplitude);
        const double hi = 1.0 + ic.amplitude;
        std::uniform_real_distribution<double> span(lo, hi);
        for (auto& x : u.values) x = ic.base_u * span(rng);
        for (auto& x : v.values) x = ic.base_v * span(rng);
        break;
    }
    }
    return {std::move(u), std::move(v)};
}

namespace {

// Thomas solve of (I - alpha Lap) x = rhs on one 1D line with mirror-ghost
// Neumann rows: first/last off-diagonal entries are -2 alpha.
void solve_line(double alpha, std::vector<double>& rhs, std::vector<double>& scratch) {
    const int n = static_cast<int>(rhs.size());
    const double diag = 1.0 + 2.0 * alpha;
    auto upper = [&](int i) { return i == 0 ? -2.0 * alpha : -alpha; };
    auto lower = [&](int i) { return i == n - 1 ? -2.0 * alpha : -alpha; };

    scratch.resize(n);
    double bet = diag;
    rhs[0] /= bet;
    for (int i = 1; i < n; ++i) {
        scratch[i] = upper(i - 1) / bet;
        bet = diag - lower(i) * scratch[i];
        rhs[i] = (rhs[i] - lower(i) * rhs[i - 1]) / bet;
    }
    for (int i = n - 2; i >= 0; --i) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

} // namespace

void diffuse_implicit(const Grid& grid, Field& field, double D, double dt) {
    if (field.values.size() != static_cast<size_t>(grid.total())) {
        throw DomainError("diffuse_implicit: field does not conform to grid");
    }
    std::vector<double> line, scratch;
    const int nx = grid.nx();
    const int ny = grid.ny();

    const double ax = dt * D / (grid.spacing[0] * grid.spacing[0]);
    line.resize(nx);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) line[ix] = field.values[grid.index(ix, iy)];
        solve_line(ax, line, scratch);
        for (int ix = 0; ix < nx; ++ix) field.values[grid.index(ix, iy)] = line[ix];
    }
    if (grid.dim == 2) {
        const double ay = dt * D / (grid.spacing[1] * grid.spacing[1]);
        line.resize(ny);
        for (int ix = 0; ix < nx; ++ix) {
            for (int iy = 0; iy < ny; ++iy) line[iy] = field.values[grid.index(ix, iy)];
            solve_line(ay, line, scratch);
            for (int iy = 0; iy < ny; ++iy) field.values[grid.index(ix, iy)] = line[iy];
        }
    }
}

namespace {

double sampled_reaction_lipschitz(const ModelSpec& model, const Field& u, const Field& v) {
    const double pad_u = 0.1 * (u.max() - u.min()) + 1e-6;
    const double pad_v = 0.1 * (v.max() - v.min()) + 1e-6;
    return reaction_lipschitz(
        [&](double a, double b) { return model.ru_du(a, b); },
        [&](double a, double b) { return model.ru_dv(a, b); },
        [&](double a, double b) { return model.rv_du(a, b); },
        [&](double a, double b) { return model.rv_dv(a, b); },
        std::max(0.0, u.min() - pad_u), u.max() + pad_u,
        std::max(0.0, v.min() - pad_v), v.max() + pad_v, 32);
}

struct BoxCheck {
    bool inside;
    double violation;
};

BoxCheck check_box(const BoundsBox& box, const Field& u, const Field& v) {
    const double viol = std::max({box.u_low - u.min(), u.max() - box.u_high,
                                  box.v_low - v.min(), v.max() - box.v_high});
    return {viol <= kBoxFaceTol, std::max(0.0, viol)};
}

void emit_row(std::ostream& os, double t, const Field& u, const Field& v,
              const std::optional<std::pair<double, double>>& target, double change_rate) {
    double dist = std::numeric_limits<double>::quiet_NaN();
    if (target) {
        dist = 0.0;
        for (double x : u.values) dist = std::max(dist, std::abs(x - target->first));
        for (double x : v.values) dist = std::max(dist, std::abs(x - target->second));
    }
    os << t << ',' << u.min() << ',' << u.max() << ',' << u.mean() << ',' << v.min() << ','
       << v.max() << ',' << v.mean() << ',' << u.stddev() << ',' << v.stddev() << ',' << dist
       << ',' << change_rate << '\n';
}

} // namespace

SimOutcome simulate(const ModelSpec& model, const Grid& grid, const ICSpec& ic,
                    const SimOptions& opt) {
    auto [u0, v0] = make_initial_condition(grid, ic);
    return simulate(model, grid, std::move(u0), std::move(v0), opt);
}

SimOutcome simulate(const ModelSpec& model, const Grid& grid, Field u, Field v,
                    const SimOptions& opt) {
    const auto n = static_cast<size_t>(grid.total());
    if (u.values.size() != n || v.values.size() != n) {
        throw DomainError("simulate: initial fields do not conform to grid");
    }
    if (!u.all_finite() || !v.all_finite()) throw DomainError("simulate: non-finite initial data");
    if (u.min() < 0.0 || v.min() < 0.0) throw DomainError("simulate: initial data must be nonnegative");
    if (!(u.max() > 0.0) || !(v.max() > 0.0)) {
        throw DomainError("simulate: initial data must not be identically zero");
    }
    if (!(opt.dt > 0.0) || !(opt.t_end > 0.0)) throw DomainError("simulate: dt and t_end must be positive");
    u.name = "u";
    v.name = "v";

    SimOutcome out;
    out.u_min_over_time = u.min();
    out.u_max_over_time = u.max();
    out.v_min_over_time = v.min();
    out.v_max_over_time = v.max();

    if (opt.series) {
        opt.series->precision(12);
        *opt.series << "time,u_min,u_max,u_mean,v_min,v_max,v_mean,u_std,v_std,dist_target,change_rate\n";
        emit_row(*opt.series, 0.0, u, v, opt.target, 0.0);
    }
    if (opt.box) {
        if (check_box(*opt.box, u, v).inside) out.box_entry_time = 0.0;
    }

    double t = 0.0;
    double dt_eff = std::min(opt.dt, opt.reaction_dt_safety /
                                         std::max(1e-12, sampled_reaction_lipschitz(model, u, v)));
    double next_output = opt.output_interval;
    double change_rate = std::numeric_limits<double>::infinity();

    std::vector<double> k1u(n), k1v(n), k2u(n), k2v(n), su(n), sv(n);

    while (t < opt.t_end) {
        if (out.steps % 100 == 0 && out.steps > 0) {
            dt_eff = std::min(opt.dt, opt.reaction_dt_safety /
                                          std::max(1e-12, sampled_reaction_lipschitz(model, u, v)));
        }
        double dt_step = std::min(dt_eff, opt.t_end - t);

        bool accepted = false;
        Field u_new, v_new;
        for (int halving = 0; halving <= 20; ++halving) {
            // explicit Heun reaction step
            for (size_t i = 0; i < n; ++i) {
                k1u[i] = model.reaction_u(u.values[i], v.values[i]);
                k1v[i] = model.reaction_v(u.values[i], v.values[i]);
                su[i] = u.values[i] + dt_step * k1u[i];
                sv[i] = v.values[i] + dt_step * k1v[i];
            }
            for (size_t i = 0; i < n; ++i) {
                k2u[i] = model.reaction_u(su[i], sv[i]);
                k2v[i] = model.reaction_v(su[i], sv[i]);
            }
            u_new = u;
            v_new = v;
            for (size_t i = 0; i < n; ++i) {
                u_new.values[i] += 0.5 * dt_step * (k1u[i] + k2u[i]);
                v_new.values[i] += 0.5 * dt_step * (k1v[i] + k2v[i]);
            }
            // implicit diffusion
            diffuse_implicit(grid, u_new, model.d1, dt_step);
            diffuse_implicit(grid, v_new, model.d2, dt_step);

            if (!u_new.all_finite() || !v_new.all_finite()) {
                throw NumericalError("simulate: non-finite field value at t=" + std::to_string(t));
            }
            if (u_new.min() >= 0.0 && v_new.min() >= 0.0) {
                accepted = true;
                break;
            }
            ++out.rejections;
            if (halving == 20) {
                throw NumericalError("simulate: positivity could not be restored after 20 dt "
                                     "halvings at t=" + std::to_string(t));
            }
            dt_step /= 2.0;
            dt_eff = dt_step;  // stay conservative until the next policy refresh
        }
        (void)accepted;

        change_rate = 0.0;
        for (size_t i = 0; i < n; ++i) {
            change_rate = std::max(change_rate, std::abs(u_new.values[i] - u.values[i]));
            change_rate = std::max(change_rate, std::abs(v_new.values[i] - v.values[i]));
        }
        change_rate /= dt_step;

        u = std::move(u_new);
        v = std::move(v_new);
        t += dt_step;
        ++out.steps;

        out.u_min_over_time = std::min(out.u_min_over_time, u.min());
        out.u_max_over_time = std::max(out.u_max_over_time, u.max());
        out.v_min_over_time = std::min(out.v_min_over_time, v.min());
        out.v_max_over_time = std::max(out.v_max_over_time, v.max());

        if (opt.box) {
            const BoxCheck bc = check_box(*opt.box, u, v);
            if (!out.box_entry_time && bc.inside) out.box_entry_time = t;
            if (out.box_entry_time && t > *out.box_entry_time && !bc.inside) {
                out.box_exit_after_entry = true;
                out.box_worst_violation = std::max(out.box_worst_violation, bc.violation);
            }
        }

        const bool at_output = t >= next_output - 1e-12 || t >= opt.t_end;
        if (at_output) {
            while (next_output <= t + 1e-12) next_output += opt.output_interval;
            if (opt.series) emit_row(*opt.series, t, u, v, opt.target, change_rate);

            if (change_rate < kChangeRateTol) {
                const bool const_u = u.stddev() < kConstantStdTol * (1.0 + std::abs(u.mean()));
                const bool const_v = v.stddev() < kConstantStdTol * (1.0 + std::abs(v.mean()));
                if (const_u && const_v) {
                    if (u.max() < kBoundaryZeroTol) {
                        out.cls = SimClass::ConvergedToPredatorOnly;
                    } else if (v.max() < kBoundaryZeroTol) {
                        out.cls = SimClass::ConvergedToPreyOnly;
                    } else {
                        out.cls = SimClass::ConvergedToConstant;
                    }
                    break;
                }
                if (u.stddev() > kPatternStdTol * (1.0 + std::abs(u.mean())) ||
                    v.stddev() > kPatternStdTol * (1.0 + std::abs(v.mean()))) {
                    out.cls = SimClass::NonconstantAttractorSuspected;
                    break;
                }
                // ambiguous zone: keep integrating
            }
        }
    }

    out.u = std::move(u);
    out.v = std::move(v);
    out.t_reached = t;
    out.final_change_rate = change_rate;
    return out;
}

} // namespace predprey
