#include "predprey/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "predprey/assumptions.hpp"

namespace predprey {

BoundsBox construct_bounds_with_epsilon(const ModelSpec& model, double eps) {
    const double a = compute_prey_capacity(model);
    const double d = predator_capacity(model);
    if (!(eps > 0.0) || !(eps < d)) throw DomainError("construct_bounds: need 0 < eps < d");

    BoundsBox box;
    box.epsilon = eps;
    box.u_high = a + eps;
    box.v_low = d - eps;
    box.v_high = h_inverse(model, -model.c * model.g(a + eps)) + eps;

    // Largest crossing of f with the level v_high in (0, a]; scan from the
    // right so the Case II hump cannot hide it.
    const int n = 2000;
    double hi = a;
    double fhi = model.f(hi) - box.v_high;
    double lo = 0.0;
    bool bracketed = false;
    for (int i = n - 1; i >= 0; --i) {
        const double u = a * i / n;
        const double fu = model.f(u) - box.v_high;
        if (fu > 0.0 && fhi <= 0.0) {
            lo = u;
            bracketed = true;
            break;
        }
        hi = u;
        fhi = fu;
    }
    if (!bracketed) throw NumericalError("construct_bounds: f never exceeds v_high on [0, a]");
    box.abar = detail::bisect([&](double u) { return model.f(u) - box.v_high; }, lo, hi);
    box.u_low = box.abar / 2.0;

    // The coupled upper/lower inequalities, with roundoff slack.
    auto le = [](double x, double scale) { return x <= 1e-12 * (1.0 + std::abs(scale)); };
    const bool ok = le(model.f(box.u_high) - box.v_low, box.v_low) &&
                    le(model.h(box.v_high) + model.c * model.g(box.u_high), box.v_high) &&
                    le(-(model.f(box.u_low) - box.v_high), box.v_high) &&
                    le(-(model.h(box.v_low) + model.c * model.g(box.u_low)), box.v_low);
    if (!ok) throw NumericalError("construct_bounds: assembled box violates the coupled inequalities");
    return box;
}

BoundsBox construct_bounds(const ModelSpec& model) {
    AssumptionReport rep = check_assumptions(
        model, std::max({2.0, 2.0 * model.f(0.0), 2.0 * compute_v0(model)}) + 1.0);
    if (!rep.small_c_hypotheses()) {
        throw AssumptionError("construct_bounds requires (A1), (A2), (A3)");
    }
    const double a = rep.capacity;
    const double d = *rep.predator_zero;
    if (!(model.h(model.f(0.0)) < -model.c * model.g(a))) {
        throw AssumptionError("construct_bounds precondition failed: h(f(0)) < -c g(a)");
    }

    for (double eps = d / 2.0; eps > 1e-12 * d; eps /= 2.0) {
        double v_high;
        try {
            v_high = h_inverse(model, -model.c * model.g(a + eps)) + eps;
        } catch (const NumericalError&) {
            continue;
        }
        if (model.f(0.0) - v_high > 0.0) {
            return construct_bounds_with_epsilon(model, eps);
        }
    }
    throw NumericalError("construct_bounds: no feasible epsilon on the geometric grid");
}

double reaction_lipschitz(const std::function<double(double, double)>& ru_du,
                          const std::function<double(double, double)>& ru_dv,
                          const std::function<double(double, double)>& rv_du,
                          const std::function<double(double, double)>& rv_dv,
                          double u_lo, double u_hi, double v_lo, double v_hi,
                          int samples_per_axis) {
    const int n = std::max(2, samples_per_axis);
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double v = v_lo + (v_hi - v_lo) * j / (n - 1);
            const double row_u = std::abs(ru_du(u, v)) + std::abs(ru_dv(u, v));
            const double row_v = std::abs(rv_du(u, v)) + std::abs(rv_dv(u, v));
            best = std::max({best, row_u, row_v});
        }
    }
    return best;
}

double estimate_lipschitz(const ModelSpec& model, const BoundsBox& box, int samples_per_axis) {
    const double bound = reaction_lipschitz(
        [&](double u, double v) { return model.ru_du(u, v); },
        [&](double u, double v) { return model.ru_dv(u, v); },
        [&](double u, double v) { return model.rv_du(u, v); },
        [&](double u, double v) { return model.rv_dv(u, v); },
        box.u_low, box.u_high, box.v_low, box.v_high, samples_per_axis);
    return std::max(1e-8, 1.05 * bound);
}

IterationTrace monotone_iterate(const ModelSpec& model, const BoundsBox& box, double K,
                                double tol, int max_steps) {
    if (!(K > 0.0)) throw DomainError("monotone_iterate: K must be positive");
    if (!(tol > 0.0)) throw DomainError("monotone_iterate: tol must be positive");

    IterationTrace trace;
    trace.K = K;
    IterationStep cur{box.u_high, box.u_low, box.v_high, box.v_low};
    trace.steps.push_back(cur);

    constexpr double slack = 1e-13;
    // Near the uniqueness threshold the per-step change falls below tol while
    // the upper/lower gap is still contracting geometrically; once changes are
    // small we keep iterating until the gap resolves below tol or stalls at
    // its limit, so the uniqueness flag reflects the limits rather than the
    // stopping moment.
    bool changes_small = false;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < max_steps; ++m) {
        IterationStep next;
        next.u_upper = cur.u_upper + model.g(cur.u_upper) / K * (model.f(cur.u_upper) - cur.v_lower);
        next.u_lower = cur.u_lower + model.g(cur.u_lower) / K * (model.f(cur.u_lower) - cur.v_upper);
        next.v_upper = cur.v_upper + cur.v_upper / K * (model.h(cur.v_upper) + model.c * model.g(cur.u_upper));
        next.v_lower = cur.v_lower + cur.v_lower / K * (model.h(cur.v_lower) + model.c * model.g(cur.u_lower));

        const bool monotone = next.u_upper <= cur.u_upper + slack &&
                              next.u_lower >= cur.u_lower - slack &&
                              next.v_upper <= cur.v_upper + slack &&
                              next.v_lower >= cur.v_lower - slack;
        const bool ordered = next.u_lower <= next.u_upper + slack &&
                             next.v_lower <= next.v_upper + slack;
        if (!monotone || !ordered) {
            throw MonotonicityError(m + 1, "monotone_iterate: ordering violated at step " +
                                               std::to_string(m + 1) + " (invalid K or box)");
        }

        const double change = std::max({std::abs(next.u_upper - cur.u_upper),
                                        std::abs(next.u_lower - cur.u_lower),
                                        std::abs(next.v_upper - cur.v_upper),
                                        std::abs(next.v_lower - cur.v_lower)});
        cur = next;
        trace.steps.push_back(cur);
        const double gap = std::max(cur.u_upper - cur.u_lower, cur.v_upper - cur.v_lower);
        if (change < tol) changes_small = true;
        if (changes_small) {
            trace.converged = true;
            if (gap < tol) break;
            if (gap >= prev_gap * (1.0 - 1e-6)) break;  // gap no longer improving
        }
        prev_gap = gap;
    }

    trace.step_count = static_cast<int>(trace.steps.size()) - 1;
    trace.u_upper_limit = cur.u_upper;
    trace.u_lower_limit = cur.u_lower;
    trace.v_upper_limit = cur.v_upper;
    trace.v_lower_limit = cur.v_lower;
    trace.limit_residuals = {
        std::abs(model.f(cur.u_upper) - cur.v_lower),
        std::abs(model.h(cur.v_upper) + model.c * model.g(cur.u_upper)),
        std::abs(model.f(cur.u_lower) - cur.v_upper),
        std::abs(model.h(cur.v_lower) + model.c * model.g(cur.u_lower)),
    };
    trace.unique_limits = std::abs(cur.u_upper - cur.u_lower) < 10.0 * tol &&
                          std::abs(cur.v_upper - cur.v_lower) < 10.0 * tol;
    return trace;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& os) {
    os << "step,u_upper,u_lower,v_upper,v_lower\n";
    os.precision(17);
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        os << i << ',' << s.u_upper << ',' << s.u_lower << ',' << s.v_upper << ',' << s.v_lower << '\n';
    }
}

} // namespace predprey
