#include "predprey/assumptions.hpp"

#include <algorithm>
#include <cmath>

namespace predprey {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

double PowerEnvelope::lower_sum(double v) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.lower * std::pow(v, t.exponent);
    return s;
}

double PowerEnvelope::upper_sum(double v) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.upper * std::pow(v, t.exponent);
    return s;
}

PowerEnvelope predator_decay_envelope(const PredatorKinetics& h, double v_max) {
    PowerEnvelope env;
    env.v_max = v_max;
    const double beta = h.beta;
    switch (h.family) {
    case PredatorFamily::Logistic:
        // -h(v) = beta v - beta d, exact
        env.terms = {{0.0, -beta * h.d, -beta * h.d}, {1.0, beta, beta}};
        break;
    case PredatorFamily::WeakAllee:
        // -h(v) = beta [v^2 + (p-d)v - dp], exact
        env.terms = {{0.0, -beta * h.d * h.p, -beta * h.d * h.p},
                     {1.0, beta * (h.p - h.d), beta * (h.p - h.d)},
                     {2.0, beta, beta}};
        break;
    case PredatorFamily::StrongAllee:
        // -h(v) = beta [v^2 - (d+p)v + dp], exact
        env.terms = {{0.0, beta * h.d * h.p, beta * h.d * h.p},
                     {1.0, -beta * (h.d + h.p), -beta * (h.d + h.p)},
                     {2.0, beta, beta}};
        break;
    case PredatorFamily::RationalStrongAllee: {
        // -h(v) = beta[v - (d+p+r)] + beta C/(v+r), C = dp + r(d+p+r) > 0.
        // The residue term is positive and decreasing, so on [0, v_max]:
        //   beta v - beta(d+p+r) + beta C/(v_max+r) <= -h(v) <= beta v - beta(d+p+r) + beta C/r
        const double C = h.d * h.p + h.r * (h.d + h.p + h.r);
        const double base = -beta * (h.d + h.p + h.r);
        env.terms = {{0.0, base + beta * C / (v_max + h.r), base + beta * C / h.r},
                     {1.0, beta, beta}};
        break;
    }
    }
    return env;
}

namespace {

struct PreyShape {
    bool a1 = false;
    bool a1prime = false;
    bool case_two = false;
    double capacity = 0.0;
    std::optional<double> lambda;
    std::vector<Witness> witnesses;
};

PreyShape classify_prey(const ModelSpec& model, int samples) {
    PreyShape shape;
    double a;
    try {
        a = compute_prey_capacity(model);
    } catch (const AssumptionError&) {
        shape.witnesses.push_back({"A1'", 0.0, 0.0, "no positive zero of f"});
        return shape;
    }
    shape.capacity = a;

    // A1': f > 0 on [0, a), f < 0 beyond, unique zero. Sampled on (0, 2a].
    const double slack = 1e-9 * std::max(1.0, std::abs(model.f(0.0)));
    bool sign_ok = true;
    for (int i = 0; i <= samples; ++i) {
        const double u = 2.0 * a * i / samples;
        if (std::abs(u - a) < 2.0 * a / samples) continue;  // skip the zero's neighborhood
        const double fu = model.f(u);
        if (u < a && fu <= -slack) {
            shape.witnesses.push_back({"A1'", u, fu, "f not positive below capacity"});
            sign_ok = false;
            break;
        }
        if (u > a && fu >= slack) {
            shape.witnesses.push_back({"A1'", u, fu, "f not negative above capacity"});
            sign_ok = false;
            break;
        }
    }
    shape.a1prime = sign_ok;
    if (!sign_ok) return shape;

    // A1 shape: f' < 0 on (0, a], or a single + -> - derivative sign change.
    const double dslack = 1e-12 * std::max(1.0, std::abs(model.f.deriv(a)));
    int first_neg = -1;
    for (int i = 1; i <= samples; ++i) {
        const double u = a * i / samples;
        if (model.f.deriv(u) < -dslack) {
            first_neg = i;
            break;
        }
    }
    if (first_neg < 0) {
        shape.witnesses.push_back({"A1", a, model.f.deriv(a), "f' never negative on (0,a]"});
        return shape;
    }
    bool single_change = true;
    for (int i = first_neg; i <= samples; ++i) {
        const double u = a * i / samples;
        if (model.f.deriv(u) > dslack) {
            shape.witnesses.push_back({"A1", u, model.f.deriv(u), "f' turns positive again"});
            single_change = false;
            break;
        }
    }
    if (!single_change) return shape;
    if (std::abs(model.f.deriv(a)) <= dslack) {
        shape.witnesses.push_back({"A1", a, model.f.deriv(a), "plateau f'(a)=0 (reported, not resolved)"});
    }
    shape.a1 = true;
    if (first_neg > 1) {
        shape.case_two = true;
        const double lo = a * (first_neg - 1) / samples;
        const double hi = a * first_neg / samples;
        shape.lambda = detail::bisect([&](double u) { return model.f.deriv(u); }, lo, hi);
    }
    return shape;
}

} // namespace

std::optional<double> prey_interior_maximizer(const ModelSpec& model, int samples) {
    const PreyShape shape = classify_prey(model, samples);
    if (!shape.a1) throw AssumptionError("prey growth does not satisfy (A1)");
    return shape.lambda;
}

AssumptionReport check_assumptions(const ModelSpec& model, double v_max, int samples) {
    AssumptionReport rep;
    rep.f_at_zero = model.f(0.0);
    rep.v0 = compute_v0(model);
    if (!(v_max > rep.v0) || !(v_max > rep.f_at_zero)) {
        throw DomainError("check_assumptions requires v_max > v0 and v_max > f(0)");
    }

    // A1 / A1'
    const PreyShape shape = classify_prey(model, samples);
    rep.a1 = shape.a1 ? Verdict::Pass : Verdict::Fail;
    rep.a1prime = shape.a1prime ? Verdict::Pass : Verdict::Fail;
    rep.capacity = shape.capacity;
    rep.interior_max = shape.lambda;
    rep.prey_case_two = shape.case_two;
    for (const auto& w : shape.witnesses) rep.witnesses.push_back(w);
    const double a = rep.capacity > 0.0 ? rep.capacity : 1.0;
    const double u_hi = 2.0 * a;

    // A2: g' > 0 for u >= 0.  A2': g(0)=0, g'(0) > 0, g > 0 for u > 0.
    rep.a2 = Verdict::Pass;
    for (int i = 0; i <= samples; ++i) {
        const double u = u_hi * i / samples;
        if (!(model.g.deriv(u) > 0.0)) {
            rep.a2 = Verdict::Fail;
            rep.witnesses.push_back({"A2", u, model.g.deriv(u), "g' not positive"});
            break;
        }
    }
    rep.a2prime = (model.g(0.0) == 0.0 && model.g.deriv(0.0) > 0.0) ? Verdict::Pass : Verdict::Fail;
    if (rep.a2prime == Verdict::Pass) {
        for (int i = 1; i <= samples; ++i) {
            const double u = u_hi * i / samples;
            if (!(model.g(u) > 0.0)) {
                rep.a2prime = Verdict::Fail;
                rep.witnesses.push_back({"A2'", u, model.g(u), "g not positive"});
                break;
            }
        }
    }

    // A3: closed form per family.
    switch (model.h.family) {
    case PredatorFamily::Logistic:
        if (model.h.d > 0.0) {
            rep.a3 = Verdict::Pass;
            rep.predator_zero = model.h.d;
        } else {
            rep.a3 = Verdict::Fail;
            rep.witnesses.push_back({"A3", 0.0, model.h(0.0), "h(0) <= 0"});
        }
        break;
    case PredatorFamily::WeakAllee:
        rep.a3 = Verdict::Pass;  // d > p > 0 enforced by the family
        rep.predator_zero = model.h.d;
        break;
    case PredatorFamily::StrongAllee:
    case PredatorFamily::RationalStrongAllee:
        rep.a3 = Verdict::Fail;
        rep.witnesses.push_back({"A3", 0.0, model.h(0.0), "h(0) < 0"});
        break;
    }

    // A4: [h(v) - h(f(0))](v - f(0)) < 0 for v > 0, v != f(0).
    // Closed-form parameter conditions per family.
    const double f0 = rep.f_at_zero;
    bool a4 = false;
    switch (model.h.family) {
    case PredatorFamily::Logistic: a4 = true; break;
    case PredatorFamily::WeakAllee: a4 = f0 > model.h.d - model.h.p; break;
    case PredatorFamily::StrongAllee: a4 = f0 > model.h.d + model.h.p; break;
    case PredatorFamily::RationalStrongAllee:
        a4 = f0 > (model.h.d * model.h.p + model.h.d * model.h.r + model.h.p * model.h.r) / model.h.r;
        break;
    }
    rep.a4 = a4 ? Verdict::Pass : Verdict::Fail;
    if (!a4) {
        const double v_hi = std::max({v_max, 2.0 * f0, 2.0 * rep.v0});
        const double hf0 = model.h(f0);
        for (int i = 1; i <= samples; ++i) {
            const double v = v_hi * i / samples;
            if (std::abs(v - f0) < v_hi / samples) continue;
            const double prod = (model.h(v) - hf0) * (v - f0);
            if (prod >= 0.0) {
                rep.witnesses.push_back({"A4", v, prod, "[h(v)-h(f0)](v-f0) >= 0"});
                break;
            }
        }
    }

    // A5: build the family envelope and verify it on [0, v_max].
    PowerEnvelope env = predator_decay_envelope(model.h, v_max);
    bool a5 = true;
    for (int i = 0; i <= samples; ++i) {
        const double v = v_max * i / samples;
        const double neg_h = -model.h(v);
        const double slack = 1e-9 * (1.0 + std::abs(neg_h));
        if (env.lower_sum(v) > neg_h + slack || neg_h > env.upper_sum(v) + slack) {
            a5 = false;
            rep.witnesses.push_back({"A5", v, neg_h, "envelope inequality violated"});
            break;
        }
    }
    rep.a5 = a5 ? Verdict::Pass : Verdict::Fail;
    if (a5) rep.envelope = env;

    return rep;
}

} // namespace predprey
