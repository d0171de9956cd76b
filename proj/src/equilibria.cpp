#include "predprey/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "predprey/assumptions.hpp"

namespace predprey {

std::string to_string(EquilibriumKind k) {
    switch (k) {
    case EquilibriumKind::PositiveInterior: return "positive-interior";
    case EquilibriumKind::PreyOnly: return "prey-only";
    case EquilibriumKind::PredatorOnly: return "predator-only";
    case EquilibriumKind::Extinction: return "extinction";
    }
    return "?";
}

namespace {

std::array<double, 4> reaction_jacobian(const ModelSpec& model, double u, double v) {
    return {model.ru_du(u, v), model.ru_dv(u, v), model.rv_du(u, v), model.rv_dv(u, v)};
}

Equilibrium make_equilibrium(const ModelSpec& model, double u, double v, EquilibriumKind kind,
                             bool degenerate = false) {
    Equilibrium eq;
    eq.u = u;
    eq.v = v;
    eq.kind = kind;
    eq.jacobian = reaction_jacobian(model, u, v);
    eq.degenerate = degenerate;
    return eq;
}

// Nonnegative roots of h, closed form per family, ascending.
std::vector<double> nonnegative_h_roots(const PredatorKinetics& h) {
    std::vector<double> roots;
    switch (h.family) {
    case PredatorFamily::Logistic:
        if (h.d >= 0.0) roots.push_back(h.d);
        break;
    case PredatorFamily::WeakAllee:
        roots.push_back(h.d);
        break;
    case PredatorFamily::StrongAllee:
    case PredatorFamily::RationalStrongAllee:
        roots.push_back(std::min(h.p, h.d));
        if (h.p != h.d) roots.push_back(std::max(h.p, h.d));
        break;
    }
    return roots;
}

double polish_root(const ModelSpec& model, double u, double lo, double hi) {
    for (int it = 0; it < 3; ++it) {
        const double dH = model.H_deriv(u);
        if (dH == 0.0) break;
        const double next = u - model.H(u) / dH;
        if (next <= lo || next >= hi) break;
        u = next;
    }
    return u;
}

} // namespace

std::vector<Equilibrium> find_constant_equilibria(const ModelSpec& model, int scan_points) {
    // Needs A1' (unique capacity) and A2' basics.
    const double a = compute_prey_capacity(model);
    if (!(model.g(0.0) == 0.0) || !(model.g.deriv(0.0) > 0.0)) {
        throw AssumptionError("find_constant_equilibria requires (A2')");
    }

    std::vector<Equilibrium> out;
    const double scale = 1.0 + std::abs(model.H(a / 2.0));

    // Interior roots of H on (0, a): brackets from a uniform scan, refined by
    // bisection then Newton polish; |H| dips without a sign change are
    // reported as degenerate (tangential) roots.
    struct InteriorRoot {
        double u;
        bool degenerate;
    };
    std::vector<InteriorRoot> roots;
    const double step = a / (scan_points + 1);
    double prev_u = step;
    double prev_H = model.H(prev_u);
    for (int i = 2; i <= scan_points; ++i) {
        const double u = a * i / (scan_points + 1);
        const double Hu = model.H(u);
        if (prev_H == 0.0) {
            roots.push_back({prev_u, false});
        } else if (prev_H * Hu < 0.0) {
            double root = detail::bisect([&](double x) { return model.H(x); }, prev_u, u, 1e-12);
            roots.push_back({polish_root(model, root, prev_u, u), false});
        } else if (i > 2) {
            // tangential (touching) root: a local |H| minimum without a sign
            // change whose parabolic vertex dips to zero; confirmed by driving
            // H' to its critical point and checking |H| there
            const double before = model.H(prev_u - step);
            if (std::abs(prev_H) <= std::abs(before) && std::abs(prev_H) <= std::abs(Hu) &&
                before * Hu > 0.0) {
                const double curv = before - 2.0 * prev_H + Hu;
                if (curv != 0.0) {
                    const double vertex = prev_H - (Hu - before) * (Hu - before) / (8.0 * curv);
                    if (std::abs(vertex) < 1e-8 * scale) {
                        double uc = prev_u;
                        for (int it = 0; it < 60; ++it) {
                            const double d1 = model.H_deriv(uc);
                            const double d2 =
                                (model.H_deriv(uc + step) - model.H_deriv(uc - step)) / (2.0 * step);
                            if (d2 == 0.0) break;
                            const double next = uc - d1 / d2;
                            if (next <= prev_u - step || next >= u + step) break;
                            if (std::abs(next - uc) < 1e-14 * a) {
                                uc = next;
                                break;
                            }
                            uc = next;
                        }
                        // the positive-interior invariant caps |H(u*)| at 1e-10
                        if (std::abs(model.H(uc)) < 1e-10) {
                            roots.push_back({uc, true});
                        }
                    }
                }
            }
        }
        prev_u = u;
        prev_H = Hu;
    }
    std::sort(roots.begin(), roots.end(), [](const InteriorRoot& x, const InteriorRoot& y) { return x.u < y.u; });
    for (const auto& root : roots) {
        if (!out.empty() && std::abs(out.back().u - root.u) < 1e-10) continue;
        out.push_back(make_equilibrium(model, root.u, model.f(root.u),
                                       EquilibriumKind::PositiveInterior, root.degenerate));
    }

    out.push_back(make_equilibrium(model, a, 0.0, EquilibriumKind::PreyOnly));
    for (double v : nonnegative_h_roots(model.h)) {
        if (v > 0.0) out.push_back(make_equilibrium(model, 0.0, v, EquilibriumKind::PredatorOnly));
    }
    out.push_back(make_equilibrium(model, 0.0, 0.0, EquilibriumKind::Extinction));
    return out;
}

namespace {

// Eigenvalues of a 2x2 real matrix, larger real part first.
std::pair<std::complex<double>, std::complex<double>> eig2(double a11, double a12, double a21, double a22) {
    const double tr = a11 + a22;
    const double det = a11 * a22 - a12 * a21;
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>((tr + s) / 2.0, 0.0), std::complex<double>((tr - s) / 2.0, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(tr / 2.0, s / 2.0), std::complex<double>(tr / 2.0, -s / 2.0)};
}

} // namespace

DispersionReport dispersion(const ModelSpec& model, const Equilibrium& eq, double k_max, int n_k) {
    if (!(k_max > 0.0) || n_k < 2) throw DomainError("dispersion needs k_max > 0 and n_k >= 2");
    if (std::abs(model.reaction_u(eq.u, eq.v)) > 1e-8 || std::abs(model.reaction_v(eq.u, eq.v)) > 1e-8) {
        throw DomainError("dispersion: input is not an equilibrium of the model (residual > 1e-8)");
    }
    const auto J = reaction_jacobian(model, eq.u, eq.v);

    auto growth_at = [&](double k) {
        const double k2 = k * k;
        const auto [l1, l2] = eig2(J[0] - model.d1 * k2, J[1], J[2], J[3] - model.d2 * k2);
        return std::max(l1.real(), l2.real());
    };

    DispersionReport rep;
    rep.k.reserve(n_k);
    for (int j = 0; j < n_k; ++j) {
        const double k = k_max * j / (n_k - 1);
        const double k2 = k * k;
        const auto [l1, l2] = eig2(J[0] - model.d1 * k2, J[1], J[2], J[3] - model.d2 * k2);
        rep.k.push_back(k);
        rep.lambda1.push_back(l1);
        rep.lambda2.push_back(l2);
        rep.growth.push_back(std::max(l1.real(), l2.real()));
    }
    rep.stable_at_zero = rep.growth[0] < 0.0;

    int first_pos = -1, last_pos = -1;
    for (int j = 1; j < n_k; ++j) {
        if (rep.growth[j] > 0.0) {
            if (first_pos < 0) first_pos = j;
            last_pos = j;
        }
    }
    rep.turing_unstable = rep.stable_at_zero && first_pos >= 0;
    if (rep.turing_unstable) {
        double lo = rep.k[first_pos];
        if (first_pos > 0 && rep.growth[first_pos - 1] < 0.0) {
            lo = detail::bisect(growth_at, rep.k[first_pos - 1], rep.k[first_pos], 1e-10);
        }
        double hi = rep.k[last_pos];
        if (last_pos + 1 < n_k && rep.growth[last_pos + 1] < 0.0) {
            hi = detail::bisect(growth_at, rep.k[last_pos], rep.k[last_pos + 1], 1e-10);
        }
        rep.unstable_band = std::make_pair(lo, hi);
    }
    return rep;
}

SmallCCertificate certify_small_c(const ModelSpec& model, int samples) {
    AssumptionReport rep = check_assumptions(
        model, std::max({2.0, 2.0 * model.f(0.0), 2.0 * compute_v0(model)}) + 1.0, samples);
    if (!rep.small_c_hypotheses()) {
        throw AssumptionError("certify_small_c requires (A1), (A2), (A3)");
    }
    const double a = rep.capacity;
    const double d = *rep.predator_zero;
    const double f0 = model.f(0.0);
    if (!(f0 > d)) {
        throw AssumptionError("certify_small_c precondition failed: f(0) > d (h(f(0))<0) does not hold");
    }

    SmallCCertificate cert;
    cert.c1 = -model.h(f0) / model.g(a);
    cert.case_tag = rep.prey_case_two ? 2 : 1;

    if (cert.case_tag == 1) {
        // f(lambda-bar) = h^{-1}(-c1 g(a)) = f(0), and f is strictly decreasing,
        // so the interval-left collapses to 0.
        const double target = h_inverse(model, -cert.c1 * model.g(a));
        if (std::abs(model.f(0.0) - target) <= 1e-10 * (1.0 + std::abs(target))) {
            cert.interval_left = 0.0;
        } else {
            cert.interval_left =
                detail::bisect([&](double u) { return model.f(u) - target; }, 0.0, a);
        }
    } else {
        // lambda-tilde solves f(u) = f(0) on the descending branch (lambda, a].
        const double lambda = *rep.interior_max;
        cert.interval_left =
            detail::bisect([&](double u) { return model.f(u) - f0; }, lambda, a);
    }

    double min_hf = std::numeric_limits<double>::infinity();
    double max_gp = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        const double u = cert.interval_left + (a - cert.interval_left) * i / samples;
        min_hf = std::min(min_hf, model.h.deriv(model.f(u)) * model.f.deriv(u));
        max_gp = std::max(max_gp, model.g.deriv(u));
    }
    cert.min_hf_prime = min_hf;
    cert.max_g_prime = max_gp;
    cert.ratio = min_hf / max_gp;
    cert.valid = min_hf > 0.0;
    cert.c0 = cert.valid ? (1.0 - kSmallCShrink) * std::min(cert.c1, cert.ratio) : 0.0;
    return cert;
}

LargeAThresholds holling2_large_a_threshold(double b, double d, double e, double m) {
    for (double x : {b, d, e, m}) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw DomainError("holling2_large_a_threshold requires positive finite b, d, e, m");
        }
    }
    LargeAThresholds t;
    t.a1 = b * (d + e / m);
    t.a2 = std::max(b * (d + e / m), 1.0 / m);
    t.a3 = (b * e + 1.0) / m;
    t.a0 = std::max({t.a1, t.a2, t.a3});
    return t;
}

} // namespace predprey
