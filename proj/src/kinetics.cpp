#include "predprey/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace predprey {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ConfigError(std::string("parameter ") + name + " must be positive and finite");
    }
}

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ConfigError(std::string("parameter ") + name + " must be >= 0 and finite");
    }
}

// Ivlev saturation 1 - e^{-beta u}, accurate near zero.
inline double sat(double beta, double u) { return -std::expm1(-beta * u); }

} // namespace

// ---------------------------------------------------------------- PreyKinetics

double PreyKinetics::operator()(double u) const {
    switch (family) {
    case PreyFamily::Richards:
        return gamma * (1.0 + m * u) * (a - std::pow(u, p)) / b;
    case PreyFamily::WeakAllee:
        return gamma * (1.0 + m * u) * (a - u) * (u + p) / b;
    case PreyFamily::LogisticIvlev:
        if (u == 0.0) return a * gamma / (alpha * beta);  // limit value, Ivlev pairing
        return gamma * u * (a - u) / (alpha * sat(beta, u));
    case PreyFamily::Holling2Logistic:
        return (1.0 + m * u) * (a - u) / b;
    case PreyFamily::Holling4Logistic:
        return gamma * (1.0 + n * u + m * u * u) * (a - u) / b;
    }
    return 0.0;
}

double PreyKinetics::deriv(double u) const {
    switch (family) {
    case PreyFamily::Richards: {
        const double upm1 = (p == 1.0) ? 1.0 : std::pow(u, p - 1.0);
        return gamma * (m * (a - std::pow(u, p)) - (1.0 + m * u) * p * upm1) / b;
    }
    case PreyFamily::WeakAllee:
        return gamma * (m * (a - u) * (u + p) + (1.0 + m * u) * (a - p - 2.0 * u)) / b;
    case PreyFamily::LogisticIvlev: {
        if (u < 1e-6) {
            // series about 0: f'(u) = (gamma/(alpha beta))[(a beta/2 - 1) + u beta (a beta/6 - 1)] + O(u^2)
            return gamma / (alpha * beta) *
                   ((a * beta / 2.0 - 1.0) + u * beta * (a * beta / 6.0 - 1.0));
        }
        const double s = sat(beta, u);
        const double sp = beta * std::exp(-beta * u);
        return gamma * ((a - 2.0 * u) * s - u * (a - u) * sp) / (alpha * s * s);
    }
    case PreyFamily::Holling2Logistic:
        return (m * a - 1.0 - 2.0 * m * u) / b;
    case PreyFamily::Holling4Logistic:
        return gamma * ((n + 2.0 * m * u) * (a - u) - (1.0 + n * u + m * u * u)) / b;
    }
    return 0.0;
}

double PreyKinetics::capacity() const {
    if (family == PreyFamily::Richards) return std::pow(a, 1.0 / p);
    return a;
}

void PreyKinetics::validate() const {
    require_positive(a, "f.a");
    switch (family) {
    case PreyFamily::Richards:
        require_positive(b, "f.b");
        require_nonnegative(m, "f.m");
        require_positive(gamma, "f.gamma");
        if (!(p >= 1.0)) throw ConfigError("Richards growth requires exponent f.p >= 1");
        break;
    case PreyFamily::WeakAllee:
        require_positive(b, "f.b");
        require_nonnegative(m, "f.m");
        require_positive(gamma, "f.gamma");
        require_positive(p, "f.p");
        if (!(a > p)) throw ConfigError("weak-Allee prey growth requires f.a > f.p");
        break;
    case PreyFamily::LogisticIvlev:
        require_positive(gamma, "f.gamma");
        require_positive(alpha, "f.alpha");
        require_positive(beta, "f.beta");
        break;
    case PreyFamily::Holling2Logistic:
        require_positive(b, "f.b");
        require_nonnegative(m, "f.m");
        break;
    case PreyFamily::Holling4Logistic:
        require_positive(b, "f.b");
        require_positive(m, "f.m");
        require_positive(n, "f.n");
        require_positive(gamma, "f.gamma");
        break;
    }
}

// ------------------------------------------------------------ ResponseKinetics

double ResponseKinetics::operator()(double u) const {
    switch (family) {
    case ResponseFamily::Holling2:
        return b * u / (1.0 + m * u);
    case ResponseFamily::Holling4:
        return b * u / (1.0 + n * u + m * u * u);
    case ResponseFamily::Ivlev:
        return alpha * sat(beta, u);
    }
    return 0.0;
}

double ResponseKinetics::deriv(double u) const {
    switch (family) {
    case ResponseFamily::Holling2: {
        const double den = 1.0 + m * u;
        return b / (den * den);
    }
    case ResponseFamily::Holling4: {
        const double den = 1.0 + n * u + m * u * u;
        return b * (1.0 - m * u * u) / (den * den);
    }
    case ResponseFamily::Ivlev:
        return alpha * beta * std::exp(-beta * u);
    }
    return 0.0;
}

double ResponseKinetics::q(double u) const {
    switch (family) {
    case ResponseFamily::Holling2:
        return b / (1.0 + m * u);
    case ResponseFamily::Holling4:
        return b / (1.0 + n * u + m * u * u);
    case ResponseFamily::Ivlev:
        if (u == 0.0) return alpha * beta;  // g'(0)
        return alpha * sat(beta, u) / u;
    }
    return 0.0;
}

double ResponseKinetics::q_deriv(double u) const {
    switch (family) {
    case ResponseFamily::Holling2: {
        const double den = 1.0 + m * u;
        return -b * m / (den * den);
    }
    case ResponseFamily::Holling4: {
        const double den = 1.0 + n * u + m * u * u;
        return -b * (n + 2.0 * m * u) / (den * den);
    }
    case ResponseFamily::Ivlev:
        if (u < 1e-6) {
            // series: q'(u) = alpha(-beta^2/2 + beta^3 u/3) + O(u^2)
            return alpha * (-beta * beta / 2.0 + beta * beta * beta * u / 3.0);
        }
        return alpha * (beta * std::exp(-beta * u) * u - sat(beta, u)) / (u * u);
    }
    return 0.0;
}

void ResponseKinetics::validate() const {
    switch (family) {
    case ResponseFamily::Holling2:
        require_positive(b, "g.b");
        require_nonnegative(m, "g.m");
        break;
    case ResponseFamily::Holling4:
        require_positive(b, "g.b");
        require_positive(n, "g.n");
        require_positive(m, "g.m");
        break;
    case ResponseFamily::Ivlev:
        require_positive(alpha, "g.alpha");
        require_positive(beta, "g.beta");
        break;
    }
}

// ------------------------------------------------------------ PredatorKinetics

double PredatorKinetics::operator()(double v) const {
    switch (family) {
    case PredatorFamily::Logistic:
        return beta * (d - v);
    case PredatorFamily::WeakAllee:
        return beta * (d - v) * (v + p);
    case PredatorFamily::StrongAllee:
        return beta * (d - v) * (v - p);
    case PredatorFamily::RationalStrongAllee:
        return beta * (d - v) * (v - p) / (v + r);
    }
    return 0.0;
}

double PredatorKinetics::deriv(double v) const {
    switch (family) {
    case PredatorFamily::Logistic:
        return -beta;
    case PredatorFamily::WeakAllee:
        return beta * (d - p - 2.0 * v);
    case PredatorFamily::StrongAllee:
        return beta * (d + p - 2.0 * v);
    case PredatorFamily::RationalStrongAllee: {
        const double num = (d - v) * (v - p);
        const double nump = d + p - 2.0 * v;
        const double den = v + r;
        return beta * (nump * den - num) / (den * den);
    }
    }
    return 0.0;
}

void PredatorKinetics::validate() const {
    require_positive(beta, "h.beta");
    switch (family) {
    case PredatorFamily::Logistic:
        if (!std::isfinite(d)) throw ConfigError("h.d must be finite");
        break;
    case PredatorFamily::WeakAllee:
        require_positive(p, "h.p");
        if (!(d > p)) throw ConfigError("weak-Allee predator growth requires h.d > h.p > 0");
        break;
    case PredatorFamily::StrongAllee:
        require_positive(d, "h.d");
        require_positive(p, "h.p");
        break;
    case PredatorFamily::RationalStrongAllee:
        require_positive(d, "h.d");
        require_positive(p, "h.p");
        require_positive(r, "h.r");
        break;
    }
}

// -------------------------------------------------------------------- ModelSpec

void ModelSpec::validate() const {
    f.validate();
    g.validate();
    h.validate();
    if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("conversion rate c must be >= 0");
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw ConfigError("diffusion coefficients d1, d2 must be > 0");

    // f/g pairing: the compensated prey growth and the response must share
    // their saturation parameters so f*g is the stated prey growth rate.
    auto mismatch = [](const char* what) {
        throw ConfigError(std::string("f/g pairing mismatch: ") + what);
    };
    switch (f.family) {
    case PreyFamily::Richards:
    case PreyFamily::WeakAllee:
    case PreyFamily::Holling2Logistic:
        if (g.family != ResponseFamily::Holling2) mismatch("prey family requires Holling-II response");
        if (f.b != g.b || f.m != g.m) mismatch("shared b, m must match between f and g");
        break;
    case PreyFamily::Holling4Logistic:
        if (g.family != ResponseFamily::Holling4) mismatch("prey family requires Holling-IV response");
        if (f.b != g.b || f.m != g.m || f.n != g.n) mismatch("shared b, n, m must match between f and g");
        break;
    case PreyFamily::LogisticIvlev:
        if (g.family != ResponseFamily::Ivlev) mismatch("prey family requires Ivlev response");
        if (f.alpha != g.alpha || f.beta != g.beta) mismatch("shared alpha, beta must match between f and g");
        break;
    }
}

// ------------------------------------------------------------------ operations

Component component_from_string(const std::string& s) {
    if (s == "f") return Component::F;
    if (s == "g") return Component::G;
    if (s == "h") return Component::H;
    if (s == "q") return Component::Q;
    throw ConfigError("unknown kinetics component '" + s + "' (expected f, g, h or q)");
}

static void check_domain(double x) {
    if (!std::isfinite(x)) throw DomainError("kinetics argument must be finite");
    if (x < 0.0) throw DomainError("kinetics argument must be >= 0");
}

double eval_kinetics(const ModelSpec& model, Component which, double x) {
    check_domain(x);
    switch (which) {
    case Component::F: return model.f(x);
    case Component::G: return model.g(x);
    case Component::H: return model.h(x);
    case Component::Q: return model.g.q(x);
    }
    return 0.0;
}

double eval_derivative(const ModelSpec& model, Component which, double x) {
    check_domain(x);
    switch (which) {
    case Component::F: return model.f.deriv(x);
    case Component::G: return model.g.deriv(x);
    case Component::H: return model.h.deriv(x);
    case Component::Q: return model.g.q_deriv(x);
    }
    return 0.0;
}

double eval_H(const ModelSpec& model, double u) {
    check_domain(u);
    return model.H(u);
}

namespace detail {

double bisect(const std::function<double(double)>& fn, double lo, double hi, double width) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NumericalError("bisect: no sign change on bracket");
    for (int it = 0; it < 200 && (hi - lo) > width; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double find_positive_zero(const std::function<double(double)>& fn, double hint) {
    double upper = std::max(2.0 * hint, 1.0);
    const int n = 4096;
    for (int expand = 0; expand < 12; ++expand) {
        double prev_u = upper / n;
        double prev_f = fn(prev_u);
        for (int i = 2; i <= n; ++i) {
            const double u = upper * i / n;
            const double fu = fn(u);
            if (prev_f > 0.0 && fu <= 0.0) {
                double root = bisect(fn, prev_u, u, 1e-15 * std::max(1.0, upper));
                // Snap to the closed-form hint when it nails the zero at least as well.
                if (std::abs(fn(hint)) <= std::abs(fn(root))) root = hint;
                return root;
            }
            prev_u = u;
            prev_f = fu;
        }
        if (prev_f < 0.0) break;  // positive everywhere then negative tail never seen
        upper *= 2.0;
    }
    throw AssumptionError("no positive zero of f found on the search interval (A1' violated)");
}

} // namespace detail

double compute_prey_capacity(const ModelSpec& model) {
    const double hint = model.f.capacity();
    return detail::find_positive_zero([&](double u) { return model.f(u); }, hint);
}

double compute_v0(const ModelSpec& model) {
    const auto& h = model.h;
    switch (h.family) {
    case PredatorFamily::Logistic:
        return h.d >= 0.0 ? h.d : 0.0;
    case PredatorFamily::WeakAllee:
        return h.d;  // roots d and -p
    case PredatorFamily::StrongAllee:
    case PredatorFamily::RationalStrongAllee:
        return std::max(h.d, h.p);
    }
    return 0.0;
}

double predator_capacity(const ModelSpec& model) {
    const auto& h = model.h;
    if (h.family == PredatorFamily::Logistic) {
        if (h.d <= 0.0) throw AssumptionError("logistic h with d <= 0 has no positive zero (A3 fails)");
        return h.d;
    }
    if (h.family == PredatorFamily::WeakAllee) return h.d;
    throw AssumptionError("h family has h(0) < 0; no A3-type zero");
}

double h_inverse(const ModelSpec& model, double y) {
    if (!(y <= 0.0)) throw DomainError("h_inverse defined for y <= 0 only");
    const auto& h = model.h;
    if (h.family == PredatorFamily::Logistic) {
        if (h.d <= 0.0) throw AssumptionError("h_inverse requires A3 (logistic d > 0)");
        return h.d - y / h.beta;
    }
    const double d = predator_capacity(model);
    double hi = d + 1.0;
    int guard = 0;
    while (h(hi) > y) {
        hi = d + (hi - d) * 2.0;
        if (++guard > 200) throw NumericalError("h_inverse: could not bracket target value");
    }
    return detail::bisect([&](double v) { return h(v) - y; }, d, hi, 1e-14 * std::max(1.0, hi));
}

} // namespace predprey
