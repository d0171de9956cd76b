#pragma once

#include <functional>
#include <string>

#include "predprey/errors.hpp"

namespace predprey {

// Closed-form kinetics families. f*g is the prey growth rate without predator,
// g the functional response, h the predator per-capita growth without prey.
// Pairings share the response parameters so that f*g stays in closed form.

enum class PreyFamily {
    Richards,          // f(u) = gamma (1+m u)(a - u^p) / b,        pairs with Holling2
    WeakAllee,         // f(u) = gamma (1+m u)(a - u)(u + p) / b,   pairs with Holling2
    LogisticIvlev,     // f(u) = gamma u (a-u) / (alpha (1-e^{-beta u})), pairs with Ivlev
    Holling2Logistic,  // f(u) = (1+m u)(a - u) / b,                pairs with Holling2
    Holling4Logistic,  // f(u) = gamma (1+n u+m u^2)(a - u) / b,    pairs with Holling4
};

enum class ResponseFamily {
    Holling2,  // g(u) = b u / (1 + m u)
    Holling4,  // g(u) = b u / (1 + n u + m u^2)
    Ivlev,     // g(u) = alpha (1 - e^{-beta u})
};

enum class PredatorFamily {
    Logistic,            // h(v) = beta (d - v)
    WeakAllee,           // h(v) = beta (d - v)(v + p),  d > p > 0
    StrongAllee,         // h(v) = beta (d - v)(v - p)
    RationalStrongAllee, // h(v) = beta (d - v)(v - p) / (v + r)
};

struct PreyKinetics {
    PreyFamily family = PreyFamily::Holling2Logistic;
    double a = 2.0;
    double b = 1.0;
    double m = 0.0;
    double n = 0.0;      // Holling4Logistic only
    double p = 1.0;      // Richards exponent / WeakAllee offset
    double gamma = 1.0;
    double alpha = 1.0;  // LogisticIvlev only
    double beta = 1.0;   // LogisticIvlev only

    double operator()(double u) const;
    double deriv(double u) const;
    /// Unique positive zero of f (closed form; Richards: a^{1/p}).
    double capacity() const;
    void validate() const;
};

struct ResponseKinetics {
    ResponseFamily family = ResponseFamily::Holling2;
    double b = 1.0;
    double m = 0.0;
    double n = 0.0;      // Holling4 only
    double alpha = 1.0;  // Ivlev only
    double beta = 1.0;   // Ivlev only

    double operator()(double u) const;
    double deriv(double u) const;
    /// q(u) = g(u)/u for u>0, g'(0) at u=0.
    double q(double u) const;
    double q_deriv(double u) const;
    void validate() const;
};

struct PredatorKinetics {
    PredatorFamily family = PredatorFamily::Logistic;
    double beta = 1.0;
    double d = 1.0;  // may be <= 0 for the logistic family
    double p = 0.5;
    double r = 1.0;

    double operator()(double v) const;
    double deriv(double v) const;
    void validate() const;
};

/// One full instance of the diffusive predator-prey system:
///   u_t = d1 Lap u + g(u)(f(u) - v)
///   v_t = d2 Lap v + v (h(v) + c g(u))
struct ModelSpec {
    PreyKinetics f;
    ResponseKinetics g;
    PredatorKinetics h;
    double c = 0.0;  // conversion rate; c=0 selects the decoupled steady system
    double d1 = 1.0;
    double d2 = 1.0;

    /// Family parameter constraints plus f/g pairing consistency. Throws ConfigError.
    void validate() const;

    // Reaction terms and analytic partials. Formulas are evaluated as written,
    // extended to all finite arguments, so solver internals may probe slightly
    // outside the biological domain; the checked public surface is eval_kinetics.
    double reaction_u(double u, double v) const { return g(u) * (f(u) - v); }
    double reaction_v(double u, double v) const { return v * (h(v) + c * g(u)); }
    double ru_du(double u, double v) const { return g.deriv(u) * (f(u) - v) + g(u) * f.deriv(u); }
    double ru_dv(double u, double) const { return -g(u); }
    double rv_du(double u, double v) const { return c * v * g.deriv(u); }
    double rv_dv(double u, double v) const { return h(v) + v * h.deriv(v) + c * g(u); }

    /// H(u) = h(f(u)) + c g(u); interior equilibria are its zeros in (0, a).
    double H(double u) const { return h(f(u)) + c * g(u); }
    double H_deriv(double u) const { return h.deriv(f(u)) * f.deriv(u) + c * g.deriv(u); }

    double capacity() const { return f.capacity(); }
};

enum class Component { F, G, H, Q };

Component component_from_string(const std::string& s);

/// Checked evaluation of f/g/h/q at x >= 0. Throws DomainError on negative or
/// non-finite input. q(0) returns g'(0); the Ivlev-paired f at u=0 returns
/// the limit value a*gamma/(alpha*beta).
double eval_kinetics(const ModelSpec& model, Component which, double x);

/// Analytic derivative of the selected component, same domain checks.
double eval_derivative(const ModelSpec& model, Component which, double x);

double eval_H(const ModelSpec& model, double u);

/// The unique positive zero a of f, verified by a sign-change bracket.
/// Throws AssumptionError when f admits no positive zero.
double compute_prey_capacity(const ModelSpec& model);

/// Largest nonnegative root of h, or 0 when h has no nonnegative root.
double compute_v0(const ModelSpec& model);

/// Inverse of h on [d, infinity) for y <= 0, where d is h's positive zero
/// (requires an A3-type family). Closed form for logistic h.
double h_inverse(const ModelSpec& model, double y);

/// Zero of h on (0, infinity) for A3-type families (logistic d>0, weak Allee).
double predator_capacity(const ModelSpec& model);

namespace detail {

/// Bracket-scan + bisection for the unique positive zero of fn near `hint`.
/// Throws AssumptionError when no sign change is found.
double find_positive_zero(const std::function<double(double)>& fn, double hint);

/// Bisection on [lo, hi]; requires a sign change (or zero) at the ends.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double width = 1e-14);

} // namespace detail

} // namespace predprey
