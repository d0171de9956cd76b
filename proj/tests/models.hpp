#pragma once

// Model instances shared across the test suites.

#include "predprey/kinetics.hpp"

namespace testmodels {

using namespace predprey;

// f = (1+u)(2-u), g = u/(1+u), h = 1-v. Interior equilibrium at c=0 is the
// golden ratio; the running instance of most suites.
inline ModelSpec canonical(double c = 0.1, double d1 = 0.01, double d2 = 0.01) {
    ModelSpec m;
    m.f.family = PreyFamily::Holling2Logistic;
    m.f.a = 2.0;
    m.f.b = 1.0;
    m.f.m = 1.0;
    m.g.family = ResponseFamily::Holling2;
    m.g.b = 1.0;
    m.g.m = 1.0;
    m.h.family = PredatorFamily::Logistic;
    m.h.beta = 1.0;
    m.h.d = 1.0;
    m.c = c;
    m.d1 = d1;
    m.d2 = d2;
    m.validate();
    return m;
}

// m = 0 degenerate: f = 2-u (case I), g = u.
inline ModelSpec linear_case1(double c = 0.1) {
    ModelSpec m = canonical(c);
    m.f.m = 0.0;
    m.g.m = 0.0;
    m.validate();
    return m;
}

// The (DL) parameterization: f=(1+mu)(a-u)/b, g=bu/(1+mu), h=d-v, c=e/b.
inline ModelSpec dl_model(double a, double b, double mm, double d, double e, double d1 = 0.01,
                          double d2 = 0.01) {
    ModelSpec m;
    m.f.family = PreyFamily::Holling2Logistic;
    m.f.a = a;
    m.f.b = b;
    m.f.m = mm;
    m.g.family = ResponseFamily::Holling2;
    m.g.b = b;
    m.g.m = mm;
    m.h.family = PredatorFamily::Logistic;
    m.h.beta = 1.0;
    m.h.d = d;
    m.c = e / b;
    m.d1 = d1;
    m.d2 = d2;
    m.validate();
    return m;
}

// Steep-hump instance with an exact interior equilibrium at (0.5, 9) that is
// stable to uniform perturbations but Turing-unstable at d2/d1 = 100.
inline ModelSpec turing_instance() {
    ModelSpec m;
    m.f.family = PreyFamily::Holling2Logistic;
    m.f.a = 2.0;
    m.f.b = 1.0;
    m.f.m = 10.0;
    m.g.family = ResponseFamily::Holling2;
    m.g.b = 1.0;
    m.g.m = 10.0;
    m.h.family = PredatorFamily::Logistic;
    m.h.beta = 1.0;
    m.h.d = -18.5;
    m.c = 330.0;
    m.d1 = 0.001;
    m.d2 = 0.1;
    m.validate();
    return m;
}

inline ModelSpec weakallee_h_model(double a = 2.0, double b = 1.0, double mm = 1.0,
                                   double d = 1.0, double p = 0.5, double e = 0.05) {
    ModelSpec m;
    m.f.family = PreyFamily::Holling2Logistic;
    m.f.a = a;
    m.f.b = b;
    m.f.m = mm;
    m.g.family = ResponseFamily::Holling2;
    m.g.b = b;
    m.g.m = mm;
    m.h.family = PredatorFamily::WeakAllee;
    m.h.beta = 1.0;
    m.h.d = d;
    m.h.p = p;
    m.c = e / b;
    m.d1 = 0.01;
    m.d2 = 0.01;
    m.validate();
    return m;
}

// Holling-IV response with a strong-Allee predator (group defense model).
inline ModelSpec strongallee_h4_model(double a = 3.0, double b = 1.0, double n = 1.0,
                                      double mm = 1.0, double d = 1.0, double p = 0.5,
                                      double e = 500.0) {
    ModelSpec m;
    m.f.family = PreyFamily::Holling4Logistic;
    m.f.a = a;
    m.f.b = b;
    m.f.m = mm;
    m.f.n = n;
    m.f.gamma = 1.0;
    m.g.family = ResponseFamily::Holling4;
    m.g.b = b;
    m.g.m = mm;
    m.g.n = n;
    m.h.family = PredatorFamily::StrongAllee;
    m.h.beta = 1.0;
    m.h.d = d;
    m.h.p = p;
    m.c = e / b;
    m.d1 = 0.01;
    m.d2 = 0.01;
    m.validate();
    return m;
}

inline ModelSpec ivlev_model(double a = 2.0, double alpha = 1.0, double beta = 1.0,
                             double gamma = 1.0, double d = 1.0, double c = 0.1) {
    ModelSpec m;
    m.f.family = PreyFamily::LogisticIvlev;
    m.f.a = a;
    m.f.alpha = alpha;
    m.f.beta = beta;
    m.f.gamma = gamma;
    m.g.family = ResponseFamily::Ivlev;
    m.g.alpha = alpha;
    m.g.beta = beta;
    m.h.family = PredatorFamily::Logistic;
    m.h.beta = 1.0;
    m.h.d = d;
    m.c = c;
    m.d1 = 0.01;
    m.d2 = 0.01;
    m.validate();
    return m;
}

inline ModelSpec richards_model(double a = 4.0, double b = 1.0, double mm = 0.5, double p = 2.0,
                                double gamma = 1.0, double d = 1.0, double c = 0.1) {
    ModelSpec m;
    m.f.family = PreyFamily::Richards;
    m.f.a = a;
    m.f.b = b;
    m.f.m = mm;
    m.f.p = p;
    m.f.gamma = gamma;
    m.g.family = ResponseFamily::Holling2;
    m.g.b = b;
    m.g.m = mm;
    m.h.family = PredatorFamily::Logistic;
    m.h.beta = 1.0;
    m.h.d = d;
    m.c = c;
    m.d1 = 0.01;
    m.d2 = 0.01;
    m.validate();
    return m;
}

} // namespace testmodels
