#include <doctest.h>

#include <cmath>
#include <random>

#include "predprey/assumptions.hpp"
#include "predprey/kinetics.hpp"

#include "models.hpp"
#include "oracle.hpp"

using namespace predprey;
using testmodels::canonical;

TEST_CASE("holling2 evaluation and q at zero") {
    const ModelSpec m = canonical();
    CHECK(eval_kinetics(m, Component::G, 0.0) == 0.0);
    CHECK(eval_kinetics(m, Component::Q, 0.0) == 1.0);  // g'(0) = b
    CHECK(eval_derivative(m, Component::G, 0.0) == 1.0);
    CHECK(eval_kinetics(m, Component::F, 0.5) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(eval_derivative(m, Component::F, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("logistic h has constant slope") {
    const ModelSpec m = canonical();
    for (double v : {0.0, 0.3, 1.0, 7.5}) {
        CHECK(eval_derivative(m, Component::H, v) == -1.0);
    }
}

TEST_CASE("domain errors on negative and non-finite input") {
    const ModelSpec m = canonical();
    CHECK_THROWS_AS(eval_kinetics(m, Component::F, -0.1), DomainError);
    CHECK_THROWS_AS(eval_kinetics(m, Component::G, std::nan("")), DomainError);
    CHECK_THROWS_AS(eval_derivative(m, Component::Q, -1.0), DomainError);
    CHECK_THROWS_AS(eval_H(m, -2.0), DomainError);
}

TEST_CASE("H values and roots for the canonical instance") {
    ModelSpec m = canonical(0.0);
    CHECK(eval_H(m, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::abs(eval_H(m, phi)) < 1e-12);

    m.c = 0.1;
    CHECK(eval_H(m, 1.58) < 0.0);
    CHECK(eval_H(m, 1.60) > 0.0);
    // frozen from the bisection oracle
    const auto roots = oracle::scan_roots([&](double u) { return m.H(u); }, 0.0, 2.0, 100000);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(1.5902323491852207).epsilon(1e-12));
}

TEST_CASE("prey capacity") {
    CHECK(compute_prey_capacity(canonical()) == 2.0);  // the parameter itself

    const ModelSpec rich = testmodels::richards_model(4.0, 1.0, 0.5, 2.0);
    CHECK(compute_prey_capacity(rich) == doctest::Approx(2.0).epsilon(1e-14));  // a^{1/p}

    // all-negative stand-in exercises the no-sign-change error path
    CHECK_THROWS_AS(detail::find_positive_zero([](double u) { return -1.0 - u; }, 1.0),
                    AssumptionError);
}

TEST_CASE("largest nonnegative root of h") {
    CHECK(compute_v0(canonical()) == 1.0);  // logistic d

    ModelSpec sa = canonical();
    sa.h.family = PredatorFamily::StrongAllee;
    sa.h.d = 1.5;
    sa.h.p = 0.5;
    CHECK(compute_v0(sa) == 1.5);  // max{d, p}

    ModelSpec none = canonical();
    none.h.d = -1.0;  // h(v) = -1 - v
    CHECK(compute_v0(none) == 0.0);
}

TEST_CASE("ivlev pair evaluates the u=0 limits") {
    const ModelSpec m = testmodels::ivlev_model(2.0, 1.5, 0.7, 1.3);
    CHECK(eval_kinetics(m, Component::F, 0.0) ==
          doctest::Approx(2.0 * 1.3 / (1.5 * 0.7)).epsilon(1e-14));
    CHECK(eval_kinetics(m, Component::Q, 0.0) == doctest::Approx(1.5 * 0.7).epsilon(1e-14));
    // continuity of f across the branch
    CHECK(eval_kinetics(m, Component::F, 1e-9) ==
          doctest::Approx(eval_kinetics(m, Component::F, 0.0)).epsilon(1e-7));
}

TEST_CASE("analytic derivatives match central differences") {
    std::vector<ModelSpec> models = {
        canonical(),
        testmodels::linear_case1(),
        testmodels::richards_model(4.0, 2.0, 0.7, 2.5, 1.3),
        testmodels::ivlev_model(2.0, 1.5, 0.7, 1.3),
        testmodels::strongallee_h4_model(),
        testmodels::weakallee_h_model(),
    };
    {
        ModelSpec wa = canonical();
        wa.f.family = PreyFamily::WeakAllee;
        wa.f.p = 0.5;
        wa.f.gamma = 1.1;
        wa.validate();
        models.push_back(wa);
    }
    std::mt19937_64 rng(2024);
    for (const auto& m : models) {
        const double a = compute_prey_capacity(m);
        std::uniform_real_distribution<double> span(1e-3, 2.0 * a);
        for (int k = 0; k < 100; ++k) {
            const double x = span(rng);
            const double h = 1e-6 * std::max(1.0, x);
            for (Component comp : {Component::F, Component::G, Component::H, Component::Q}) {
                const double fd =
                    (eval_kinetics(m, comp, x + h) - eval_kinetics(m, comp, x - h)) / (2.0 * h);
                const double an = eval_derivative(m, comp, x);
                const double scale = std::max({1e-8, std::abs(fd), std::abs(an)});
                CHECK(std::abs(an - fd) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("q times u reproduces g") {
    for (const auto& m : {canonical(), testmodels::ivlev_model(),
                          testmodels::strongallee_h4_model()}) {
        for (int i = 1; i <= 200; ++i) {
            const double u = 3.0 * i / 200.0;
            CHECK(std::abs(eval_kinetics(m, Component::Q, u) * u -
                           eval_kinetics(m, Component::G, u)) < 1e-12 * (1.0 + u));
        }
    }
}

TEST_CASE("equilibrium algebra: H root plus v=f(u) solves the predator equation") {
    const ModelSpec m = canonical(0.1);
    const auto roots = oracle::scan_roots([&](double u) { return m.H(u); }, 0.0, 2.0, 100000);
    REQUIRE(!roots.empty());
    for (double u : roots) {
        const double v = m.f(u);
        CHECK(std::abs(m.h(v) + m.c * m.g(u)) < 1e-10);
    }
}

TEST_CASE("assumption report for the canonical instance") {
    const AssumptionReport rep = check_assumptions(canonical(), 5.0);
    CHECK(rep.a1 == Verdict::Pass);
    CHECK(rep.a1prime == Verdict::Pass);
    CHECK(rep.a2 == Verdict::Pass);
    CHECK(rep.a2prime == Verdict::Pass);
    CHECK(rep.a3 == Verdict::Pass);
    CHECK(rep.a4 == Verdict::Pass);
    CHECK(rep.a5 == Verdict::Pass);
    CHECK(rep.capacity == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.prey_case_two);
    REQUIRE(rep.interior_max.has_value());
    CHECK(*rep.interior_max == doctest::Approx(0.5).epsilon(1e-9));  // f' = 1 - 2u
    REQUIRE(rep.predator_zero.has_value());
    CHECK(*rep.predator_zero == 1.0);
    CHECK(rep.v0 == 1.0);
}

TEST_CASE("holling4 response fails A2 but passes A2'") {
    const ModelSpec m = testmodels::strongallee_h4_model();  // g = u/(1+u+u^2)
    const AssumptionReport rep = check_assumptions(m, 8.0);
    CHECK(rep.a2 == Verdict::Fail);  // g' < 0 past u = 1/sqrt(m)
    CHECK(rep.a2prime == Verdict::Pass);
    bool has_a2_witness = false;
    for (const auto& w : rep.witnesses) has_a2_witness = has_a2_witness || w.assumption == "A2";
    CHECK(has_a2_witness);
}

TEST_CASE("weak-Allee predator A4 follows the f(0) vs d-p comparison") {
    // f(0) = a/b = 2
    const ModelSpec pass = testmodels::weakallee_h_model(2.0, 1.0, 1.0, 1.0, 0.5);  // d-p = 0.5 < 2
    CHECK(check_assumptions(pass, 6.0).a4 == Verdict::Pass);

    const ModelSpec fail = testmodels::weakallee_h_model(2.0, 1.0, 1.0, 4.0, 1.0);  // d-p = 3 > 2
    const AssumptionReport rep = check_assumptions(fail, 10.0);
    CHECK(rep.a4 == Verdict::Fail);
    bool has_a4_witness = false;
    for (const auto& w : rep.witnesses) has_a4_witness = has_a4_witness || w.assumption == "A4";
    CHECK(has_a4_witness);
}

TEST_CASE("A5 envelopes bound -h on the working interval") {
    std::vector<PredatorKinetics> hs;
    hs.push_back({PredatorFamily::Logistic, 1.3, 1.2, 0.5, 1.0});
    hs.push_back({PredatorFamily::Logistic, 1.0, -0.7, 0.5, 1.0});
    hs.push_back({PredatorFamily::WeakAllee, 0.8, 1.5, 0.4, 1.0});
    hs.push_back({PredatorFamily::StrongAllee, 1.1, 1.5, 0.5, 1.0});
    hs.push_back({PredatorFamily::RationalStrongAllee, 0.9, 1.4, 0.3, 0.6});
    const double v_max = 12.0;
    for (const auto& h : hs) {
        const PowerEnvelope env = predator_decay_envelope(h, v_max);
        REQUIRE(!env.terms.empty());
        CHECK(env.terms.back().exponent > 0.5);
        CHECK(env.terms.back().lower > 0.0);
        CHECK(env.terms.back().upper > 0.0);
        for (int i = 0; i <= 5000; ++i) {
            const double v = v_max * i / 5000.0;
            const double neg_h = -h(v);
            const double slack = 1e-9 * (1.0 + std::abs(neg_h));
            CHECK(env.lower_sum(v) <= neg_h + slack);
            CHECK(neg_h <= env.upper_sum(v) + slack);
        }
    }
}

TEST_CASE("model validation rejects broken pairings and parameters") {
    ModelSpec m = canonical();
    m.g.m = 2.0;  // shared m differs
    CHECK_THROWS_AS(m.validate(), ConfigError);

    ModelSpec wrong_g = canonical();
    wrong_g.g.family = ResponseFamily::Ivlev;
    CHECK_THROWS_AS(wrong_g.validate(), ConfigError);

    ModelSpec bad_h = canonical();
    bad_h.h.family = PredatorFamily::WeakAllee;
    bad_h.h.d = 0.4;
    bad_h.h.p = 0.5;  // needs d > p
    CHECK_THROWS_AS(bad_h.validate(), ConfigError);

    ModelSpec neg_c = canonical();
    neg_c.c = -0.5;
    CHECK_THROWS_AS(neg_c.validate(), ConfigError);
}

TEST_CASE("h_inverse matches the logistic closed form and the weak-Allee bisection") {
    const ModelSpec m = canonical();
    CHECK(h_inverse(m, -0.25) == doctest::Approx(1.25).epsilon(1e-14));

    const ModelSpec wa = testmodels::weakallee_h_model();
    for (double y : {-0.1, -1.0, -4.0}) {
        const double v = h_inverse(wa, y);
        CHECK(v > wa.h.d);
        CHECK(std::abs(wa.h(v) - y) < 1e-10);
    }
    CHECK_THROWS_AS(h_inverse(m, 0.5), DomainError);
}
