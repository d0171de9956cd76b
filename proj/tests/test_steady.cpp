#include <doctest.h>

#include <cmath>
#include <random>

#include "predprey/equilibria.hpp"
#include "predprey/steady.hpp"

#include "models.hpp"
#include "oracle.hpp"

using namespace predprey;
using testmodels::canonical;

namespace {

std::pair<double, double> interior_point(const ModelSpec& m) {
    for (const auto& eq : find_constant_equilibria(m)) {
        if (eq.kind == EquilibriumKind::PositiveInterior) return {eq.u, eq.v};
    }
    throw std::runtime_error("no interior equilibrium");
}

Field random_positive_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> span(lo, hi);
    Field f(g.total(), 0.0);
    for (auto& x : f.values) x = span(rng);
    return f;
}

oracle::SteadyOracleInput oracle_input(const ModelSpec& m, const Grid& g) {
    oracle::SteadyOracleInput in;
    in.nx = g.nx();
    in.ny = g.ny();
    in.hx = g.spacing[0];
    in.hy = g.spacing[1];
    in.d1 = m.d1;
    in.d2 = m.d2;
    in.reaction_u = [&m](double u, double v) { return m.g(u) * (m.f(u) - v); };
    in.reaction_v = [&m](double u, double v) { return v * (m.h(v) + m.c * m.g(u)); };
    return in;
}

} // namespace

TEST_CASE("steady residual vanishes at constant equilibria") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {101});
    const auto [us, vs] = interior_point(m);
    auto r = steady_residual(m, g, Field(g.total(), us), Field(g.total(), vs));
    for (double x : r.first.values) CHECK(std::abs(x) < 1e-12);
    for (double x : r.second.values) CHECK(std::abs(x) < 1e-12);

    // prey-only steady state (a, 0)
    auto r2 = steady_residual(m, g, Field(g.total(), 2.0), Field(g.total(), 0.0));
    for (double x : r2.first.values) CHECK(std::abs(x) < 1e-12);
    for (double x : r2.second.values) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("steady residual equals an independent direct evaluation") {
    std::mt19937_64 rng(31);
    for (const Grid& g : {build_grid(1, {1.0}, {67}), build_grid(2, {1.0, 0.8}, {17, 13})}) {
        const ModelSpec m = canonical(0.3, 0.02, 0.05);
        const auto in = oracle_input(m, g);
        std::vector<double> ru_ref, rv_ref;
        for (int trial = 0; trial < 50; ++trial) {
            const Field U = random_positive_field(g, rng, 0.1, 2.4);
            const Field V = random_positive_field(g, rng, 0.1, 2.4);
            const auto r = steady_residual(m, g, U, V);
            oracle::steady_residual_direct(in, U.values, V.values, ru_ref, rv_ref);
            for (size_t i = 0; i < ru_ref.size(); ++i) {
                CHECK(std::abs(r.first.values[i] - ru_ref[i]) < 1e-12 * (1.0 + std::abs(ru_ref[i])));
                CHECK(std::abs(r.second.values[i] - rv_ref[i]) < 1e-12 * (1.0 + std::abs(rv_ref[i])));
            }
        }
    }
}

TEST_CASE("newton from the constant equilibrium returns immediately") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {101});
    const auto [us, vs] = interior_point(m);
    const auto r = newton_solve(m, g, Field(g.total(), us), Field(g.total(), vs), 1e-10, 10);
    REQUIRE(r.ok());
    CHECK(r.solution->newton_iters <= 2);
    CHECK(r.solution->constant);
    CHECK(r.solution->strictly_positive);
    CHECK(r.solution->apriori_u_ok);
}

TEST_CASE("newton pulls a perturbed guess back to the constant solution") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {101});
    const auto [us, vs] = interior_point(m);
    Field U(g.total(), us), V(g.total(), vs);
    for (int i = 0; i < g.nx(); ++i) {
        U.values[i] *= 1.0 + 0.01 * std::cos(2.0 * M_PI * g.x(i));
        V.values[i] *= 1.0 - 0.01 * std::cos(2.0 * M_PI * g.x(i));
    }
    const auto r = newton_solve(m, g, U, V, 1e-11, 40);
    REQUIRE(r.ok());
    CHECK(r.solution->residual_sup < 1e-11);
    CHECK(r.solution->u.stddev() < 1e-10);
    CHECK(r.solution->v.stddev() < 1e-10);
    CHECK(std::abs(r.solution->u.mean() - us) < 1e-8);
}

TEST_CASE("newton rejects a nonpositive guess") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {31});
    Field U(g.total(), 1.0), V(g.total(), 1.0);
    U.values[4] = -0.3;
    CHECK_THROWS_AS(newton_solve(m, g, U, V, 1e-10, 10), DomainError);
}

TEST_CASE("search finds only the constant solutions in the certified small-c regime") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {101});
    SearchOptions opts;
    opts.strategy = SearchStrategy::Multistart;
    opts.include_eigenmode = true;
    opts.multistart_n = 10;
    opts.seed = 3;
    const SearchResult res = search_steady_states(m, g, opts);
    REQUIRE(!res.solutions.empty());
    const auto [us, vs] = interior_point(m);
    int positives = 0;
    for (const auto& s : res.solutions) {
        CHECK(s.residual_sup < opts.newton_tol);
        CHECK(s.apriori_u_ok);
        if (s.strictly_positive) {
            ++positives;
            CHECK(s.constant);
            CHECK(std::abs(s.u.mean() - us) < 1e-8);
            CHECK(std::abs(s.v.mean() - vs) < 1e-8);
        }
    }
    CHECK(positives == 1);
}

TEST_CASE("empty multistart keeps only the constant-seeded results") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {41});
    SearchOptions opts;
    opts.strategy = SearchStrategy::Multistart;
    opts.multistart_n = 0;
    const SearchResult res = search_steady_states(m, g, opts);
    const auto eqs = find_constant_equilibria(m);
    CHECK(res.solutions.size() == eqs.size());
    for (const auto& s : res.solutions) CHECK(s.constant);
}

TEST_CASE("continuation tracks the constant branch as c grows") {
    const ModelSpec m = canonical(0.05);
    const Grid g = build_grid(1, {1.0}, {61});
    SearchOptions opts;
    opts.strategy = SearchStrategy::Continuation;
    opts.c_min = 0.05;
    opts.c_max = 1.0;
    opts.c_steps = 19;
    const SearchResult res = search_steady_states(m, g, opts);
    CHECK(res.continuation_failures.empty());
    CHECK(res.solutions.size() == 20);
    for (const auto& s : res.solutions) {
        CHECK(s.constant);
        CHECK(s.strictly_positive);
        CHECK(s.harnack_u < 1.0 + 1e-8);  // ratios stay bounded along the branch
        CHECK(s.harnack_v < 1.0 + 1e-8);
        ModelSpec mc = m;
        mc.c = s.at_c;
        const auto [us, vs] = interior_point(mc);
        CHECK(std::abs(s.u.mean() - us) < 1e-8);
        CHECK(std::abs(s.v.mean() - vs) < 1e-8);
    }
}

TEST_CASE("transform scales u by c and keeps residuals consistent") {
    const ModelSpec m = canonical(2.0);
    const TransformedModel tm = transform_to_rho(m);
    CHECK(tm.rho == doctest::Approx(0.5).epsilon(1e-15));

    const Grid g = build_grid(1, {1.0}, {41});
    Field U(g.total(), 0.5);
    Field W = U;
    for (auto& x : W.values) x *= m.c;
    CHECK(W.values[0] == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Field Ur = random_positive_field(g, rng, 0.05, 2.2);
        const Field Vr = random_positive_field(g, rng, 0.05, 2.2);
        Field Wr = Ur;
        for (auto& x : Wr.values) x *= m.c;
        const auto direct = steady_residual(m, g, Ur, Vr);
        const auto transformed = transformed_steady_residual(tm, g, Wr, Vr);
        for (size_t i = 0; i < Ur.values.size(); ++i) {
            // w-residual = c x u-residual; v-residual identical
            CHECK(std::abs(transformed.first.values[i] - m.c * direct.first.values[i]) <
                  1e-12 * (1.0 + std::abs(direct.first.values[i])));
            CHECK(std::abs(transformed.second.values[i] - direct.second.values[i]) <
                  1e-12 * (1.0 + std::abs(direct.second.values[i])));
        }
    }
    CHECK_THROWS_AS(transform_to_rho(canonical(0.0)), DomainError);
}

TEST_CASE("rho=0 limit reduces the w-reaction to w g'(0) (f(0) - v)") {
    const ModelSpec m = canonical(0.1);
    const TransformedModel tm = rho_zero_limit(m);
    const double gp0 = m.g.deriv(0.0);
    const double f0 = m.f(0.0);
    for (double w : {0.1, 1.0, 3.0}) {
        for (double v : {0.2, 1.0, 2.5}) {
            CHECK(tm.w_reaction(w, v) ==
                  doctest::Approx(w * gp0 * (f0 - v)).epsilon(1e-14));
        }
    }
}

TEST_CASE("lyapunov functional: zero at the constant pair, negative elsewhere") {
    const ModelSpec m = canonical(0.1);
    const TransformedModel tm = rho_zero_limit(m);
    // (w*, v*) = (-h(f(0))/g'(0), f(0)) = (1, 2)
    CHECK(tm.w_star() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tm.v_star() == doctest::Approx(2.0).epsilon(1e-14));

    const Grid g = build_grid(1, {1.0}, {101});
    const Field Wstar(g.total(), tm.w_star());
    const Field Vstar(g.total(), tm.v_star());
    CHECK(std::abs(lyapunov_G(tm, g, Wstar, Vstar)) < 1e-12);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        Field W = random_positive_field(g, rng, 0.2, 3.0);
        Field V = random_positive_field(g, rng, 0.2, 3.0);
        if (W.stddev() < 1e-12) W.values[0] += 0.5;  // keep the pair nonconstant
        CHECK(lyapunov_G(tm, g, W, V) < 0.0);
    }

    // equality forces spatial flatness: a nonconstant perturbation of either
    // field at the constant pair drives G strictly negative
    Field Wp = Wstar;
    for (int i = 0; i < g.nx(); ++i) Wp.values[i] += 0.05 * std::cos(M_PI * g.x(i));
    CHECK(lyapunov_G(tm, g, Wp, Vstar) < -1e-8);
    Field Vp = Vstar;
    for (int i = 0; i < g.nx(); ++i) Vp.values[i] += 0.05 * std::cos(M_PI * g.x(i));
    CHECK(lyapunov_G(tm, g, Wstar, Vp) < -1e-8);
}

TEST_CASE("lyapunov functional preconditions") {
    const ModelSpec m = canonical(0.1);
    const TransformedModel tm = rho_zero_limit(m);
    const Grid g = build_grid(1, {1.0}, {21});
    Field W(g.total(), 1.0), V(g.total(), 2.0);
    Field bad = W;
    bad.values[2] = 0.0;
    CHECK_THROWS_AS(lyapunov_G(tm, g, bad, V), DomainError);
    CHECK_THROWS_AS(lyapunov_G(transform_to_rho(m), g, W, V), DomainError);  // rho != 0

    // A4 fails: weak-Allee h with f(0) < d - p
    const ModelSpec nofour = testmodels::weakallee_h_model(2.0, 1.0, 1.0, 4.0, 1.0);
    CHECK_THROWS_AS(lyapunov_G(rho_zero_limit(nofour), g, W, V), AssumptionError);
}

TEST_CASE("harnack ratio") {
    const Grid g = build_grid(1, {1.0}, {101});
    CHECK(harnack_ratio(Field(g.total(), 2.5)) == 1.0);

    Field f(g.total(), 0.0);
    for (int i = 0; i < g.nx(); ++i) f.values[i] = 1.0 + 0.5 * std::cos(M_PI * g.x(i));
    CHECK(harnack_ratio(f) == doctest::Approx(3.0).epsilon(1e-12));

    Field zero(g.total(), 0.0);
    CHECK_THROWS_AS(harnack_ratio(zero), DomainError);
}

TEST_CASE("eigenmode search resolves genuine patterns on a Turing-unstable instance") {
    const ModelSpec m = testmodels::turing_instance();
    const Grid g = build_grid(1, {1.0}, {201});
    SearchOptions opts;
    opts.strategy = SearchStrategy::Eigenmode;
    const SearchResult res = search_steady_states(m, g, opts);

    int nonconstant_positive = 0;
    for (const auto& s : res.solutions) {
        CHECK(s.residual_sup < opts.newton_tol);
        CHECK(s.apriori_u_ok);  // discrete max principle: u <= a + 1e-6
        if (s.strictly_positive && !s.constant) {
            ++nonconstant_positive;
            CHECK(s.harnack_u > 1.05);  // visibly nonflat
            CHECK(s.u.min() > 0.0);
            CHECK(s.v.min() > 0.0);
        }
    }
    CHECK(nonconstant_positive >= 1);
}

TEST_CASE("boundary state (0,d) is reported when no positive state survives") {
    // a < b d with a large conversion rate: only (0, d)-type remains
    const ModelSpec m = testmodels::dl_model(2.0, 1.0, 1.0, 2.1, 50.0);
    const Grid g = build_grid(1, {1.0}, {61});
    SearchOptions opts;
    opts.strategy = SearchStrategy::Multistart;
    opts.include_eigenmode = true;
    opts.multistart_n = 10;
    const SearchResult res = search_steady_states(m, g, opts);
    bool found_predator_only = false;
    for (const auto& s : res.solutions) {
        CHECK(!s.strictly_positive);
        if (s.constant && s.u.max() < 1e-9 && std::abs(s.v.mean() - 2.1) < 1e-9) {
            found_predator_only = true;
        }
    }
    CHECK(found_predator_only);
}
