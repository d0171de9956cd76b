#include <doctest.h>

#include <cmath>
#include <random>

#include "predprey/equilibria.hpp"
#include "predprey/simulate.hpp"

#include "models.hpp"
#include "oracle.hpp"

using namespace predprey;
using testmodels::canonical;

TEST_CASE("grid spacing arithmetic") {
    const Grid g1 = build_grid(1, {1.0}, {201});
    CHECK(g1.spacing[0] == doctest::Approx(0.005).epsilon(1e-15));
    const Grid g2 = build_grid(2, {1.0, 2.0}, {51, 101});
    CHECK(g2.spacing[0] == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(g2.spacing[1] == doctest::Approx(0.02).epsilon(1e-15));
    CHECK_THROWS_AS(build_grid(1, {1.0}, {2}), ConfigError);
    CHECK_THROWS_AS(build_grid(1, {-1.0}, {11}), ConfigError);
    CHECK_THROWS_AS(build_grid(3, {1.0, 1.0, 1.0}, {5, 5, 5}), ConfigError);
}

TEST_CASE("laplacian of a constant field is exactly zero") {
    const Grid g = build_grid(1, {1.0}, {64});
    const Field f(g.total(), 3.7);
    const Field lap = apply_laplacian(g, f);
    for (double x : lap.values) CHECK(x == 0.0);
}

TEST_CASE("laplacian reproduces the cos(pi x) eigenfunction to second order") {
    auto max_error = [](int points) {
        const Grid g = build_grid(1, {1.0}, {points});
        Field f(g.total(), 0.0);
        for (int i = 0; i < g.nx(); ++i) f.values[i] = std::cos(M_PI * g.x(i));
        const Field lap = apply_laplacian(g, f);
        double err = 0.0;
        for (int i = 0; i < g.nx(); ++i) {
            err = std::max(err, std::abs(lap.values[i] + M_PI * M_PI * std::cos(M_PI * g.x(i))));
        }
        return err;
    };
    const double e201 = max_error(201);
    CHECK(e201 < 1e-3);
    const double e101 = max_error(101);
    CHECK(e101 / e201 >= 3.5);  // order approximately 2
}

TEST_CASE("2d laplacian eigenfunction") {
    const Grid g = build_grid(2, {1.0, 2.0}, {81, 81});
    Field f(g.total(), 0.0);
    const double lam = M_PI * M_PI * (1.0 / (1.0 * 1.0) + 1.0 / (2.0 * 2.0));
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            f.values[g.index(ix, iy)] =
                std::cos(M_PI * g.x(ix) / 1.0) * std::cos(M_PI * g.y(iy) / 2.0);
        }
    }
    const Field lap = apply_laplacian(g, f);
    double err = 0.0;
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            err = std::max(err, std::abs(lap.values[g.index(ix, iy)] +
                                         lam * f.values[g.index(ix, iy)]));
        }
    }
    CHECK(err < 5e-3);
}

TEST_CASE("discrete divergence theorem: quadrature of the laplacian vanishes") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const Grid& g : {build_grid(1, {1.0}, {157}), build_grid(2, {1.0, 0.7}, {33, 29})}) {
        Field f(g.total(), 0.0);
        for (auto& x : f.values) x = unit(rng);
        const Field lap = apply_laplacian(g, f);
        const double scale = 1.0 / (g.spacing[0] * g.spacing[0]);
        CHECK(std::abs(integrate(g, lap)) < 1e-12 * scale);
    }
}

TEST_CASE("implicit diffusion conserves mass per step to 1e-12") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.5, 2.0);
    for (const Grid& g : {build_grid(1, {1.0}, {201}), build_grid(2, {1.0, 1.0}, {41, 41})}) {
        Field f(g.total(), 0.0);
        for (auto& x : f.values) x = unit(rng);
        double mass = integrate(g, f);
        for (int step = 0; step < 1000; ++step) {
            diffuse_implicit(g, f, 0.05, 0.01);
            const double next = integrate(g, f);
            CHECK(std::abs(next - mass) < 1e-12);
            mass = next;
        }
    }
}

TEST_CASE("shape mismatches are rejected") {
    const Grid g = build_grid(1, {1.0}, {11});
    Field wrong(7, 1.0);
    CHECK_THROWS_AS(apply_laplacian(g, wrong), DomainError);
    CHECK_THROWS_AS(integrate(g, wrong), DomainError);
    CHECK_THROWS_AS(diffuse_implicit(g, wrong, 0.1, 0.1), DomainError);
}

TEST_CASE("initial data preconditions") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {21});
    SimOptions opt;
    opt.t_end = 1.0;
    opt.dt = 0.05;
    Field zero(g.total(), 0.0), pos(g.total(), 1.0), neg(g.total(), 1.0);
    neg.values[3] = -0.2;
    Field nan_field(g.total(), 1.0);
    nan_field.values[5] = std::nan("");
    CHECK_THROWS_AS(simulate(m, g, zero, pos, opt), DomainError);
    CHECK_THROWS_AS(simulate(m, g, neg, pos, opt), DomainError);
    CHECK_THROWS_AS(simulate(m, g, nan_field, pos, opt), DomainError);
}

TEST_CASE("spatially constant data stays constant and tracks the reaction ODE") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {3});  // ODE-mode grid
    const double u0 = 1.2, v0 = 0.7;
    SimOptions opt;
    opt.t_end = 10.0;
    opt.dt = 2e-4;
    opt.output_interval = 10.0;
    const SimOutcome out =
        simulate(m, g, Field(g.total(), u0, "u"), Field(g.total(), v0, "v"), opt);
    CHECK(out.t_reached == doctest::Approx(10.0).epsilon(1e-12));

    // homogeneous invariance
    CHECK(out.u.stddev() < 1e-12);
    CHECK(out.v.stddev() < 1e-12);

    // adaptive-integrator oracle for the reaction ODE
    oracle::Ode2 ode{[&](double u, double v) { return m.reaction_u(u, v); },
                     [&](double u, double v) { return m.reaction_v(u, v); }};
    const auto [u_ref, v_ref] = oracle::integrate_cash_karp(ode, u0, v0, 10.0);
    CHECK(std::abs(out.u.values[0] - u_ref) < 1e-6);
    CHECK(std::abs(out.v.values[0] - v_ref) < 1e-6);
}

TEST_CASE("noisy start converges to the constant equilibrium") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {201});
    double u_star = 0.0, v_star = 0.0;
    for (const auto& eq : find_constant_equilibria(m)) {
        if (eq.kind == EquilibriumKind::PositiveInterior) {
            u_star = eq.u;
            v_star = eq.v;
        }
    }
    ICSpec ic;
    ic.kind = ICSpec::Kind::ConstantNoise;
    ic.base_u = u_star;
    ic.base_v = v_star;
    ic.amplitude = 0.1;
    ic.seed = 42;
    SimOptions opt;
    opt.t_end = 500.0;
    opt.dt = 0.1;
    const SimOutcome out = simulate(m, g, ic, opt);
    CHECK(out.cls == SimClass::ConvergedToConstant);
    CHECK(out.u_min_over_time >= 0.0);
    CHECK(out.v_min_over_time >= 0.0);
    double dist = 0.0;
    for (double x : out.u.values) dist = std::max(dist, std::abs(x - u_star));
    for (double x : out.v.values) dist = std::max(dist, std::abs(x - v_star));
    CHECK(dist < 1e-6);
}

TEST_CASE("predator takeover at d=3 lands on (0,3)") {
    ModelSpec m = canonical(0.1);
    m.h.d = 3.0;
    const Grid g = build_grid(1, {1.0}, {101});
    ICSpec ic;
    ic.kind = ICSpec::Kind::RandomPositive;
    ic.base_u = 1.0;
    ic.base_v = 1.0;
    ic.amplitude = 0.9;
    ic.seed = 5;
    SimOptions opt;
    opt.t_end = 300.0;
    opt.dt = 0.1;
    const SimOutcome out = simulate(m, g, ic, opt);
    CHECK(out.cls == SimClass::ConvergedToPredatorOnly);
    CHECK(out.u.max() < 1e-6);
    CHECK(std::abs(out.v.mean() - 3.0) < 1e-4);
}

TEST_CASE("trajectories enter the bounds box and stay inside") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {101});
    const BoundsBox box = construct_bounds(m);
    ICSpec ic;
    ic.kind = ICSpec::Kind::RandomPositive;
    ic.base_u = 1.0;
    ic.base_v = 1.0;
    ic.amplitude = 0.9;
    ic.seed = 9;
    SimOptions opt;
    opt.t_end = 400.0;
    opt.dt = 0.1;
    opt.box = box;
    const SimOutcome out = simulate(m, g, ic, opt);
    REQUIRE(out.box_entry_time.has_value());
    CHECK(*out.box_entry_time < 400.0);
    CHECK(!out.box_exit_after_entry);
}

TEST_CASE("2d simulation relaxes to the constant state") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(2, {1.0, 1.0}, {21, 21});
    ICSpec ic;
    ic.kind = ICSpec::Kind::Bump;
    ic.base_u = 1.5;
    ic.base_v = 1.0;
    ic.amplitude = 0.3;
    SimOptions opt;
    opt.t_end = 400.0;
    opt.dt = 0.1;
    const SimOutcome out = simulate(m, g, ic, opt);
    CHECK(out.cls == SimClass::ConvergedToConstant);
    CHECK(out.u.stddev() < 1e-6);
}

TEST_CASE("oversized dt triggers rejection halvings yet the run completes") {
    ModelSpec m = canonical(0.1);
    m.h.d = 3.0;  // strong predator pull
    const Grid g = build_grid(1, {1.0}, {31});
    Field u0(g.total(), 1e-4, "u");
    Field v0(g.total(), 6.0, "v");
    SimOptions opt;
    opt.t_end = 5.0;
    opt.dt = 2.0;
    opt.reaction_dt_safety = 50.0;  // disarm the policy so the step is genuinely oversized
    const SimOutcome out = simulate(m, g, u0, v0, opt);
    CHECK(out.rejections > 0);
    CHECK(out.u_min_over_time >= 0.0);
    CHECK(out.v_min_over_time >= 0.0);
}

TEST_CASE("series CSV has the documented columns") {
    const ModelSpec m = canonical(0.1);
    const Grid g = build_grid(1, {1.0}, {31});
    std::ostringstream os;
    SimOptions opt;
    opt.t_end = 2.0;
    opt.dt = 0.1;
    opt.output_interval = 0.5;
    opt.series = &os;
    opt.target = {{1.59, 1.06}};
    ICSpec ic;
    ic.base_u = 1.0;
    ic.base_v = 1.0;
    simulate(m, g, ic, opt);
    const std::string text = os.str();
    CHECK(text.rfind("time,u_min,u_max,u_mean,v_min,v_max,v_mean,u_std,v_std,dist_target,change_rate\n", 0) == 0);
    int lines = 0;
    for (char ch : text) lines += ch == '\n' ? 1 : 0;
    CHECK(lines >= 4);
}
