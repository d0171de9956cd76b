#pragma once

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "predprey/kinetics.hpp"

namespace predprey {

enum class EquilibriumKind { PositiveInterior, PreyOnly, PredatorOnly, Extinction };

std::string to_string(EquilibriumKind k);

struct Equilibrium {
    double u = 0.0;
    double v = 0.0;
    EquilibriumKind kind = EquilibriumKind::Extinction;
    // Reaction Jacobian at (u, v), row-major [du/du, du/dv, dv/du, dv/dv].
    std::array<double, 4> jacobian{};
    bool degenerate = false;  // H touches zero without a sign change
};

/// All constant equilibria: every sign-change bracket of H on (0, a) refined
/// by bisection to width 1e-12 and Newton-polished, plus the boundary states
/// (a, 0), (0, each nonnegative root of h) and (0, 0).
std::vector<Equilibrium> find_constant_equilibria(const ModelSpec& model, int scan_points = 20000);

struct DispersionReport {
    std::vector<double> k;
    std::vector<std::complex<double>> lambda1;  // larger real part
    std::vector<std::complex<double>> lambda2;
    std::vector<double> growth;                 // max Re at each k
    bool stable_at_zero = false;
    bool turing_unstable = false;
    std::optional<std::pair<double, double>> unstable_band;
};

/// Eigenvalues of J - diag(d1, d2) k^2 on a uniform k-grid (k=0 included).
/// Turing-unstable iff some k>0 grows while k=0 is stable.
DispersionReport dispersion(const ModelSpec& model, const Equilibrium& eq, double k_max, int n_k);

/// Computable small-conversion-rate uniqueness threshold.
struct SmallCCertificate {
    double c1 = 0.0;             // sup{c : h(f(0)) < -c g(a)} = -h(f(0))/g(a)
    int case_tag = 1;            // 1: f' < 0 on (0,a]; 2: interior maximizer
    double interval_left = 0.0;  // lambda-bar (case I) or lambda-tilde (case II)
    double min_hf_prime = 0.0;   // min over [interval_left, a] of [h(f(u))]'
    double max_g_prime = 0.0;    // max over [interval_left, a] of g'(u)
    double ratio = 0.0;          // min_hf_prime / max_g_prime
    double c0 = 0.0;             // (1 - delta) min{c1, ratio}, delta = 1e-3
    bool valid = false;          // min_hf_prime > 0; otherwise the bound is vacuous
};

inline constexpr double kSmallCShrink = 1e-3;

/// Certify a conversion-rate range on which the monotone iteration's limits
/// must coincide. Requires A1, A2, A3 and f(0) > d; throws AssumptionError
/// otherwise.
SmallCCertificate certify_small_c(const ModelSpec& model, int samples = 10000);

/// Explicit constants of the large-a proposition for the Holling-II model:
/// a1 = b(d + e/m), a2 = max{a1, 1/m}, a3 = (b e + 1)/m, a0 = max{a1,a2,a3}.
struct LargeAThresholds {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a0 = 0.0;
};

LargeAThresholds holling2_large_a_threshold(double b, double d, double e, double m);

} // namespace predprey
