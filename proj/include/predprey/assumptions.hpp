#pragma once

#include <optional>
#include <string>
#include <vector>

#include "predprey/kinetics.hpp"

namespace predprey {

enum class Verdict { Pass, Fail, NotApplicable };

std::string to_string(Verdict v);

/// One term of the A5 envelope sum: k v^q <= ... <= kbar v^q.
struct EnvelopeTerm {
    double exponent;
    double lower;  // k_i
    double upper;  // kbar_i
};

/// Power envelope of -h: sum k_i v^{q_i} <= -h(v) <= sum kbar_i v^{q_i} on [0, v_max].
/// Polynomial families carry exact coefficients valid for all v >= 0; the
/// rational strong-Allee form carries a degree-1 pair valid on [0, v_max].
struct PowerEnvelope {
    std::vector<EnvelopeTerm> terms;
    double v_max = 0.0;
    double lower_sum(double v) const;
    double upper_sum(double v) const;
};

/// A sample point at which a sign condition failed.
struct Witness {
    std::string assumption;
    double x = 0.0;
    double value = 0.0;
    std::string note;
};

struct AssumptionReport {
    Verdict a1 = Verdict::NotApplicable;
    Verdict a1prime = Verdict::NotApplicable;
    Verdict a2 = Verdict::NotApplicable;
    Verdict a2prime = Verdict::NotApplicable;
    Verdict a3 = Verdict::NotApplicable;
    Verdict a4 = Verdict::NotApplicable;
    Verdict a5 = Verdict::NotApplicable;

    double capacity = 0.0;                  // a, when A1' holds
    std::optional<double> interior_max;     // lambda, when A1 holds with the hump branch
    std::optional<double> predator_zero;    // d, when A3 holds
    double v0 = 0.0;
    double f_at_zero = 0.0;
    std::optional<PowerEnvelope> envelope;  // when A5 holds
    std::vector<Witness> witnesses;
    bool prey_case_two = false;             // A1 second branch (interior maximizer)

    bool small_c_hypotheses() const {
        return a1 == Verdict::Pass && a2 == Verdict::Pass && a3 == Verdict::Pass;
    }
    bool large_c_hypotheses() const {
        return a1prime == Verdict::Pass && a2prime == Verdict::Pass && a5 == Verdict::Pass;
    }
};

/// Decide every assumption for the model. Closed-form tests where the family
/// admits them, otherwise dense sign sampling (default 10^4 points) on
/// [0, max(2a, 2 v0, v_max)]. Requires v_max > v0 and v_max > f(0).
AssumptionReport check_assumptions(const ModelSpec& model, double v_max, int samples = 10000);

/// A5 envelope for the given h family (see PowerEnvelope).
PowerEnvelope predator_decay_envelope(const PredatorKinetics& h, double v_max);

/// Interior maximizer lambda of f on (0, a) when f has the hump shape,
/// nullopt when f' < 0 throughout (0, a].
std::optional<double> prey_interior_maximizer(const ModelSpec& model, int samples = 10000);

} // namespace predprey
