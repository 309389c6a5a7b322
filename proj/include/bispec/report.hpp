#pragma once

#include "bispec/geometry.hpp"
#include "bispec/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bispec {

enum class Relation { Equal, AtLeast };

/// One checked identity or bound.
///
/// Equal:   pass = |measured − expected| <= tolerance
/// AtLeast: pass = measured >= expected − tolerance
///
/// Checks whose hypothesis does not hold for the subject are marked
/// `expected_failure`; they are reported as xfail/xpass and never make a
/// report fail.
struct CheckEntry {
    std::string name;
    std::string claim_ref;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::Equal;
    bool pass = false;
    bool expected_failure = false;
    std::optional<std::string> measured_exact;
    std::optional<std::string> expected_exact;

    /// pass as implied by (measured, expected, tolerance, relation)
    bool recompute() const;
    std::string_view status() const; // "pass", "fail", "xfail" or "xpass"
};

CheckEntry numeric_check(std::string name, std::string claim_ref, double measured, double expected,
    double tolerance, Relation relation);

/// Zero-tolerance check decided in rational arithmetic.
CheckEntry exact_check(std::string name, std::string claim_ref, const Rational& measured, const Rational& expected,
    Relation relation);

struct ConvergenceRecord {
    std::string family;
    std::string quantity;
    std::vector<int> levels;          // generator resolution per level
    std::vector<double> h;            // max ambient edge length per level
    std::vector<double> values;
    std::vector<int> multiplicities;  // cluster size of the tracked eigenvalue (0 if n/a)
    std::optional<double> reference;  // known limit used for the rate, if any
    std::vector<double> rates;        // one per consecutive triple (or pair vs reference)
    double estimated_rate = 0.0;
    double extrapolated = 0.0;        // order-2 Richardson from the two finest levels
    bool reliable = true;             // false if the error sequence is not monotone
    bool flagged = false;             // |estimated_rate − 2| > 0.5
};

struct VerificationReport {
    HypersurfaceSpec spec = make_great_sphere(1);
    std::string mesh = "analytic"; // or a mesh descriptor such as "torus grid=64"
    std::vector<CheckEntry> checks;
    std::optional<ConvergenceRecord> convergence;

    /// No check has status "fail".
    bool ok() const;
};

} // namespace bispec
