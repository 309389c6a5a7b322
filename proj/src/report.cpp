#include "bispec/report.hpp"

#include <algorithm>
#include <cmath>

namespace bispec {

bool CheckEntry::recompute() const
{
    if (relation == Relation::Equal) return std::abs(measured - expected) <= tolerance;
    return measured >= expected - tolerance;
}

std::string_view CheckEntry::status() const
{
    if (expected_failure) return pass ? "xpass" : "xfail";
    return pass ? "pass" : "fail";
}

CheckEntry numeric_check(std::string name, std::string claim_ref, double measured, double expected, double tolerance,
    Relation relation)
{
    CheckEntry c;
    c.name = std::move(name);
    c.claim_ref = std::move(claim_ref);
    c.measured = measured;
    c.expected = expected;
    c.tolerance = tolerance;
    c.relation = relation;
    c.pass = c.recompute();
    return c;
}

CheckEntry exact_check(std::string name, std::string claim_ref, const Rational& measured, const Rational& expected,
    Relation relation)
{
    CheckEntry c;
    c.name = std::move(name);
    c.claim_ref = std::move(claim_ref);
    c.measured = measured.to_double();
    c.expected = expected.to_double();
    c.tolerance = 0.0;
    c.relation = relation;
    c.pass = relation == Relation::Equal ? measured == expected : measured >= expected;
    c.measured_exact = measured.to_string();
    c.expected_exact = expected.to_string();
    return c;
}

bool VerificationReport::ok() const
{
    return std::none_of(checks.begin(), checks.end(), [](const CheckEntry& c) { return c.status() == "fail"; });
}

} // namespace bispec
