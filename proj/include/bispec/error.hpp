#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bispec {

// Bad user input: out-of-range parameters, wrong arity, malformed files.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Mesh with a simplex whose measure is below the degeneracy threshold.
class DegenerateMesh : public std::runtime_error {
public:
    DegenerateMesh(const std::string& what, long simplex)
        : std::runtime_error(what), simplex_(simplex) {}
    long simplex() const noexcept { return simplex_; }

private:
    long simplex_;
};

// Problem size exceeds a desk-scale resource guard.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Eigensolver hit its iteration cap. Carries the best residuals seen.
class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, std::vector<double> best_residuals)
        : std::runtime_error(what), best_residuals_(std::move(best_residuals)) {}
    const std::vector<double>& best_residuals() const noexcept { return best_residuals_; }

private:
    std::vector<double> best_residuals_;
};

} // namespace bispec
