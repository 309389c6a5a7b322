#pragma once

#include "bispec/geometry.hpp"
#include "bispec/rational.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace bispec {

enum class Problem { Laplace, BiLaplace, Buckling };

std::string_view to_string(Problem problem);
Problem problem_from_string(std::string_view name);

struct SpectrumEntry {
    Rational value;
    std::int64_t multiplicity = 0;
    friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Exact spectrum with multiplicities. Every eigenvalue <= cutoff is present;
/// entries are strictly increasing. Buckling spectra carry a leading (0, 1)
/// bookkeeping entry standing in for the constants.
struct Spectrum {
    Problem problem = Problem::Laplace;
    double cutoff = 0.0;
    std::vector<SpectrumEntry> entries;

    /// Smallest nonzero value; throws if the spectrum has none below cutoff.
    const SpectrumEntry& first_nonzero() const;

    /// Values repeated by multiplicity, truncated to `limit` items.
    std::vector<Rational> expanded(std::size_t limit) const;

    friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// k(k+m-1)/r^2, the k-th distinct eigenvalue of S^m(r).
double sphere_eigenvalue(int m, double r, int k);
Rational sphere_eigenvalue_exact(int m, const Rational& r_sq, int k);

/// Dimension of degree-k spherical harmonics on S^m.
std::int64_t sphere_multiplicity(int m, int k);

Spectrum laplace_spectrum(const HypersurfaceSpec& spec, double cutoff);

/// Bi-Laplace (lambda -> lambda^2) or buckling spectrum implied by a Laplace
/// spectrum on a closed manifold.
Spectrum derived_spectrum(const Spectrum& laplace, Problem problem);

/// Cutoff that is guaranteed to include the first nonzero Laplace eigenvalue.
double first_eigenvalue_cutoff(const HypersurfaceSpec& spec);

} // namespace bispec
