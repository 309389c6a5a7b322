// Reference computations used by the tests. Nothing here calls into the
// library: each oracle recomputes its quantity from first principles.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Flat torus S1(r1) x S1(r2): eigenfunctions exp(i(j s + k t)), eigenvalue
// j^2/r1^2 + k^2/r2^2. Returns value -> multiplicity by brute force over the
// integer lattice, with r1^2 = a1/b1 and r2^2 = a2/b2 kept exact as the
// fraction j^2 b1/a1 + k^2 b2/a2 (numerator, denominator a1*a2).
inline std::map<std::int64_t, std::int64_t> torus_lattice(std::int64_t a1, std::int64_t b1, std::int64_t a2,
    std::int64_t b2, double cutoff)
{
    std::map<std::int64_t, std::int64_t> out; // numerator over a1*a2
    const std::int64_t den = a1 * a2;
    const auto jmax = static_cast<std::int64_t>(std::sqrt(cutoff * a1 / b1)) + 1;
    const auto kmax = static_cast<std::int64_t>(std::sqrt(cutoff * a2 / b2)) + 1;
    for (std::int64_t j = -jmax; j <= jmax; ++j) {
        for (std::int64_t k = -kmax; k <= kmax; ++k) {
            const std::int64_t num = j * j * b1 * a2 + k * k * b2 * a1;
            if (static_cast<double>(num) <= cutoff * static_cast<double>(den) * (1 + 1e-12)) ++out[num];
        }
    }
    return out;
}

// Number of monomials of degree d in v variables, by enumeration.
inline std::int64_t monomials(int v, int d)
{
    if (v == 0) return d == 0 ? 1 : 0;
    std::int64_t total = 0;
    for (int e = 0; e <= d; ++e) total += monomials(v - 1, d - e);
    return total;
}

// Harmonic polynomials of degree k on R^{m+1} restricted to S^m: the
// Laplacian maps P_k onto P_{k-2}, so dim H_k = dim P_k - dim P_{k-2}.
inline std::int64_t harmonic_dimension(int m, int k)
{
    return monomials(m + 1, k) - (k >= 2 ? monomials(m + 1, k - 2) : 0);
}

// Eigenvalues of the second-difference Laplacian on N equally spaced points of
// the unit circle, (2 - 2 cos(2 pi k / N)) / h^2 with arc spacing h.
inline double circle_fd_eigenvalue(int segments, int k)
{
    const double h = 2.0 * std::numbers::pi / segments;
    return (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / segments)) / (h * h);
}

} // namespace oracle
