#include "bispec/analytic_spectrum.hpp"

#include "bispec/error.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace bispec {

namespace {

std::int64_t binomial(std::int64_t a, std::int64_t b)
{
    if (b < 0 || a < 0 || b > a) return 0;
    b = std::min(b, a - b);
    __int128 result = 1;
    for (std::int64_t i = 1; i <= b; ++i) {
        result = result * (a - b + i) / i;
        if (result > std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("binomial overflow");
    }
    return static_cast<std::int64_t>(result);
}

// (value, multiplicity) of one sphere factor, complete up to cutoff
std::vector<SpectrumEntry> factor_levels(int m, const Rational& r_sq, double cutoff)
{
    std::vector<SpectrumEntry> levels;
    for (int k = 0;; ++k) {
        Rational value = sphere_eigenvalue_exact(m, r_sq, k);
        if (!at_most(value, cutoff)) break;
        levels.push_back({value, sphere_multiplicity(m, k)});
    }
    return levels;
}

} // namespace

std::string_view to_string(Problem problem)
{
    switch (problem) {
    case Problem::Laplace: return "Laplace";
    case Problem::BiLaplace: return "BiLaplace";
    case Problem::Buckling: return "Buckling";
    }
    return "?";
}

Problem problem_from_string(std::string_view name)
{
    if (name == "Laplace") return Problem::Laplace;
    if (name == "BiLaplace") return Problem::BiLaplace;
    if (name == "Buckling") return Problem::Buckling;
    throw InvalidArgument("unknown problem kind '" + std::string(name) + "'");
}

const SpectrumEntry& Spectrum::first_nonzero() const
{
    for (const auto& e : entries)
        if (!e.value.is_zero()) return e;
    throw InvalidArgument("spectrum has no nonzero eigenvalue below its cutoff");
}

std::vector<Rational> Spectrum::expanded(std::size_t limit) const
{
    std::vector<Rational> out;
    for (const auto& e : entries) {
        for (std::int64_t i = 0; i < e.multiplicity && out.size() < limit; ++i) out.push_back(e.value);
        if (out.size() >= limit) break;
    }
    return out;
}

double sphere_eigenvalue(int m, double r, int k)
{
    return static_cast<double>(k) * static_cast<double>(k + m - 1) / (r * r);
}

Rational sphere_eigenvalue_exact(int m, const Rational& r_sq, int k)
{
    return Rational(static_cast<std::int64_t>(k) * (k + m - 1)) / r_sq;
}

std::int64_t sphere_multiplicity(int m, int k)
{
    if (m < 1 || k < 0) throw InvalidArgument("sphere_multiplicity needs m >= 1 and k >= 0");
    if (k == 0) return 1;
    if (m == 1) return 2;
    return binomial(m + k, k) - binomial(m + k - 2, k - 2);
}

Spectrum laplace_spectrum(const HypersurfaceSpec& spec, double cutoff)
{
    if (!(cutoff > 0.0)) throw InvalidArgument("spectrum cutoff must be positive");
    Spectrum out{Problem::Laplace, cutoff, {}};

    if (spec.kind() == SurfaceKind::GreatSphere) {
        out.entries = factor_levels(spec.dimension(), Rational(1), cutoff);
        return out;
    }

    // Separation of variables: eigenvalues of the product are sums of factor
    // eigenvalues, multiplicities multiply. Coinciding sums from different
    // index pairs collapse into one entry (exact equality).
    const auto& f = spec.factors();
    const auto first = factor_levels(f[0].dim, f[0].radius_sq, cutoff);
    const auto second = factor_levels(f[1].dim, f[1].radius_sq, cutoff);
    std::map<Rational, std::int64_t> merged;
    for (const auto& a : first) {
        for (const auto& b : second) {
            Rational sum = a.value + b.value;
            if (!at_most(sum, cutoff)) break; // second is increasing
            merged[sum] += a.multiplicity * b.multiplicity;
        }
    }
    out.entries.reserve(merged.size());
    for (const auto& [value, mult] : merged) out.entries.push_back({value, mult});
    return out;
}

Spectrum derived_spectrum(const Spectrum& laplace, Problem problem)
{
    if (laplace.problem != Problem::Laplace) throw InvalidArgument("derived_spectrum needs a Laplace spectrum");
    Spectrum out{problem, laplace.cutoff, {}};
    switch (problem) {
    case Problem::BiLaplace:
        out.cutoff = laplace.cutoff * laplace.cutoff;
        for (const auto& e : laplace.entries) out.entries.push_back({e.value * e.value, e.multiplicity});
        break;
    case Problem::Buckling:
        out.entries.push_back({Rational(0), 1});
        for (const auto& e : laplace.entries)
            if (!e.value.is_zero()) out.entries.push_back(e);
        break;
    case Problem::Laplace:
        throw InvalidArgument("derived_spectrum target must be BiLaplace or Buckling");
    }
    return out;
}

double first_eigenvalue_cutoff(const HypersurfaceSpec& spec)
{
    double cutoff = spec.dimension();
    for (const auto& f : spec.factors())
        cutoff = std::max(cutoff, sphere_eigenvalue_exact(f.dim, f.radius_sq, 1).to_double());
    return cutoff * (1.0 + 1e-9);
}

} // namespace bispec
