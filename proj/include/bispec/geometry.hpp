#pragma once

#include "bispec/rational.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace bispec {

enum class SurfaceKind { GreatSphere, ProductOfSpheres };

/// One round sphere factor S^dim(r) of a product hypersurface. The radius is
/// kept as an exact r^2 so catalog spectra stay rational.
struct SphereFactor {
    int dim = 0;
    Rational radius_sq;

    double radius() const;
    friend bool operator==(const SphereFactor&, const SphereFactor&) = default;
};

/// A catalog hypersurface of the unit sphere S^{n+1} ⊂ R^{n+2}.
///
/// GreatSphere: the totally geodesic S^n, factors empty.
/// ProductOfSpheres: S^p(r1) × S^q(r2) with p + q = n and r1^2 + r2^2 = 1.
class HypersurfaceSpec {
public:
    SurfaceKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }
    int ambient_dimension() const noexcept { return n_ + 2; }
    const std::vector<SphereFactor>& factors() const noexcept { return factors_; }

    std::string label() const;

    friend bool operator==(const HypersurfaceSpec&, const HypersurfaceSpec&) = default;

    friend HypersurfaceSpec make_great_sphere(int n);
    friend HypersurfaceSpec make_clifford(int p, int q);
    friend HypersurfaceSpec make_product_exact(int p, int q, Rational r1_sq);
    friend HypersurfaceSpec make_product(int p, int q, double r1, double r2);
    friend HypersurfaceSpec make_surface(SurfaceKind kind, int n, std::vector<SphereFactor> factors);

private:
    HypersurfaceSpec() = default;

    SurfaceKind kind_ = SurfaceKind::GreatSphere;
    int n_ = 0;
    std::vector<SphereFactor> factors_;
};

HypersurfaceSpec make_great_sphere(int n);

/// Minimal product S^p(sqrt(p/n)) × S^q(sqrt(q/n)).
HypersurfaceSpec make_clifford(int p, int q);

/// General product with exact r1^2; r2^2 = 1 - r1^2.
HypersurfaceSpec make_product_exact(int p, int q, Rational r1_sq);

/// General product from real radii. Requires |r1^2 + r2^2 - 1| <= 1e-12; r1^2
/// is snapped to the nearest rational with denominator <= 10^6, which must lie
/// within 1e-12 of the given value.
HypersurfaceSpec make_product(int p, int q, double r1, double r2);

/// Validating constructor used by deserialization.
HypersurfaceSpec make_surface(SurfaceKind kind, int n, std::vector<SphereFactor> factors);

bool is_minimal(const HypersurfaceSpec& spec);

/// Unit vector on S^m from hyperspherical angles (phi_1, ..., phi_m):
/// x_1 = cos phi_1, ..., x_{m+1} = sin phi_1 ... sin phi_m.
Eigen::VectorXd sphere_point(std::span<const double> angles);

/// Ambient point in R^{n+2}. One angle vector per factor (dimension = factor
/// dim); a great sphere takes a single vector of n angles and gets a trailing 0.
Eigen::VectorXd embed_point(const HypersurfaceSpec& spec, const std::vector<std::vector<double>>& chart);

/// Nearest point on the hypersurface: factor blocks rescaled to their radii,
/// or the whole vector normalized for a great sphere.
Eigen::VectorXd project_to_surface(const HypersurfaceSpec& spec, const Eigen::VectorXd& x);

} // namespace bispec
