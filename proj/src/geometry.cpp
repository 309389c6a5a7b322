#include "bispec/geometry.hpp"

#include "bispec/error.hpp"

#include <cmath>

namespace bispec {

namespace {

constexpr double kMinimalityTol = 1e-12;
constexpr double kUnitSphereTol = 1e-12;
constexpr std::int64_t kMaxRadiusDen = 1'000'000;

} // namespace

double SphereFactor::radius() const { return std::sqrt(radius_sq.to_double()); }

std::string HypersurfaceSpec::label() const
{
    if (kind_ == SurfaceKind::GreatSphere) return "great_sphere(" + std::to_string(n_) + ")";
    std::string s = "product(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ",";
        s += "S" + std::to_string(factors_[i].dim) + "[r^2=" + factors_[i].radius_sq.to_string() + "]";
    }
    return s + ")";
}

HypersurfaceSpec make_surface(SurfaceKind kind, int n, std::vector<SphereFactor> factors)
{
    if (n < 1) throw InvalidArgument("hypersurface dimension must be >= 1, got " + std::to_string(n));
    HypersurfaceSpec spec;
    spec.kind_ = kind;
    spec.n_ = n;
    if (kind == SurfaceKind::GreatSphere) {
        if (!factors.empty()) throw InvalidArgument("great sphere takes no factors");
        return spec;
    }
    if (factors.size() != 2) throw InvalidArgument("product of spheres needs exactly two factors");
    int dim_sum = 0;
    Rational r_sum = 0;
    for (const auto& f : factors) {
        if (f.dim < 1) throw InvalidArgument("factor dimension must be >= 1");
        if (f.radius_sq <= Rational(0)) throw InvalidArgument("factor radius must be positive");
        dim_sum += f.dim;
        r_sum += f.radius_sq;
    }
    if (dim_sum != n) throw InvalidArgument("factor dimensions must sum to n");
    if (r_sum != Rational(1)) throw InvalidArgument("squared radii must sum to 1, got " + r_sum.to_string());
    spec.factors_ = std::move(factors);
    return spec;
}

HypersurfaceSpec make_great_sphere(int n)
{
    return make_surface(SurfaceKind::GreatSphere, n, {});
}

HypersurfaceSpec make_clifford(int p, int q)
{
    if (p < 1 || q < 1) throw InvalidArgument("clifford factors need p >= 1 and q >= 1");
    const int n = p + q;
    return make_surface(SurfaceKind::ProductOfSpheres, n, {{p, Rational(p, n)}, {q, Rational(q, n)}});
}

HypersurfaceSpec make_product_exact(int p, int q, Rational r1_sq)
{
    if (p < 1 || q < 1) throw InvalidArgument("product factors need p >= 1 and q >= 1");
    if (r1_sq <= Rational(0) || r1_sq >= Rational(1)) throw InvalidArgument("r1^2 must lie in (0, 1)");
    return make_surface(SurfaceKind::ProductOfSpheres, p + q, {{p, r1_sq}, {q, Rational(1) - r1_sq}});
}

HypersurfaceSpec make_product(int p, int q, double r1, double r2)
{
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw InvalidArgument("radii must be positive");
    const double s1 = r1 * r1;
    const double s2 = r2 * r2;
    if (std::abs(s1 + s2 - 1.0) > kUnitSphereTol)
        throw InvalidArgument("radii do not lie on the unit sphere: r1^2 + r2^2 = " + std::to_string(s1 + s2));
    Rational exact = Rational::approximate(s1, kMaxRadiusDen);
    if (std::abs(exact.to_double() - s1) > kUnitSphereTol)
        throw InvalidArgument("r1^2 is not representable as a fraction with denominator <= 10^6");
    return make_product_exact(p, q, exact);
}

bool is_minimal(const HypersurfaceSpec& spec)
{
    if (spec.kind() == SurfaceKind::GreatSphere) return true;
    const double n = spec.dimension();
    for (const auto& f : spec.factors())
        if (std::abs(f.radius_sq.to_double() * n - f.dim) > kMinimalityTol) return false;
    return true;
}

Eigen::VectorXd sphere_point(std::span<const double> angles)
{
    const auto m = static_cast<Eigen::Index>(angles.size());
    Eigen::VectorXd x(m + 1);
    double sin_prod = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        x[i] = sin_prod * std::cos(angles[i]);
        sin_prod *= std::sin(angles[i]);
    }
    x[m] = sin_prod;
    return x;
}

Eigen::VectorXd embed_point(const HypersurfaceSpec& spec, const std::vector<std::vector<double>>& chart)
{
    Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.ambient_dimension());
    if (spec.kind() == SurfaceKind::GreatSphere) {
        if (chart.size() != 1 || static_cast<int>(chart[0].size()) != spec.dimension())
            throw InvalidArgument("great sphere chart needs one vector of " + std::to_string(spec.dimension()) + " angles");
        x.head(spec.dimension() + 1) = sphere_point(chart[0]);
        return x;
    }
    const auto& factors = spec.factors();
    if (chart.size() != factors.size()) throw InvalidArgument("chart needs one angle vector per factor");
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (static_cast<int>(chart[i].size()) != factors[i].dim)
            throw InvalidArgument("factor " + std::to_string(i) + " needs " + std::to_string(factors[i].dim) + " angles");
        x.segment(offset, factors[i].dim + 1) = factors[i].radius() * sphere_point(chart[i]);
        offset += factors[i].dim + 1;
    }
    return x;
}

Eigen::VectorXd project_to_surface(const HypersurfaceSpec& spec, const Eigen::VectorXd& x)
{
    if (x.size() != spec.ambient_dimension()) throw InvalidArgument("point has wrong ambient dimension");
    Eigen::VectorXd y = x;
    if (spec.kind() == SurfaceKind::GreatSphere) {
        y[spec.dimension() + 1] = 0.0;
        y.normalize();
        return y;
    }
    Eigen::Index offset = 0;
    for (const auto& f : spec.factors()) {
        auto block = y.segment(offset, f.dim + 1);
        const double norm = block.norm();
        if (norm == 0.0) throw InvalidArgument("cannot project a point with a vanishing factor block");
        block *= f.radius() / norm;
        offset += f.dim + 1;
    }
    return y;
}

} // namespace bispec
