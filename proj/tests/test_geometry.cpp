#include "bispec/error.hpp"
#include "bispec/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace bispec;

TEST(GreatSphere, IsMinimalAndValidated)
{
    const auto s2 = make_great_sphere(2);
    EXPECT_EQ(s2.kind(), SurfaceKind::GreatSphere);
    EXPECT_EQ(s2.dimension(), 2);
    EXPECT_EQ(s2.ambient_dimension(), 4);
    EXPECT_TRUE(is_minimal(s2));
    EXPECT_TRUE(is_minimal(make_great_sphere(1)));
    EXPECT_TRUE(is_minimal(make_great_sphere(4)));
    EXPECT_THROW(make_great_sphere(0), InvalidArgument);
}

TEST(Clifford, RadiiForcedByMinimality)
{
    // a product S^p(r1) x S^q(r2) in S^{n+1} has mean curvature proportional
    // to p/r1 * r2 - q/r2 * r1 (principal curvatures r2/r1 and -r1/r2); it
    // vanishes iff r1^2 = p/n
    auto mean_curvature = [](int p, int q, double r1, double r2) { return p * r2 / r1 - q * r1 / r2; };

    const auto c11 = make_clifford(1, 1);
    EXPECT_EQ(c11.dimension(), 2);
    EXPECT_NEAR(c11.factors()[0].radius(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(c11.factors()[1].radius(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(mean_curvature(1, 1, c11.factors()[0].radius(), c11.factors()[1].radius()), 0.0, 1e-14);

    const auto c21 = make_clifford(2, 1);
    EXPECT_EQ(c21.dimension(), 3);
    EXPECT_EQ(c21.factors()[0].radius_sq, Rational(2, 3));
    EXPECT_EQ(c21.factors()[1].radius_sq, Rational(1, 3));
    EXPECT_NEAR(mean_curvature(2, 1, c21.factors()[0].radius(), c21.factors()[1].radius()), 0.0, 1e-14);

    EXPECT_THROW(make_clifford(0, 1), InvalidArgument);
}

TEST(Product, NonMinimalTorus)
{
    const auto t = make_product(1, 1, std::sqrt(0.3), std::sqrt(0.7));
    EXPECT_FALSE(is_minimal(t));
    EXPECT_EQ(t.factors()[0].radius_sq, Rational(3, 10));
    EXPECT_EQ(t.factors()[1].radius_sq, Rational(7, 10));
}

TEST(Product, MinimalRadiiReproduceClifford)
{
    EXPECT_EQ(make_product(1, 1, std::sqrt(0.5), std::sqrt(0.5)), make_clifford(1, 1));
    EXPECT_TRUE(is_minimal(make_clifford(3, 2)));
}

TEST(Product, RadiiMustLieOnTheUnitSphere)
{
    EXPECT_THROW(make_product(1, 1, 0.5, 0.5), InvalidArgument);
    EXPECT_THROW(make_product(1, 1, -0.6, 0.8), InvalidArgument);
    EXPECT_THROW(make_product_exact(1, 1, Rational(0)), InvalidArgument);
    EXPECT_THROW(make_product_exact(1, 1, Rational(1)), InvalidArgument);
}

TEST(Product, MakeSurfaceValidates)
{
    EXPECT_THROW(make_surface(SurfaceKind::ProductOfSpheres, 2, {{1, Rational(1, 2)}}), InvalidArgument);
    EXPECT_THROW(make_surface(SurfaceKind::ProductOfSpheres, 3, {{1, Rational(1, 2)}, {1, Rational(1, 2)}}),
        InvalidArgument);
    EXPECT_THROW(make_surface(SurfaceKind::ProductOfSpheres, 2, {{1, Rational(1, 2)}, {1, Rational(1, 3)}}),
        InvalidArgument);
    EXPECT_THROW(make_surface(SurfaceKind::GreatSphere, 2, {{1, Rational(1, 2)}, {1, Rational(1, 2)}}),
        InvalidArgument);
    EXPECT_EQ(make_surface(SurfaceKind::ProductOfSpheres, 2, {{1, Rational(1, 2)}, {1, Rational(1, 2)}}),
        make_clifford(1, 1));
}

TEST(Embedding, CliffordChartAtOrigin)
{
    const auto c = make_clifford(1, 1);
    const double r = std::sqrt(0.5);
    const Eigen::VectorXd x0 = embed_point(c, {{0.0}, {0.0}});
    EXPECT_TRUE(x0.isApprox(Eigen::Vector4d(r, 0, r, 0), 1e-15));
    const Eigen::VectorXd x1 = embed_point(c, {{std::numbers::pi / 2}, {0.0}});
    EXPECT_NEAR(x1[0], 0.0, 1e-15);
    EXPECT_NEAR(x1[1], r, 1e-15);
    EXPECT_NEAR(x1[2], r, 1e-15);
    EXPECT_NEAR(x1[3], 0.0, 1e-15);
}

TEST(Embedding, PointsHaveUnitNorm)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (const auto& spec : {make_clifford(1, 1), make_clifford(2, 3), make_product(1, 2, std::sqrt(0.3), std::sqrt(0.7)),
             make_great_sphere(3)}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::vector<double>> chart;
            if (spec.kind() == SurfaceKind::GreatSphere) {
                chart.emplace_back();
                for (int i = 0; i < spec.dimension(); ++i) chart.back().push_back(angle(rng));
            } else {
                for (const auto& f : spec.factors()) {
                    chart.emplace_back();
                    for (int i = 0; i < f.dim; ++i) chart.back().push_back(angle(rng));
                }
            }
            const Eigen::VectorXd x = embed_point(spec, chart);
            ASSERT_EQ(x.size(), spec.ambient_dimension());
            EXPECT_NEAR(x.norm(), 1.0, 1e-12) << spec.label();
        }
    }
}

TEST(Embedding, ChartArityIsChecked)
{
    EXPECT_THROW(embed_point(make_clifford(1, 1), {{0.0}}), InvalidArgument);
    EXPECT_THROW(embed_point(make_clifford(1, 1), {{0.0, 1.0}, {0.0}}), InvalidArgument);
}

TEST(Projection, LandsOnTheSurface)
{
    const auto spec = make_product(1, 1, std::sqrt(0.3), std::sqrt(0.7));
    const Eigen::Vector4d raw(0.9, -0.2, 0.1, 1.3);
    const Eigen::VectorXd x = project_to_surface(spec, raw);
    EXPECT_NEAR(x.head(2).squaredNorm(), 0.3, 1e-15);
    EXPECT_NEAR(x.tail(2).squaredNorm(), 0.7, 1e-15);
    const Eigen::VectorXd y = project_to_surface(make_great_sphere(2), raw);
    EXPECT_NEAR(y.norm(), 1.0, 1e-15);
    EXPECT_EQ(y[3], 0.0);
}

TEST(Labels, AreReadable)
{
    EXPECT_EQ(make_great_sphere(2).label(), "great_sphere(2)");
    EXPECT_EQ(make_clifford(1, 1).label(), "product(S1[r^2=1/2],S1[r^2=1/2])");
}
