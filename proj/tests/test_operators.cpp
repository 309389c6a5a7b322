#include "bispec/error.hpp"
#include "bispec/operators.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace bispec;

namespace {

// Dirichlet energy and L2 norm of the piecewise-linear interpolant of u,
// triangle by triangle. The gradient is solved from the two edge vectors in
// the triangle's own plane; the L2 integral uses the edge-midpoint rule,
// exact for quadratics.
struct Integrals {
    double energy = 0.0;
    double l2 = 0.0;
};

Integrals integrate_p1(const SimplicialMesh& m, const Eigen::VectorXd& u)
{
    Integrals out;
    for (Eigen::Index s = 0; s < m.simplex_count(); ++s) {
        const int a = m.simplices(s, 0), b = m.simplices(s, 1), c = m.simplices(s, 2);
        const Eigen::VectorXd e1 = (m.vertices.row(b) - m.vertices.row(a)).transpose();
        const Eigen::VectorXd e2 = (m.vertices.row(c) - m.vertices.row(a)).transpose();
        Eigen::Matrix2d g;
        g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
        const double area = 0.5 * std::sqrt(g.determinant());
        const Eigen::Vector2d du(u[b] - u[a], u[c] - u[a]);
        out.energy += area * du.dot(g.inverse() * du);
        const double mab = 0.5 * (u[a] + u[b]), mbc = 0.5 * (u[b] + u[c]), mca = 0.5 * (u[c] + u[a]);
        out.l2 += area / 3.0 * (mab * mab + mbc * mbc + mca * mca);
    }
    return out;
}

Eigen::VectorXd random_vector(Eigen::Index size, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(size);
    for (auto& x : v) x = normal(rng);
    return v;
}

} // namespace

TEST(Stiffness, SquareCircle)
{
    const auto m = mesh_circle(4);
    const Eigen::MatrixXd k = assemble_stiffness(m).full();
    const double l = std::sqrt(2.0);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(k(i, i), 2 / l, 1e-15);
        EXPECT_NEAR(k(i, (i + 1) % 4), -1 / l, 1e-15);
        EXPECT_EQ(k(i, (i + 2) % 4), 0.0);
    }
}

TEST(Stiffness, AnnihilatesConstantsAndIsSymmetric)
{
    for (const auto& m : {mesh_circle(17), mesh_great_sphere2(2), mesh_clifford_torus(9)}) {
        const auto k = assemble_stiffness(m);
        EXPECT_LT(k.row_sums().cwiseAbs().maxCoeff(), 1e-12);
        const SparseMatrix full = k.full();
        EXPECT_EQ((full - SparseMatrix(full.transpose())).norm(), 0.0);
    }
}

TEST(Stiffness, RegularIcosahedronHasEqualCotangentWeights)
{
    // every angle is pi/3, so each edge weight is (cot + cot)/2 = 1/sqrt(3)
    const Eigen::MatrixXd k = assemble_stiffness(mesh_great_sphere2(0)).full();
    int edges = 0;
    for (int i = 0; i < 12; ++i) {
        EXPECT_NEAR(k(i, i), 5 / std::sqrt(3.0), 1e-13);
        for (int j = 0; j < 12; ++j)
            if (i != j && k(i, j) != 0.0) {
                EXPECT_NEAR(k(i, j), -1 / std::sqrt(3.0), 1e-13);
                ++edges;
            }
    }
    EXPECT_EQ(edges, 60);
}

TEST(Stiffness, QuadraticFormIsDirichletEnergy)
{
    for (const auto& m : {mesh_great_sphere2(2), mesh_product_torus(make_product(1, 1, std::sqrt(0.3), std::sqrt(0.7)), 7)}) {
        const auto k = assemble_stiffness(m);
        const auto mc = assemble_mass(m, MassMode::Consistent);
        const Eigen::VectorXd u = random_vector(m.vertex_count(), 11);
        const Integrals ref = integrate_p1(m, u);
        EXPECT_NEAR(u.dot(k * u), ref.energy, 1e-12 * ref.energy);
        EXPECT_NEAR(u.dot(mc * u), ref.l2, 1e-12 * ref.l2);
    }
}

TEST(Mass, TotalsEqualMeasure)
{
    for (const auto& m : {mesh_circle(9), mesh_great_sphere2(3), mesh_clifford_torus(12)}) {
        const double measure = mesh_stats(m).total_measure;
        const auto consistent = assemble_mass(m, MassMode::Consistent);
        const auto lumped = assemble_mass(m, MassMode::Lumped);
        EXPECT_NEAR(consistent.total_sum(), measure, 1e-12 * measure);
        EXPECT_NEAR(lumped.total_sum(), measure, 1e-12 * measure);
        // lumping keeps row sums
        EXPECT_LT((consistent.row_sums() - lumped.row_sums()).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_EQ(lumped.lower().nonZeros(), m.vertex_count());
    }
}

TEST(Mass, SegmentEntries)
{
    const Eigen::MatrixXd mc = assemble_mass(mesh_circle(4), MassMode::Consistent).full();
    const double l = std::sqrt(2.0);
    EXPECT_NEAR(mc(0, 0), 2 * l / 3, 1e-15);
    EXPECT_NEAR(mc(0, 1), l / 6, 1e-15);
    EXPECT_EQ(mc(0, 2), 0.0);
}

TEST(Operators, PairCarriesMeshAndMode)
{
    auto mesh = std::make_shared<const SimplicialMesh>(mesh_clifford_torus(6));
    const auto ops = assemble_operators(mesh, MassMode::Lumped);
    EXPECT_EQ(ops.order(), 36);
    EXPECT_EQ(ops.mass_mode, MassMode::Lumped);
    EXPECT_EQ(ops.mesh.get(), mesh.get());
}

TEST(Operators, DegenerateTriangleIsReported)
{
    auto m = mesh_great_sphere2(1);
    m.vertices.row(m.simplices(5, 2)) = m.vertices.row(m.simplices(5, 0));
    try {
        assemble_stiffness(m);
        FAIL() << "expected DegenerateMesh";
    } catch (const DegenerateMesh& e) {
        EXPECT_GE(e.simplex(), 0);
    }
}

TEST(Operators, CoordinateVectors)
{
    const auto m = mesh_clifford_torus(5);
    const auto x = coordinate_vectors(m);
    ASSERT_EQ(x.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(x[i], m.vertices.col(i));
}

TEST(MatrixMarket, LowerTriangleOneBased)
{
    std::ostringstream out;
    write_matrix_market(out, assemble_stiffness(mesh_circle(3)));
    std::istringstream in(out.str());
    std::string banner;
    std::getline(in, banner);
    EXPECT_EQ(banner, "%%MatrixMarket matrix coordinate real symmetric");
    int rows = 0, cols = 0, nnz = 0;
    in >> rows >> cols >> nnz;
    EXPECT_EQ(rows, 3);
    EXPECT_EQ(cols, 3);
    EXPECT_EQ(nnz, 6);
    int i = 0, j = 0;
    double v = 0;
    while (in >> i >> j >> v) {
        EXPECT_GE(i, j);
        EXPECT_GE(j, 1);
        EXPECT_LE(i, 3);
    }
}

TEST(Stiffness, TorusEnergyOfCosineConvergesQuadratically)
{
    // u = cos(j s) on S1(r) x S1(r), r^2 = 1/2: |grad u|^2 = (j^2/r^2) sin^2(j s),
    // integrated over the area (2 pi r)^2 = 2 pi^2 this is 2 j^2 pi^2
    for (int j : {1, 2}) {
        const double exact = 2.0 * j * j * std::numbers::pi * std::numbers::pi;
        std::vector<double> errors;
        for (int g : {16, 32, 64}) {
            const auto m = mesh_clifford_torus(g);
            Eigen::VectorXd u(m.vertex_count());
            for (Eigen::Index v = 0; v < m.vertex_count(); ++v)
                u[v] = std::cos(j * std::atan2(m.vertices(v, 1), m.vertices(v, 0)));
            errors.push_back(std::abs(u.dot(assemble_stiffness(m) * u) - exact));
        }
        for (std::size_t i = 1; i < errors.size(); ++i) {
            EXPECT_GT(errors[i - 1] / errors[i], 3.5) << j;
            EXPECT_LT(errors[i - 1] / errors[i], 4.5) << j;
        }
    }
}
