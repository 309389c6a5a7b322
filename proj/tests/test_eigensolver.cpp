#include "bispec/eigensolver.hpp"
#include "bispec/error.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace bispec;

namespace {

std::shared_ptr<const SimplicialMesh> shared(SimplicialMesh m)
{
    return std::make_shared<const SimplicialMesh>(std::move(m));
}

// Pencil with prescribed eigenvalues: B = L Lᵀ, A = L Q D Qᵀ Lᵀ, so that
// A v = μ B v exactly when Lᵀ v is an eigenvector of Q D Qᵀ.
struct KnownPencil {
    SparseMatrix a;
    SparseMatrix b;
    Eigen::VectorXd values; // ascending
};

KnownPencil known_pencil(int order, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.5, 50.0);
    Eigen::MatrixXd g(order, order);
    for (auto& x : g.reshaped()) x = normal(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(order, order);
    for (int i = 0; i < order; ++i) {
        l(i, i) = 1.0 + std::abs(normal(rng));
        for (int j = 0; j < i; ++j) l(i, j) = 0.3 * normal(rng);
    }
    Eigen::VectorXd d(order);
    for (auto& x : d) x = uniform(rng);
    std::sort(d.begin(), d.end());
    const Eigen::MatrixXd a = l * q * d.asDiagonal() * q.transpose() * l.transpose();
    const Eigen::MatrixXd b = l * l.transpose();
    return {(0.5 * (a + a.transpose())).sparseView(), (0.5 * (b + b.transpose())).sparseView(), d};
}

SolverOptions with_mode(SolverMode mode, double tol = 1e-10)
{
    SolverOptions o;
    o.mode = mode;
    o.tol = tol;
    return o;
}

} // namespace

TEST(Pencil, DiagonalThreeByThree)
{
    Eigen::MatrixXd a = Eigen::Vector3d(3, 1, 2).asDiagonal();
    const SparseMatrix as = a.sparseView();
    SparseMatrix bs(3, 3);
    bs.setIdentity();
    for (auto mode : {SolverMode::Dense, SolverMode::Iterative}) {
        const auto r = solve_gen_sym(as, bs, 3, with_mode(mode));
        EXPECT_NEAR(r.values[0], 1.0, 1e-12);
        EXPECT_NEAR(r.values[1], 2.0, 1e-12);
        EXPECT_NEAR(r.values[2], 3.0, 1e-12);
        EXPECT_NEAR(std::abs(r.vectors(1, 0)), 1.0, 1e-10);
        EXPECT_EQ(r.method, mode);
    }
}

TEST(Pencil, RecoversPrescribedSpectrum)
{
    const auto p = known_pencil(60, 3);
    for (auto mode : {SolverMode::Dense, SolverMode::Iterative}) {
        const auto r = solve_gen_sym(p.a, p.b, 8, with_mode(mode));
        ASSERT_EQ(r.count(), 8);
        for (int i = 0; i < 8; ++i) EXPECT_NEAR(r.values[i], p.values[i], 1e-9 * p.values[i]) << to_string(mode);
    }
}

TEST(Pencil, EigenvectorsAreBOrthonormalWithSmallResiduals)
{
    const auto p = known_pencil(50, 9);
    for (auto mode : {SolverMode::Dense, SolverMode::Iterative}) {
        const auto r = solve_gen_sym(p.a, p.b, 6, with_mode(mode));
        const Eigen::MatrixXd gram = r.vectors.transpose() * (p.b * r.vectors);
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-10);
        ASSERT_EQ(r.residuals.size(), 6u);
        for (int i = 0; i < 6; ++i) {
            const Eigen::VectorXd v = r.vectors.col(i);
            const double res = (p.a * v - r.values[i] * (p.b * v)).norm() /
                               ((p.a * v).norm() + r.values[i] * (p.b * v).norm());
            EXPECT_LT(res, 1e-10);
            EXPECT_NEAR(r.residuals[i], res, 1e-12);
        }
    }
}

TEST(Pencil, DenseAndIterativeAgreeOnRandomPencils)
{
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> order(10, 120);
    for (int trial = 0; trial < 6; ++trial) {
        const auto p = known_pencil(order(rng), 100 + trial);
        const auto dense = solve_gen_sym(p.a, p.b, 5, with_mode(SolverMode::Dense));
        const auto iter = solve_gen_sym(p.a, p.b, 5, with_mode(SolverMode::Iterative));
        for (int i = 0; i < 5; ++i) EXPECT_NEAR(dense.values[i], iter.values[i], 1e-8 * dense.values[i]);
    }
}

TEST(Pencil, CountBeyondOrderIsRejected)
{
    const auto p = known_pencil(5, 1);
    EXPECT_THROW(solve_gen_sym(p.a, p.b, 6, {}), InvalidArgument);
    EXPECT_THROW(solve_gen_sym(p.a, p.b, 0, {}), InvalidArgument);
    SolverOptions bad;
    bad.tol = 0.0;
    EXPECT_THROW(solve_gen_sym(p.a, p.b, 2, bad), InvalidArgument);
    const auto ops = assemble_operators(shared(mesh_circle(8)), MassMode::Lumped);
    EXPECT_THROW(laplace_eigs(ops, 9), InvalidArgument);
}

TEST(Pencil, NoConvergenceCarriesResiduals)
{
    const auto ops = assemble_operators(shared(mesh_clifford_torus(12)), MassMode::Lumped);
    for (auto mode : {SolverMode::Dense, SolverMode::Iterative}) {
        SolverOptions o = with_mode(mode, 1e-30);
        o.max_restarts = 3;
        try {
            laplace_eigs(ops, 6, o);
            FAIL() << "expected NoConvergence";
        } catch (const NoConvergence& e) {
            EXPECT_FALSE(e.best_residuals().empty());
            for (double r : e.best_residuals()) EXPECT_GE(r, 0.0);
        }
    }
}

TEST(Pencil, GuardsOnOrder)
{
    const auto ops = assemble_operators(shared(mesh_clifford_torus(60)), MassMode::Lumped);
    EXPECT_THROW(laplace_eigs(ops, 3, with_mode(SolverMode::Dense)), ResourceLimit);
}

TEST(Laplace, KernelFirstAndMassNormalized)
{
    const auto ops = assemble_operators(shared(mesh_great_sphere2(2)), MassMode::Consistent);
    const auto r = laplace_eigs(ops, 5);
    EXPECT_EQ(r.values[0], 0.0);
    EXPECT_EQ(first_nonzero_index(r), 1);
    const Eigen::VectorXd c = r.vectors.col(0);
    EXPECT_NEAR(c.dot(ops.mass * c), 1.0, 1e-14);
    EXPECT_NEAR(c.maxCoeff(), c.minCoeff(), 1e-14);
    // the others are M-orthogonal to constants
    for (int i = 1; i < 5; ++i) EXPECT_NEAR(r.vectors.col(i).dot(ops.mass * c), 0.0, 1e-10);
}

TEST(Laplace, CircleFirstEigenvalue)
{
    const auto ops = assemble_operators(shared(mesh_circle(64)), MassMode::Consistent);
    const auto r = laplace_eigs(ops, 5);
    const auto clusters = cluster_eigenvalues(r.values.segment(1, 4), 1e-8);
    ASSERT_EQ(clusters.size(), 2u);
    EXPECT_NEAR(clusters[0].value, 1.0, 5e-3);
    EXPECT_EQ(clusters[0].multiplicity, 2);
    EXPECT_NEAR(clusters[1].value, 4.0, 4 * 5e-3);
}

TEST(Laplace, CliffordTorusClusterOfFour)
{
    const auto ops = assemble_operators(shared(mesh_clifford_torus(64)), MassMode::Lumped);
    const auto r = laplace_eigs(ops, 6);
    const auto clusters = cluster_eigenvalues(r.values.segment(1, 5), 1e-6);
    ASSERT_GE(clusters.size(), 2u);
    EXPECT_EQ(clusters[0].multiplicity, 4);
    EXPECT_NEAR(clusters[0].value, 2.0, 2.0 * 5e-3);
}

TEST(Laplace, RayleighQuotientsBoundTheFirstEigenvalue)
{
    const auto mesh = shared(mesh_great_sphere2(3));
    const auto ops = assemble_operators(mesh, MassMode::Consistent);
    const double lambda1 = laplace_eigs(ops, 2).values[1];
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.order());
    std::mt19937 rng(5);
    std::normal_distribution<double> normal;
    auto quotient = [&](Eigen::VectorXd v) {
        v -= ones * (v.dot(ops.mass * ones) / ones.dot(ops.mass * ones));
        return v.dot(ops.stiffness * v) / v.dot(ops.mass * v);
    };
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd v(ops.order());
        for (auto& x : v) x = normal(rng);
        EXPECT_GE(quotient(v), lambda1 * (1 - 1e-12));
    }
    for (const auto& x : coordinate_vectors(*mesh)) {
        if (x.norm() == 0.0) continue;
        EXPECT_GE(quotient(x), lambda1 * (1 - 1e-12));
    }
}

TEST(Laplace, CoordinateRayleighQuotientConvergesQuadratically)
{
    std::vector<double> errors;
    for (int level = 2; level <= 5; ++level) {
        const auto mesh = shared(mesh_great_sphere2(level));
        const auto ops = assemble_operators(mesh, MassMode::Consistent);
        const Eigen::VectorXd x = mesh->vertices.col(0);
        errors.push_back(std::abs(x.dot(ops.stiffness * x) / x.dot(ops.mass * x) - 2.0));
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        EXPECT_GT(ratio, 3.0) << i;
        EXPECT_LT(ratio, 5.0) << i;
    }
}

TEST(Laplace, InvariantUnderVertexRelabeling)
{
    SimplicialMesh m = mesh_great_sphere2(2);
    const Eigen::Index nv = m.vertex_count();
    std::vector<int> perm(static_cast<std::size_t>(nv));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(17));
    SimplicialMesh p = m;
    for (Eigen::Index v = 0; v < nv; ++v) p.vertices.row(perm[v]) = m.vertices.row(v);
    for (Eigen::Index s = 0; s < m.simplex_count(); ++s)
        for (int a = 0; a < 3; ++a) p.simplices(s, a) = perm[m.simplices(s, a)];
    const auto r1 = laplace_eigs(assemble_operators(shared(m), MassMode::Lumped), 10);
    const auto r2 = laplace_eigs(assemble_operators(shared(p), MassMode::Lumped), 10);
    EXPECT_LT((r1.values - r2.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BiLaplace, OperatorSquareIsTheSquareOfLumpedLaplace)
{
    for (const auto& mesh : {shared(mesh_great_sphere2(3)), shared(mesh_clifford_torus(20)), shared(mesh_circle(50))}) {
        const auto ops = assemble_operators(mesh, MassMode::Lumped);
        const auto lap = laplace_eigs(ops, 8);
        const auto bil = bilaplace_eigs(ops, 8, BiLaplaceMethod::OperatorSquare);
        EXPECT_EQ(bil.sub_method, BiLaplaceMethod::OperatorSquare);
        for (int i = 1; i < 8; ++i) EXPECT_NEAR(bil.values[i], lap.values[i] * lap.values[i], 1e-9 * bil.values[i]);
    }
}

TEST(BiLaplace, OperatorSquareNeedsLumpedMass)
{
    const auto ops = assemble_operators(shared(mesh_circle(10)), MassMode::Consistent);
    EXPECT_THROW(bilaplace_eigs(ops, 3, BiLaplaceMethod::OperatorSquare), InvalidArgument);
    EXPECT_THROW(buckling_eigs(ops, 3), InvalidArgument);
}

TEST(BiLaplace, MixedOnCliffordTorus)
{
    const auto ops = assemble_operators(shared(mesh_clifford_torus(64)), MassMode::Consistent);
    const auto r = bilaplace_eigs(ops, 5, BiLaplaceMethod::Mixed);
    EXPECT_EQ(r.values[0], 0.0);
    EXPECT_NEAR(r.values[1], 4.0, 0.04);
    EXPECT_EQ(cluster_eigenvalues(r.values.segment(1, 4), 1e-6).front().multiplicity, 4);
}

TEST(Buckling, EqualsLumpedLaplace)
{
    for (const auto& mesh : {shared(mesh_great_sphere2(3)), shared(mesh_circle(64))}) {
        const auto ops = assemble_operators(mesh, MassMode::Lumped);
        const auto lap = laplace_eigs(ops, 6);
        const auto buc = buckling_eigs(ops, 6);
        EXPECT_EQ(buc.values[0], 0.0);
        for (int i = 1; i < 6; ++i) EXPECT_NEAR(buc.values[i], lap.values[i], 1e-9 * lap.values[i]);
    }
}

TEST(Buckling, FirstValues)
{
    const auto torus = assemble_operators(shared(mesh_clifford_torus(64)), MassMode::Lumped);
    EXPECT_NEAR(buckling_eigs(torus, 2).values[1], 2.0, 2.0 * 5e-3);
    const auto circle = assemble_operators(shared(mesh_circle(128)), MassMode::Lumped);
    EXPECT_NEAR(buckling_eigs(circle, 2).values[1], 1.0, 1e-3);
}

TEST(Clusters, GroupsNearbyValues)
{
    Eigen::VectorXd v(6);
    v << 0.0, 2.0, 2.0 + 1e-9, 2.0 - 1e-9, 6.0, 6.1;
    const auto c = cluster_eigenvalues(v, 1e-6);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c[1].multiplicity, 3);
    EXPECT_EQ(c[1].first, 1);
    EXPECT_NEAR(c[1].value, 2.0, 1e-12);
    EXPECT_EQ(c[3].first, 5);
}
