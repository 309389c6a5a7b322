#include "bispec/eigensolver.hpp"

#include "bispec/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

namespace bispec {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Solves A x = r for symmetric PSD A whose kernel is spanned by the columns of
// `kernel`: one pivot per kernel vector is pinned to zero and the remaining
// principal block is factored. Exact whenever r ⟂ ker A.
class PinnedSolver {
public:
    PinnedSolver(const SparseMatrix& a, const MatrixXd& kernel)
    {
        std::vector<bool> pinned(static_cast<std::size_t>(a.rows()), false);
        MatrixXd work = kernel;
        for (Index j = 0; j < work.cols(); ++j) {
            Index p = 0;
            work.col(j).cwiseAbs().maxCoeff(&p);
            if (work(p, j) == 0.0) throw InvalidArgument("deflation vectors are linearly dependent");
            pivots_.push_back(p);
            pinned[static_cast<std::size_t>(p)] = true;
            // eliminate this pivot from the remaining columns
            for (Index k = j + 1; k < work.cols(); ++k) work.col(k) -= (work(p, k) / work(p, j)) * work.col(j);
        }
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(static_cast<std::size_t>(a.nonZeros()) + pivots_.size());
        for (Index col = 0; col < a.outerSize(); ++col)
            for (SparseMatrix::InnerIterator it(a, col); it; ++it)
                if (!pinned[static_cast<std::size_t>(it.row())] && !pinned[static_cast<std::size_t>(it.col())])
                    t.emplace_back(it.row(), it.col(), it.value());
        for (Index p : pivots_) t.emplace_back(p, p, 1.0);
        SparseMatrix reduced(a.rows(), a.cols());
        reduced.setFromTriplets(t.begin(), t.end());
        ldlt_.compute(reduced);
        if (ldlt_.info() != Eigen::Success)
            throw InvalidArgument("factorization failed: matrix is not positive definite off its kernel");
    }

    VectorXd solve(VectorXd r) const
    {
        for (Index p : pivots_) r[p] = 0.0;
        return ldlt_.solve(r);
    }

private:
    std::vector<Index> pivots_;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
};

double inf_norm(const SparseMatrix& a)
{
    VectorXd sums = VectorXd::Zero(a.rows());
    for (Index col = 0; col < a.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) sums[it.row()] += std::abs(it.value());
    return sums.size() ? sums.maxCoeff() : 0.0;
}

SolverMode resolve_mode(SolverMode requested, Index order)
{
    if (requested == SolverMode::Auto) return order <= kAutoDenseOrder ? SolverMode::Dense : SolverMode::Iterative;
    return requested;
}

void check_limits(SolverMode mode, Index order)
{
    if (mode == SolverMode::Dense && order > kMaxDenseOrder)
        throw ResourceLimit("dense eigensolver order " + std::to_string(order) + " exceeds 3000");
    if (mode == SolverMode::Iterative && order > kMaxIterativeOrder)
        throw ResourceLimit("iterative eigensolver order " + std::to_string(order) + " exceeds 300000");
}

// metric-orthonormal basis of the deflation space, plus metric·basis
struct Deflation {
    MatrixXd basis;
    MatrixXd metric_basis;

    void project(VectorXd& v) const
    {
        if (basis.cols() > 0) v -= basis * (metric_basis.transpose() * v);
    }
};

Deflation make_deflation(const Pencil& pencil)
{
    Deflation d;
    d.basis = pencil.deflation;
    d.metric_basis.resize(pencil.order, d.basis.cols());
    for (Index j = 0; j < d.basis.cols(); ++j) {
        VectorXd v = d.basis.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (Index i = 0; i < j; ++i) v -= d.basis.col(i) * d.metric_basis.col(i).dot(v);
        VectorXd mv = pencil.metric(v);
        const double norm = std::sqrt(v.dot(mv));
        if (!(norm > 0.0)) throw InvalidArgument("deflation vector has zero metric norm");
        d.basis.col(j) = v / norm;
        d.metric_basis.col(j) = mv / norm;
    }
    return d;
}

EigenResult solve_dense(const Pencil& pencil, Index count)
{
    MatrixXd a = pencil.dense_a();
    MatrixXd b = pencil.dense_b();
    const Index k = pencil.deflation.cols();
    MatrixXd basis;
    if (k > 0) {
        // Restrict to the complement of metric·Y. When B and A both vanish on
        // Y (buckling), any complement is exact; otherwise eigenvectors with
        // μ ≠ 0 are B-orthogonal to ker A and the metric is B.
        MatrixXd c(pencil.order, k);
        for (Index j = 0; j < k; ++j) c.col(j) = pencil.metric(pencil.deflation.col(j));
        Eigen::HouseholderQR<MatrixXd> qr(c);
        MatrixXd q = qr.householderQ();
        basis = q.rightCols(pencil.order - k);
        a = basis.transpose() * a * basis;
        b = basis.transpose() * b * basis;
    }
    a = 0.5 * (a + a.transpose()).eval();
    b = 0.5 * (b + b.transpose()).eval();
    Eigen::LLT<MatrixXd> chol(b);
    if (chol.info() != Eigen::Success) throw InvalidArgument("B is not positive definite off the deflation space");

    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(a, b, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) throw NoConvergence("dense symmetric eigensolver failed", {});

    EigenResult result;
    result.method = SolverMode::Dense;
    result.values = ges.eigenvalues().head(count);
    result.vectors = k > 0 ? MatrixXd(basis * ges.eigenvectors().leftCols(count)) : MatrixXd(ges.eigenvectors().leftCols(count));
    return result;
}

// B-orthonormalizes the columns of v in place (two Gram-Schmidt passes against
// the deflation space and earlier columns); near-dependent columns are dropped.
// Returns the kept columns and B·columns.
std::pair<MatrixXd, MatrixXd> b_orthonormalize(const Pencil& pencil, const Deflation& deflation, const MatrixXd& v)
{
    MatrixXd q(v.rows(), v.cols());
    MatrixXd bq(v.rows(), v.cols());
    Index kept = 0;
    for (Index j = 0; j < v.cols(); ++j) {
        VectorXd w = v.col(j);
        VectorXd bw = pencil.apply_b(w);
        const double before = std::sqrt(std::max(0.0, w.dot(bw)));
        if (!(before > 0.0)) continue;
        for (int pass = 0; pass < 2; ++pass) {
            deflation.project(w);
            if (kept > 0) w -= q.leftCols(kept) * (bq.leftCols(kept).transpose() * w);
        }
        bw = pencil.apply_b(w);
        const double norm = std::sqrt(std::max(0.0, w.dot(bw)));
        if (!(norm > 1e-10 * before)) continue;
        q.col(kept) = w / norm;
        bq.col(kept) = bw / norm;
        ++kept;
    }
    q.conservativeResize(Eigen::NoChange, kept);
    bq.conservativeResize(Eigen::NoChange, kept);
    return {std::move(q), std::move(bq)};
}

// Restarted block Krylov iteration on S = A⁻¹B: each cycle spans
// [X, SX, S²X, ...] from the current Ritz block X, B-orthonormalizes it and
// applies Rayleigh-Ritz with A. The block keeps a few guard vectors beyond
// `count` so clusters at the boundary still converge.
EigenResult solve_iterative(const Pencil& pencil, Index count, const SolverOptions& options)
{
    const Index n = pencil.order;
    const Deflation deflation = make_deflation(pencil);
    const Index available = n - deflation.basis.cols();
    const Index block = std::min(available, count + std::max<Index>(8, count / 2));
    const Index krylov = options.krylov_dim > 0 ? options.krylov_dim : std::max<Index>(2 * count + 20, 40);
    const Index depth = std::max<Index>(2, std::min<Index>(available / std::max<Index>(block, 1), krylov / block + 1));

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    MatrixXd x(n, block);
    for (Index j = 0; j < block; ++j)
        for (Index i = 0; i < n; ++i) x(i, j) = uniform(rng);

    std::vector<double> best_residuals;
    double best_worst = std::numeric_limits<double>::infinity();
    int stalled = 0;
    EigenResult result;
    result.method = SolverMode::Iterative;

    for (int cycle = 0; cycle < options.max_restarts; ++cycle) {
        MatrixXd span(n, block * depth);
        span.leftCols(block) = x;
        for (Index d = 1; d < depth; ++d) {
            for (Index j = 0; j < block; ++j) {
                VectorXd w = pencil.solve_a(pencil.apply_b(span.col((d - 1) * block + j)));
                deflation.project(w);
                span.col(d * block + j) = w;
            }
            // rescale so later columns are not swamped by growth of ‖S‖
            for (Index j = 0; j < block; ++j) {
                const double norm = span.col(d * block + j).norm();
                if (norm > 0.0) span.col(d * block + j) /= norm;
            }
        }
        auto [v, bv] = b_orthonormalize(pencil, deflation, span);
        if (v.cols() < count) throw NoConvergence("iterative eigensolver lost rank in its search space", best_residuals);

        MatrixXd av(n, v.cols());
        for (Index j = 0; j < v.cols(); ++j) av.col(j) = pencil.apply_a(v.col(j));
        MatrixXd h = v.transpose() * av;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<MatrixXd> rr(h);

        const Index keep = std::min(block, v.cols());
        const MatrixXd y = rr.eigenvectors().leftCols(keep);
        x = v * y;
        const MatrixXd ax = av * y;
        const MatrixXd bx = bv * y;
        std::vector<double> residuals;
        for (Index j = 0; j < count; ++j) {
            const double mu = rr.eigenvalues()[j];
            residuals.push_back(relative_residual(ax.col(j), bx.col(j), mu, pencil.norm_a, x.col(j).norm()));
        }
        const double worst = *std::max_element(residuals.begin(), residuals.end());
        if (worst < best_worst) {
            stalled = worst < 0.5 * best_worst ? 0 : stalled + 1;
            best_worst = worst;
            best_residuals = residuals;
        } else {
            ++stalled;
        }
        if (worst <= options.tol) {
            result.values = rr.eigenvalues().head(count);
            result.vectors = x.leftCols(count);
            return result;
        }
        if (stalled >= 8) break; // at the rounding floor of A
    }
    std::ostringstream msg;
    msg << "iterative eigensolver stopped with worst residual " << std::scientific << std::setprecision(3)
        << best_worst << " above tolerance " << options.tol;
    throw NoConvergence(msg.str(), best_residuals);
}

// A = K·mass⁻¹·K. A x = r is solved as K z = r then K x = mass·z, with the
// constant in z fixed so that mass·z ⟂ 1.
struct SquaredOperator {
    SparseMatrix k;
    SparseMatrix mass;
    std::shared_ptr<PinnedSolver> k_solver;
    std::shared_ptr<Eigen::SimplicialLLT<SparseMatrix>> mass_solver;
    VectorXd mass_ones;
    double ones_mass = 0.0;

    SquaredOperator(const OperatorPair& ops)
        : k(ops.stiffness.full()), mass(ops.mass.full())
    {
        const VectorXd ones = VectorXd::Ones(k.rows());
        k_solver = std::make_shared<PinnedSolver>(k, ones);
        mass_solver = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(mass);
        if (mass_solver->info() != Eigen::Success) throw InvalidArgument("mass matrix is not positive definite");
        mass_ones = mass * ones;
        ones_mass = mass_ones.sum();
    }

    VectorXd apply(const VectorXd& x) const { return k * mass_solver->solve(VectorXd(k * x)); }

    VectorXd solve(const VectorXd& r) const
    {
        VectorXd z = k_solver->solve(r);
        z.array() -= mass_ones.dot(z) / ones_mass;
        return k_solver->solve(mass * z);
    }

    MatrixXd dense() const
    {
        const MatrixXd kd(k);
        Eigen::LLT<MatrixXd> chol{MatrixXd(mass)};
        return kd * chol.solve(kd);
    }

    double norm_estimate() const
    {
        const double kn = inf_norm(k);
        const VectorXd lumped = mass * VectorXd::Ones(mass.rows());
        return kn * kn / lumped.minCoeff();
    }
};

Pencil squared_pencil(const OperatorPair& ops, bool buckling)
{
    auto op = std::make_shared<SquaredOperator>(ops);
    Pencil p;
    p.order = ops.order();
    p.apply_a = [op](const VectorXd& x) { return op->apply(x); };
    p.solve_a = [op](const VectorXd& r) { return op->solve(r); };
    p.dense_a = [op] { return op->dense(); };
    p.norm_a = op->norm_estimate();
    p.deflation = VectorXd::Ones(ops.order());
    p.metric = [op](const VectorXd& x) { return VectorXd(op->mass * x); };
    if (buckling) {
        p.apply_b = [op](const VectorXd& x) { return VectorXd(op->k * x); };
        p.dense_b = [op] { return MatrixXd(op->k); };
    } else {
        p.apply_b = p.metric;
        p.dense_b = [op] { return MatrixXd(op->mass); };
    }
    return p;
}

VectorXd mass_normalized_constant(const OperatorPair& ops)
{
    const VectorXd ones = VectorXd::Ones(ops.order());
    return ones / std::sqrt(ones.dot(ops.mass * ones));
}

// prepends the kernel pair (0, constant)
EigenResult with_kernel_pair(EigenResult tail, const VectorXd& constant, double residual)
{
    EigenResult out = std::move(tail);
    const Index n = constant.size();
    const Index c = out.values.size();
    VectorXd values(c + 1);
    values[0] = 0.0;
    values.tail(c) = out.values;
    MatrixXd vectors(n, c + 1);
    vectors.col(0) = constant;
    if (c > 0) vectors.rightCols(c) = out.vectors;
    out.values = std::move(values);
    out.vectors = std::move(vectors);
    out.residuals.insert(out.residuals.begin(), residual);
    return out;
}

EigenResult solve_with_kernel(const Pencil& pencil, const OperatorPair& ops, Eigen::Index count,
    const SolverOptions& options)
{
    if (count < 1) throw InvalidArgument("eigenpair count must be >= 1");
    if (count > ops.order()) throw InvalidArgument("eigenpair count exceeds the matrix order");
    EigenResult tail;
    if (count > 1) {
        tail = solve_pencil(pencil, count - 1, options);
    } else {
        tail.method = resolve_mode(options.mode, ops.order());
        tail.values.resize(0);
        tail.vectors.resize(ops.order(), 0);
    }
    const VectorXd constant = mass_normalized_constant(ops);
    const double residual =
        relative_residual(pencil.apply_a(constant), pencil.apply_b(constant), 0.0, pencil.norm_a, constant.norm());
    return with_kernel_pair(std::move(tail), constant, residual);
}

} // namespace

std::string_view to_string(SolverMode mode)
{
    switch (mode) {
    case SolverMode::Auto: return "Auto";
    case SolverMode::Dense: return "Dense";
    case SolverMode::Iterative: return "Iterative";
    }
    return "?";
}

std::string_view to_string(BiLaplaceMethod method)
{
    return method == BiLaplaceMethod::OperatorSquare ? "OperatorSquare" : "Mixed";
}

double relative_residual(const VectorXd& av, const VectorXd& bv, double mu, double norm_a, double norm_v)
{
    const double num = (av - mu * bv).norm();
    double den = av.norm() + std::abs(mu) * bv.norm();
    if (den <= 1e-12 * norm_a * norm_v) den = norm_a * norm_v;
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

EigenResult solve_pencil(const Pencil& pencil, Index count, const SolverOptions& options)
{
    if (!(options.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    const Index available = pencil.order - pencil.deflation.cols();
    if (count < 1) throw InvalidArgument("eigenpair count must be >= 1");
    if (count > available)
        throw InvalidArgument("requested " + std::to_string(count) + " eigenpairs but only " +
                              std::to_string(available) + " are available");
    const SolverMode mode = resolve_mode(options.mode, pencil.order);
    check_limits(mode, pencil.order);

    Pencil p = pencil;
    if (!p.metric) p.metric = p.apply_b;

    EigenResult result = mode == SolverMode::Dense ? solve_dense(p, count) : solve_iterative(p, count, options);

    result.residuals.clear();
    for (Index i = 0; i < result.count(); ++i) {
        const VectorXd x = result.vectors.col(i);
        result.residuals.push_back(relative_residual(p.apply_a(x), p.apply_b(x), result.values[i], p.norm_a, x.norm()));
    }
    const double worst = result.residuals.empty() ? 0.0 : *std::max_element(result.residuals.begin(), result.residuals.end());
    if (worst > options.tol)
    {
        std::ostringstream msg;
        msg << "eigenpair residual " << std::scientific << std::setprecision(3) << worst << " above tolerance "
            << options.tol;
        throw NoConvergence(msg.str(), result.residuals);
    }
    return result;
}

EigenResult solve_gen_sym(const SparseMatrix& a, const SparseMatrix& b, Index count, const SolverOptions& options,
    const MatrixXd& deflation)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw InvalidArgument("pencil matrices must be square and of equal order");
    const SolverMode mode = resolve_mode(options.mode, a.rows());
    check_limits(mode, a.rows());
    Pencil p;
    p.order = a.rows();
    p.deflation = deflation;
    p.apply_a = [&a](const VectorXd& x) { return VectorXd(a * x); };
    p.apply_b = [&b](const VectorXd& x) { return VectorXd(b * x); };
    p.dense_a = [&a] { return MatrixXd(a); };
    p.dense_b = [&b] { return MatrixXd(b); };
    p.norm_a = inf_norm(a);
    std::shared_ptr<PinnedSolver> solver;
    if (mode == SolverMode::Iterative) {
        solver = std::make_shared<PinnedSolver>(a, deflation);
        p.solve_a = [solver](const VectorXd& r) { return solver->solve(r); };
    }
    return solve_pencil(p, count, options);
}

EigenResult laplace_eigs(const OperatorPair& ops, Index count, const SolverOptions& options)
{
    const SparseMatrix k = ops.stiffness.full();
    const SparseMatrix m = ops.mass.full();
    const SolverMode mode = resolve_mode(options.mode, ops.order());
    check_limits(mode, ops.order());
    Pencil p;
    p.order = ops.order();
    p.deflation = VectorXd::Ones(ops.order());
    p.apply_a = [k](const VectorXd& x) { return VectorXd(k * x); };
    p.apply_b = [m](const VectorXd& x) { return VectorXd(m * x); };
    p.dense_a = [k] { return MatrixXd(k); };
    p.dense_b = [m] { return MatrixXd(m); };
    p.norm_a = inf_norm(k);
    if (mode == SolverMode::Iterative) {
        auto solver = std::make_shared<PinnedSolver>(k, p.deflation);
        p.solve_a = [solver](const VectorXd& r) { return solver->solve(r); };
    }
    SolverOptions resolved = options;
    resolved.mode = mode;
    EigenResult result = solve_with_kernel(p, ops, count, resolved);
    result.problem = Problem::Laplace;
    return result;
}

EigenResult bilaplace_eigs(const OperatorPair& ops, Index count, BiLaplaceMethod method, const SolverOptions& options)
{
    if (method == BiLaplaceMethod::OperatorSquare && ops.mass_mode != MassMode::Lumped)
        throw InvalidArgument("operator-square bi-Laplacian needs lumped mass (consistent M⁻¹ is dense)");
    const SolverMode mode = resolve_mode(options.mode, ops.order());
    check_limits(mode, ops.order());
    SolverOptions resolved = options;
    resolved.mode = mode;
    EigenResult result = solve_with_kernel(squared_pencil(ops, false), ops, count, resolved);
    result.problem = Problem::BiLaplace;
    result.sub_method = method;
    return result;
}

EigenResult buckling_eigs(const OperatorPair& ops, Index count, const SolverOptions& options)
{
    if (ops.mass_mode != MassMode::Lumped) throw InvalidArgument("buckling eigenproblem needs lumped mass");
    const SolverMode mode = resolve_mode(options.mode, ops.order());
    check_limits(mode, ops.order());
    SolverOptions resolved = options;
    resolved.mode = mode;
    EigenResult result = solve_with_kernel(squared_pencil(ops, true), ops, count, resolved);
    result.problem = Problem::Buckling;
    return result;
}

std::vector<EigenCluster> cluster_eigenvalues(const VectorXd& values, double rel_tol)
{
    std::vector<EigenCluster> clusters;
    double sum = 0.0;
    for (Index i = 0; i < values.size(); ++i) {
        const bool extend = !clusters.empty() &&
                            std::abs(values[i] - values[i - 1]) <= rel_tol * (1.0 + std::abs(values[i]));
        if (!extend) {
            clusters.push_back({values[i], 0, i});
            sum = 0.0;
        }
        EigenCluster& c = clusters.back();
        ++c.multiplicity;
        sum += values[i];
        c.value = sum / c.multiplicity;
    }
    return clusters;
}

Index first_nonzero_index(const EigenResult& result)
{
    if (result.count() == 0) throw InvalidArgument("empty eigen result");
    const double scale = result.values.cwiseAbs().maxCoeff();
    for (Index i = 0; i < result.count(); ++i)
        if (result.values[i] > 1e-9 * scale) return i;
    throw InvalidArgument("eigen result has no nonzero eigenvalue");
}

} // namespace bispec
