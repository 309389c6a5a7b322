#pragma once

#include "bispec/analytic_spectrum.hpp"
#include "bispec/operators.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace bispec {

enum class SolverMode { Auto, Dense, Iterative };
enum class BiLaplaceMethod { OperatorSquare, Mixed };

std::string_view to_string(SolverMode mode);
std::string_view to_string(BiLaplaceMethod method);

inline constexpr Eigen::Index kMaxDenseOrder = 3000;
inline constexpr Eigen::Index kMaxIterativeOrder = 300000;
/// Auto mode switches to the iterative engine above this order; a full dense
/// solve at order 1000 already costs seconds.
inline constexpr Eigen::Index kAutoDenseOrder = 600;

struct SolverOptions {
    SolverMode mode = SolverMode::Auto; // Auto: dense up to kAutoDenseOrder
    double tol = 1e-6;                  // relative residual bound per pair
    int max_restarts = 500;
    int krylov_dim = 0; // 0: max(2·count + 20, 40)
    std::uint64_t seed = 0x6269737065635ULL;
};

/// Smallest eigenpairs of a generalized symmetric problem A v = μ B v.
struct EigenResult {
    Problem problem = Problem::Laplace;
    SolverMode method = SolverMode::Dense; // resolved, never Auto
    std::optional<BiLaplaceMethod> sub_method;
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // one B-normalized column per value
    std::vector<double> residuals;

    Eigen::Index count() const { return values.size(); }
};

/// Matrix-free symmetric pencil.
///
/// `solve_a` must return some x with A x = r whenever r is orthogonal to the
/// columns of `deflation`, which span ker A. Deflated directions are removed
/// with the `metric`-orthogonal projector (metric defaults to B).
struct Pencil {
    Eigen::Index order = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_a;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_b;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> solve_a;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> metric;
    std::function<Eigen::MatrixXd()> dense_a;
    std::function<Eigen::MatrixXd()> dense_b;
    Eigen::MatrixXd deflation;
    double norm_a = 1.0; // upper estimate of ‖A‖₂, scales kernel residuals
};

/// ‖Av − μBv‖ / (‖Av‖ + |μ|‖Bv‖). For (numerically) kernel vectors of A the
/// denominator falls back to ‖A‖·‖v‖.
double relative_residual(const Eigen::VectorXd& av, const Eigen::VectorXd& bv, double mu, double norm_a, double norm_v);

/// Engine behind every problem: `count` smallest pairs on the complement of
/// the pencil's deflation space. Dense mode reduces to a standard problem via
/// a Cholesky factor of B; iterative mode is restarted block Krylov on A⁻¹B
/// (zero shift, kernel deflated) with Rayleigh–Ritz in the A inner product.
EigenResult solve_pencil(const Pencil& pencil, Eigen::Index count, const SolverOptions& options);

/// Sparse front end: A symmetric PSD whose kernel is spanned by `deflation`
/// (empty when A is definite), B symmetric PD.
EigenResult solve_gen_sym(const SparseMatrix& a, const SparseMatrix& b, Eigen::Index count,
    const SolverOptions& options, const Eigen::MatrixXd& deflation = {});

/// K v = λ M v. The first pair is the constant kernel vector (λ = 0).
EigenResult laplace_eigs(const OperatorPair& ops, Eigen::Index count, const SolverOptions& options = {});

/// Δ²u = Λu through (K M⁻¹ K) v = Λ M v. OperatorSquare requires lumped mass;
/// Mixed eliminates w = M⁻¹K u from the first-order system with whatever mass
/// the pair carries (consistent in practice) and never forms M⁻¹.
EigenResult bilaplace_eigs(const OperatorPair& ops, Eigen::Index count, BiLaplaceMethod method,
    const SolverOptions& options = {});

/// Δ²u = ΓΔu through (K M⁻¹ K) v = Γ K v on the M-orthogonal complement of
/// constants. Lumped mass only. A (0, constant) pair is prepended for the
/// Γ₀ = 0 indexing; its vector is M-normalized since K vanishes on it.
EigenResult buckling_eigs(const OperatorPair& ops, Eigen::Index count, const SolverOptions& options = {});

struct EigenCluster {
    double value = 0.0;  // mean of the members
    int multiplicity = 0;
    Eigen::Index first = 0; // index of the first member
};

/// Groups sorted values whose neighbours differ by <= rel_tol·(1 + |value|).
std::vector<EigenCluster> cluster_eigenvalues(const Eigen::VectorXd& values, double rel_tol = 1e-6);

/// Index of the first value above the kernel, i.e. the λ₁ / Λ₁ / Γ₁ slot.
Eigen::Index first_nonzero_index(const EigenResult& result);

} // namespace bispec
