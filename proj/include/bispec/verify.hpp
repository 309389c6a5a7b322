#pragma once

#include "bispec/analytic_spectrum.hpp"
#include "bispec/eigensolver.hpp"
#include "bispec/mesh.hpp"
#include "bispec/operators.hpp"
#include "bispec/report.hpp"

#include <span>
#include <vector>

namespace bispec {

// ---------------------------------------------------------------------------
// Individual checks

/// Λ₁ = n², Γ₁ = n and λ₁ = n in exact arithmetic. For a non-minimal spec the
/// entries are still evaluated but marked as expected failures.
std::vector<CheckEntry> verify_theorem(const HypersurfaceSpec& spec);

/// Λ_k >= λ_k² and Γ_k >= λ_k over every index k >= 1 present in all three
/// spectra (with multiplicity). Reported as the smallest ratio Λ_k/λ_k² and
/// Γ_k/λ_k, which must be >= 1 − slack. Exact, slack 0.
std::vector<CheckEntry> check_lemma(const Spectrum& laplace, const Spectrum& bilaplace, const Spectrum& buckling);

/// Numeric variant. Values are ascending with the kernel at index 0.
std::vector<CheckEntry> check_lemma(std::span<const double> laplace, std::span<const double> bilaplace,
    std::span<const double> buckling, double slack);

std::vector<CheckEntry> check_lemma(const EigenResult& laplace, const EigenResult& bilaplace,
    const EigenResult& buckling, double slack);

/// λ₁ vs n, Λ₁ vs n², Γ₁ vs n with a relative tolerance.
std::vector<CheckEntry> check_theorem(double lambda1, double bilaplace1, double buckling1, int n, double rel_tol,
    bool minimal);

/// Λ₁ >= n²/4 and Γ₁ >= n/2, each relaxed by a factor (1 − slack).
std::vector<CheckEntry> check_choi_wang(double bilaplace1, double buckling1, int n, double slack);

/// max_i ‖K xᵢ − n M xᵢ‖_* / sqrt(xᵢᵀ K xᵢ) over nonzero coordinate
/// functions, where ‖r‖_* = sqrt(rᵀ K⁺ r) is the discrete H⁻¹ norm of the
/// residual with its mean removed. Pointwise (L²-type) norms only decay at
/// O(h) on unstructured meshes; this one decays at O(h²).
double takahashi_residual(const OperatorPair& ops, int n);

// ---------------------------------------------------------------------------
// Whole-subject runs

VerificationReport verify_analytic(const HypersurfaceSpec& spec, double cutoff = 0.0);

/// Great spheres S^n and all minimal S^p × S^q with p + q = n, for n <= n_max.
std::vector<VerificationReport> verify_all_minimal(int n_max);

struct NumericOptions {
    int grid = 64;       // torus lattice
    int levels = 4;      // icosphere subdivisions
    int segments = 256;  // circle
    Eigen::Index count = 10;
    double tol = 0.01;   // relative tolerance on continuum targets
    double slack = 1e-6; // slack on discrete identities
    double takahashi_tol = 0.01; // measured: 1.6e-3 on torus grid 64, 1.5e-3 at icosphere level 4
    SolverOptions solver;
};

/// Mesh generator matching a catalog surface: circle for S^1, icosphere for
/// S^2, lattice torus for S^1 × S^1. Throws InvalidArgument otherwise.
SimplicialMesh mesh_for(const HypersurfaceSpec& spec, const NumericOptions& options);

VerificationReport verify_numeric(const HypersurfaceSpec& spec, const NumericOptions& options);

// ---------------------------------------------------------------------------
// Convergence

enum class StudyQuantity { Lambda1, BiLaplaceOperatorSquare, BiLaplaceMixed, Buckling1, Takahashi };

std::string_view to_string(StudyQuantity quantity);
StudyQuantity study_quantity_from_string(std::string_view name);

struct StudyOptions {
    int base = 0;     // base resolution: grid, segments or icosphere level
    int levels = 3;   // number of uniformly refined meshes, >= 3
    StudyQuantity quantity = StudyQuantity::Lambda1;
    Eigen::Index count = 8;
    SolverOptions solver;
};

/// Evaluates the quantity on `levels` successive refinements of the base mesh
/// for `spec`, fits the observed order and extrapolates assuming order 2.
ConvergenceRecord convergence_study(const HypersurfaceSpec& spec, const StudyOptions& options);

/// Fills rates, estimated_rate, extrapolated, reliable and flagged from
/// values (and reference, when set).
void analyze_convergence(ConvergenceRecord& record);

} // namespace bispec
