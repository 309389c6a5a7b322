#include "bispec/verify.hpp"

#include "bispec/error.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>

namespace bispec {

namespace {

constexpr std::size_t kMaxExpanded = 100000;

std::string mesh_descriptor(const SimplicialMesh& mesh)
{
    if (mesh.generator == "icosphere") return "icosphere level=" + std::to_string(mesh.resolution);
    if (mesh.generator == "circle") return "circle segments=" + std::to_string(mesh.resolution);
    return mesh.generator + " grid=" + std::to_string(mesh.resolution);
}

void mark_expected_failure(std::vector<CheckEntry>& checks)
{
    for (auto& c : checks) c.expected_failure = true;
}

template <typename T>
void append(std::vector<T>& dst, std::vector<T> src)
{
    dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

SimplicialMesh base_mesh(const HypersurfaceSpec& spec, int base)
{
    if (spec.kind() == SurfaceKind::GreatSphere && spec.dimension() == 1) return mesh_circle(base);
    if (spec.kind() == SurfaceKind::GreatSphere && spec.dimension() == 2) return mesh_great_sphere2(base);
    if (spec.kind() == SurfaceKind::ProductOfSpheres && spec.dimension() == 2) {
        SimplicialMesh mesh = mesh_product_torus(spec, base);
        if (is_minimal(spec)) mesh.generator = "clifford_torus";
        return mesh;
    }
    throw InvalidArgument("no mesh generator for " + spec.label() + " (meshes exist for n = 1, 2 only)");
}

// value and cluster size at the first nonzero eigenvalue
std::pair<double, int> first_cluster(const EigenResult& r)
{
    const Eigen::Index i1 = first_nonzero_index(r);
    for (const auto& c : cluster_eigenvalues(r.values))
        if (i1 >= c.first && i1 < c.first + c.multiplicity) return {r.values[i1], c.multiplicity};
    return {r.values[i1], 1};
}

} // namespace

std::vector<CheckEntry> verify_theorem(const HypersurfaceSpec& spec)
{
    const Spectrum laplace = laplace_spectrum(spec, first_eigenvalue_cutoff(spec));
    const Rational lambda1 = laplace.first_nonzero().value;
    const Rational bilaplace1 = derived_spectrum(laplace, Problem::BiLaplace).first_nonzero().value;
    const Rational buckling1 = derived_spectrum(laplace, Problem::Buckling).first_nonzero().value;
    const Rational n = spec.dimension();
    std::vector<CheckEntry> checks{
        exact_check("lambda1", "lambda_1 = n (Tang-Yan)", lambda1, n, Relation::Equal),
        exact_check("Lambda1", "Lambda_1 = n^2 (clamped bi-Laplace)", bilaplace1, n * n, Relation::Equal),
        exact_check("Gamma1", "Gamma_1 = n (buckling)", buckling1, n, Relation::Equal),
    };
    if (!is_minimal(spec)) mark_expected_failure(checks);
    return checks;
}

std::vector<CheckEntry> check_lemma(const Spectrum& laplace, const Spectrum& bilaplace, const Spectrum& buckling)
{
    if (laplace.problem != Problem::Laplace || bilaplace.problem != Problem::BiLaplace ||
        buckling.problem != Problem::Buckling)
        throw InvalidArgument("check_lemma needs Laplace, BiLaplace and Buckling spectra");
    const auto lam = laplace.expanded(kMaxExpanded);
    const auto bil = bilaplace.expanded(kMaxExpanded);
    const auto buc = buckling.expanded(kMaxExpanded);
    const std::size_t common = std::min({lam.size(), bil.size(), buc.size()});
    if (common < 2) throw InvalidArgument("index mismatch: spectra share no index k >= 1");

    std::optional<Rational> clamped_ratio;
    std::optional<Rational> buckling_ratio;
    for (std::size_t k = 1; k < common; ++k) {
        if (lam[k].is_zero()) continue;
        const Rational r1 = bil[k] / (lam[k] * lam[k]);
        const Rational r2 = buc[k] / lam[k];
        if (!clamped_ratio || r1 < *clamped_ratio) clamped_ratio = r1;
        if (!buckling_ratio || r2 < *buckling_ratio) buckling_ratio = r2;
    }
    if (!clamped_ratio) throw InvalidArgument("index mismatch: no nonzero Laplace eigenvalue in common range");
    return {
        exact_check("lemma_clamped", "Lambda_k >= lambda_k^2 (min ratio over k)", *clamped_ratio, 1, Relation::AtLeast),
        exact_check("lemma_buckling", "Gamma_k >= lambda_k (min ratio over k)", *buckling_ratio, 1, Relation::AtLeast),
    };
}

std::vector<CheckEntry> check_lemma(std::span<const double> laplace, std::span<const double> bilaplace,
    std::span<const double> buckling, double slack)
{
    if (slack < 0.0) throw InvalidArgument("slack must be >= 0");
    const std::size_t common = std::min({laplace.size(), bilaplace.size(), buckling.size()});
    if (common < 2) throw InvalidArgument("index mismatch: spectra share no index k >= 1");
    const double scale = *std::max_element(laplace.begin(), laplace.begin() + static_cast<std::ptrdiff_t>(common));
    double clamped = std::numeric_limits<double>::infinity();
    double buckled = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < common; ++k) {
        if (!(laplace[k] > 1e-9 * scale)) continue;
        clamped = std::min(clamped, bilaplace[k] / (laplace[k] * laplace[k]));
        buckled = std::min(buckled, buckling[k] / laplace[k]);
    }
    if (!std::isfinite(clamped)) throw InvalidArgument("index mismatch: no nonzero Laplace eigenvalue in common range");
    return {
        numeric_check("lemma_clamped", "Lambda_k >= lambda_k^2 (min ratio over k)", clamped, 1.0, slack, Relation::AtLeast),
        numeric_check("lemma_buckling", "Gamma_k >= lambda_k (min ratio over k)", buckled, 1.0, slack, Relation::AtLeast),
    };
}

std::vector<CheckEntry> check_lemma(const EigenResult& laplace, const EigenResult& bilaplace,
    const EigenResult& buckling, double slack)
{
    auto view = [](const EigenResult& r) { return std::span<const double>(r.values.data(), static_cast<std::size_t>(r.values.size())); };
    return check_lemma(view(laplace), view(bilaplace), view(buckling), slack);
}

std::vector<CheckEntry> check_theorem(double lambda1, double bilaplace1, double buckling1, int n, double rel_tol,
    bool minimal)
{
    if (rel_tol < 0.0) throw InvalidArgument("tolerance must be >= 0");
    const double nd = n;
    std::vector<CheckEntry> checks{
        numeric_check("lambda1", "lambda_1 = n (Tang-Yan)", lambda1, nd, rel_tol * nd, Relation::Equal),
        numeric_check("Lambda1", "Lambda_1 = n^2 (clamped bi-Laplace)", bilaplace1, nd * nd, rel_tol * nd * nd, Relation::Equal),
        numeric_check("Gamma1", "Gamma_1 = n (buckling)", buckling1, nd, rel_tol * nd, Relation::Equal),
    };
    if (!minimal) mark_expected_failure(checks);
    return checks;
}

std::vector<CheckEntry> check_choi_wang(double bilaplace1, double buckling1, int n, double slack)
{
    const double nd = n;
    const double lower_clamped = nd * nd / 4.0;
    const double lower_buckling = nd / 2.0;
    return {
        numeric_check("choi_wang_clamped", "Lambda_1 >= n^2/4 (Choi-Wang)", bilaplace1, lower_clamped,
            slack * lower_clamped, Relation::AtLeast),
        numeric_check("choi_wang_buckling", "Gamma_1 >= n/2 (Choi-Wang)", buckling1, lower_buckling,
            slack * lower_buckling, Relation::AtLeast),
    };
}

double takahashi_residual(const OperatorPair& ops, int n)
{
    if (!ops.mesh) throw InvalidArgument("operator pair has no mesh");
    const SparseMatrix k = ops.stiffness.full();
    const SparseMatrix m = ops.mass.full();

    // K⁺ on the complement of constants: pin vertex 0, solve, measure r·z
    SparseMatrix pinned = k;
    for (Eigen::Index col = 0; col < pinned.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(pinned, col); it; ++it)
            if (it.row() == 0 || it.col() == 0) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
    Eigen::SimplicialLDLT<SparseMatrix> solver(pinned);
    if (solver.info() != Eigen::Success) throw DegenerateMesh("stiffness matrix is singular off constants", -1);

    std::vector<std::pair<double, double>> parts; // (dual norm of residual, energy norm of x)
    double largest = 0.0;
    for (const Eigen::VectorXd& x : coordinate_vectors(*ops.mesh)) {
        Eigen::VectorXd r = k * x - static_cast<double>(n) * (m * x);
        r.array() -= r.mean();
        Eigen::VectorXd rhs = r;
        rhs[0] = 0.0;
        const Eigen::VectorXd z = solver.solve(rhs);
        const double energy = std::sqrt(std::max(0.0, x.dot(k * x)));
        parts.emplace_back(std::sqrt(std::abs(r.dot(z))), energy);
        largest = std::max(largest, energy);
    }
    double worst = 0.0;
    for (const auto& [res, ref] : parts)
        if (ref > 1e-12 * largest) worst = std::max(worst, res / ref);
    return worst;
}

VerificationReport verify_analytic(const HypersurfaceSpec& spec, double cutoff)
{
    if (cutoff <= 0.0) cutoff = 3.0 * first_eigenvalue_cutoff(spec);
    VerificationReport report;
    report.spec = spec;
    report.mesh = "analytic";
    append(report.checks, verify_theorem(spec));
    const Spectrum laplace = laplace_spectrum(spec, cutoff);
    const Spectrum bilaplace = derived_spectrum(laplace, Problem::BiLaplace);
    const Spectrum buckling = derived_spectrum(laplace, Problem::Buckling);
    append(report.checks, check_lemma(laplace, bilaplace, buckling));
    if (is_minimal(spec)) {
        const Rational n = spec.dimension();
        const Rational b1 = bilaplace.first_nonzero().value;
        const Rational g1 = buckling.first_nonzero().value;
        report.checks.push_back(exact_check("choi_wang_clamped", "Lambda_1 >= n^2/4 (Choi-Wang)", b1, n * n / 4, Relation::AtLeast));
        report.checks.push_back(exact_check("choi_wang_buckling", "Gamma_1 >= n/2 (Choi-Wang)", g1, n / 2, Relation::AtLeast));
    }
    return report;
}

std::vector<VerificationReport> verify_all_minimal(int n_max)
{
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    std::vector<VerificationReport> reports;
    for (int n = 1; n <= n_max; ++n) {
        reports.push_back(verify_analytic(make_great_sphere(n)));
        for (int p = 1; p < n; ++p) reports.push_back(verify_analytic(make_clifford(p, n - p)));
    }
    return reports;
}

SimplicialMesh mesh_for(const HypersurfaceSpec& spec, const NumericOptions& options)
{
    if (spec.kind() == SurfaceKind::GreatSphere && spec.dimension() == 1) return base_mesh(spec, options.segments);
    if (spec.kind() == SurfaceKind::GreatSphere && spec.dimension() == 2) return base_mesh(spec, options.levels);
    return base_mesh(spec, options.grid);
}

VerificationReport verify_numeric(const HypersurfaceSpec& spec, const NumericOptions& options)
{
    auto mesh = std::make_shared<const SimplicialMesh>(mesh_for(spec, options));
    validate_mesh(*mesh);
    const int n = spec.dimension();
    const bool minimal = is_minimal(spec);

    const OperatorPair consistent = assemble_operators(mesh, MassMode::Consistent);
    const OperatorPair lumped = assemble_operators(mesh, MassMode::Lumped);

    const EigenResult lap_c = laplace_eigs(consistent, options.count, options.solver);
    const EigenResult mixed = bilaplace_eigs(consistent, options.count, BiLaplaceMethod::Mixed, options.solver);
    const EigenResult lap_l = laplace_eigs(lumped, options.count, options.solver);
    const EigenResult square = bilaplace_eigs(lumped, options.count, BiLaplaceMethod::OperatorSquare, options.solver);
    const EigenResult buck = buckling_eigs(lumped, options.count, options.solver);

    const double lambda1 = lap_c.values[first_nonzero_index(lap_c)];
    const double bilaplace1 = mixed.values[first_nonzero_index(mixed)];
    const double buckling1 = buck.values[first_nonzero_index(buck)];

    VerificationReport report;
    report.spec = spec;
    report.mesh = mesh_descriptor(*mesh);
    append(report.checks, check_theorem(lambda1, bilaplace1, buckling1, n, options.tol, minimal));
    append(report.checks, check_lemma(lap_l, square, buck, options.slack));

    // consistent-mass pair: only the clamped inequality is a discrete identity
    auto mixed_lemma = check_lemma(lap_c, mixed, lap_c, options.slack);
    mixed_lemma.resize(1);
    mixed_lemma[0].name = "lemma_clamped_mixed";
    append(report.checks, std::move(mixed_lemma));

    if (minimal) append(report.checks, check_choi_wang(bilaplace1, buckling1, n, 0.0));

    CheckEntry takahashi = numeric_check("takahashi", "Delta x_i = n x_i (Takahashi)", takahashi_residual(consistent, n), 0.0,
        options.takahashi_tol, Relation::Equal);
    takahashi.expected_failure = !minimal;
    report.checks.push_back(std::move(takahashi));
    return report;
}

std::string_view to_string(StudyQuantity quantity)
{
    switch (quantity) {
    case StudyQuantity::Lambda1: return "lambda1";
    case StudyQuantity::BiLaplaceOperatorSquare: return "Lambda1-opsquare";
    case StudyQuantity::BiLaplaceMixed: return "Lambda1-mixed";
    case StudyQuantity::Buckling1: return "Gamma1";
    case StudyQuantity::Takahashi: return "takahashi";
    }
    return "?";
}

StudyQuantity study_quantity_from_string(std::string_view name)
{
    for (auto q : {StudyQuantity::Lambda1, StudyQuantity::BiLaplaceOperatorSquare, StudyQuantity::BiLaplaceMixed,
             StudyQuantity::Buckling1, StudyQuantity::Takahashi})
        if (to_string(q) == name) return q;
    throw InvalidArgument("unknown study quantity '" + std::string(name) + "'");
}

ConvergenceRecord convergence_study(const HypersurfaceSpec& spec, const StudyOptions& options)
{
    if (options.levels < 3) throw InvalidArgument("a convergence study needs at least 3 levels");
    std::vector<std::shared_ptr<const SimplicialMesh>> meshes;
    {
        SimplicialMesh mesh = base_mesh(spec, options.base);
        const bool icosphere = mesh.generator == "icosphere";
        const long finest = icosphere ? options.base + options.levels - 1
                                      : static_cast<long>(options.base) << (options.levels - 1);
        if (icosphere && finest > kMaxIcosphereLevel) throw ResourceLimit("icosphere level over the resource guard (7)");
        if (mesh.generator != "icosphere" && mesh.dim == 2 && finest > kMaxTorusGrid)
            throw ResourceLimit("torus grid over the resource guard (512)");
        if (mesh.dim == 1 && finest > kMaxCircleSegments) throw ResourceLimit("circle segments over the resource guard");
        meshes.push_back(std::make_shared<const SimplicialMesh>(mesh));
        for (int l = 1; l < options.levels; ++l) meshes.push_back(std::make_shared<const SimplicialMesh>(refine(*meshes.back())));
    }

    const int n = spec.dimension();
    auto evaluate = [&options, n](std::shared_ptr<const SimplicialMesh> mesh) -> std::pair<double, int> {
        switch (options.quantity) {
        case StudyQuantity::Lambda1:
            return first_cluster(laplace_eigs(assemble_operators(mesh, MassMode::Consistent), options.count, options.solver));
        case StudyQuantity::BiLaplaceOperatorSquare:
            return first_cluster(bilaplace_eigs(assemble_operators(mesh, MassMode::Lumped), options.count,
                BiLaplaceMethod::OperatorSquare, options.solver));
        case StudyQuantity::BiLaplaceMixed:
            return first_cluster(bilaplace_eigs(assemble_operators(mesh, MassMode::Consistent), options.count,
                BiLaplaceMethod::Mixed, options.solver));
        case StudyQuantity::Buckling1:
            return first_cluster(buckling_eigs(assemble_operators(mesh, MassMode::Lumped), options.count, options.solver));
        case StudyQuantity::Takahashi:
            return {takahashi_residual(assemble_operators(mesh, MassMode::Consistent), n), 0};
        }
        return {0.0, 0};
    };

    // one task per level; each owns its mesh and operators
    std::vector<std::future<std::pair<double, int>>> tasks;
    for (const auto& mesh : meshes) tasks.push_back(std::async(std::launch::async, evaluate, mesh));

    ConvergenceRecord record;
    record.family = meshes.front()->generator;
    record.quantity = std::string(to_string(options.quantity));
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        const auto [value, mult] = tasks[i].get();
        record.levels.push_back(meshes[i]->resolution);
        record.h.push_back(mesh_stats(*meshes[i]).h_max);
        record.values.push_back(value);
        record.multiplicities.push_back(mult);
    }
    if (options.quantity == StudyQuantity::Takahashi) record.reference = 0.0;
    analyze_convergence(record);
    return record;
}

void analyze_convergence(ConvergenceRecord& record)
{
    const auto& v = record.values;
    if (v.size() < 3) throw InvalidArgument("convergence analysis needs at least 3 values");
    record.rates.clear();
    record.reliable = true;
    if (record.reference) {
        std::vector<double> err;
        for (double x : v) err.push_back(std::abs(x - *record.reference));
        for (std::size_t i = 0; i + 1 < err.size(); ++i) {
            if (!(err[i + 1] < err[i]) || err[i + 1] <= 0.0) record.reliable = false;
            record.rates.push_back(std::log2(err[i] / err[i + 1]));
        }
    } else {
        std::vector<double> diff;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) diff.push_back(v[i + 1] - v[i]);
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
            const bool same_sign = (diff[i] > 0) == (diff[i + 1] > 0);
            if (!same_sign || !(std::abs(diff[i + 1]) < std::abs(diff[i])) || diff[i + 1] == 0.0) record.reliable = false;
            record.rates.push_back(std::log2(std::abs(diff[i]) / std::abs(diff[i + 1])));
        }
    }
    record.estimated_rate = record.rates.back();
    const double fine = v[v.size() - 1];
    const double coarse = v[v.size() - 2];
    record.extrapolated = fine + (fine - coarse) / 3.0;
    record.flagged = !std::isfinite(record.estimated_rate) || std::abs(record.estimated_rate - 2.0) > 0.5;
}

} // namespace bispec
