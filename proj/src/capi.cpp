#define BISPEC_BUILDING
#include "bispec/bispec.h"

#include "bispec/error.hpp"
#include "bispec/serialize.hpp"
#include "bispec/verify.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

static_assert(BISPEC_MAX_TORUS_GRID == bispec::kMaxTorusGrid);
static_assert(BISPEC_MAX_ICOSPHERE_LEVEL == bispec::kMaxIcosphereLevel);
static_assert(BISPEC_MAX_CIRCLE_SEGMENTS == bispec::kMaxCircleSegments);
static_assert(BISPEC_MAX_DENSE_ORDER == bispec::kMaxDenseOrder);
static_assert(BISPEC_MAX_ITERATIVE_ORDER == bispec::kMaxIterativeOrder);

struct bispec_surface {
    bispec::HypersurfaceSpec spec;
};

struct bispec_spectrum {
    bispec::Spectrum spectrum;
};

struct bispec_mesh {
    std::shared_ptr<const bispec::SimplicialMesh> mesh;
};

struct bispec_operators {
    bispec::OperatorPair ops;
};

struct bispec_eigen_result {
    bispec::EigenResult result;
};

struct bispec_report {
    std::vector<bispec::VerificationReport> reports;
    bool collection = false; // several subjects, serialized as {"reports": [...]}
    std::vector<std::string> names;
    std::vector<const bispec::CheckEntry*> flat;

    void index()
    {
        names.clear();
        flat.clear();
        const bool prefixed = reports.size() > 1;
        for (const auto& r : reports) {
            for (const auto& c : r.checks) {
                names.push_back(prefixed ? r.spec.label() + ":" + c.name : c.name);
                flat.push_back(&c);
            }
        }
    }
};

namespace {

thread_local std::string last_error;
thread_local std::vector<double> last_residuals;

bispec_status fail(bispec_status status, std::string message)
{
    last_error = std::move(message);
    return status;
}

// Runs body, mapping core exceptions onto status codes.
template <typename F>
bispec_status guarded(F&& body)
{
    try {
        body();
        return BISPEC_OK;
    } catch (const bispec::InvalidArgument& e) {
        return fail(BISPEC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const bispec::DegenerateMesh& e) {
        return fail(BISPEC_ERR_DEGENERATE_MESH, e.what());
    } catch (const bispec::ResourceLimit& e) {
        return fail(BISPEC_ERR_RESOURCE_LIMIT, e.what());
    } catch (const bispec::NoConvergence& e) {
        last_residuals = e.best_residuals();
        return fail(BISPEC_ERR_NO_CONVERGENCE, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(BISPEC_ERR_INVALID_ARGUMENT, std::string("malformed JSON: ") + e.what());
    } catch (const std::bad_alloc&) {
        return fail(BISPEC_ERR_RESOURCE_LIMIT, "out of memory");
    } catch (const std::exception& e) {
        return fail(BISPEC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BISPEC_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what)
{
    if (!p) throw bispec::InvalidArgument(std::string(what) + " is null");
}

char* copy_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** out, const std::string& s)
{
    require(out, "output pointer");
    *out = copy_string(s);
}

bispec_status write_file(const char* path, auto&& writer, std::ios::openmode mode = std::ios::out)
{
    std::ofstream f(path, mode);
    if (!f) return fail(BISPEC_ERR_IO, std::string("cannot open '") + path + "' for writing");
    const bispec_status st = guarded([&] { writer(f); });
    if (st != BISPEC_OK) return st;
    f.close();
    if (!f) return fail(BISPEC_ERR_IO, std::string("write to '") + path + "' failed");
    return BISPEC_OK;
}

bispec::Problem to_core(bispec_problem p)
{
    switch (p) {
    case BISPEC_LAPLACE: return bispec::Problem::Laplace;
    case BISPEC_BILAPLACE: return bispec::Problem::BiLaplace;
    case BISPEC_BUCKLING: return bispec::Problem::Buckling;
    }
    throw bispec::InvalidArgument("unknown problem code " + std::to_string(static_cast<int>(p)));
}

bispec::SolverOptions to_core(const bispec_solver_options* o)
{
    bispec::SolverOptions s;
    if (!o) return s;
    switch (o->mode) {
    case BISPEC_SOLVER_AUTO: s.mode = bispec::SolverMode::Auto; break;
    case BISPEC_SOLVER_DENSE: s.mode = bispec::SolverMode::Dense; break;
    case BISPEC_SOLVER_ITERATIVE: s.mode = bispec::SolverMode::Iterative; break;
    default: throw bispec::InvalidArgument("unknown solver mode " + std::to_string(static_cast<int>(o->mode)));
    }
    s.tol = o->tol;
    s.max_restarts = o->max_restarts;
    s.krylov_dim = o->krylov_dim;
    s.seed = o->seed;
    if (!(s.tol > 0.0)) throw bispec::InvalidArgument("solver tolerance must be positive");
    if (s.max_restarts < 1) throw bispec::InvalidArgument("max_restarts must be >= 1");
    if (s.krylov_dim < 0) throw bispec::InvalidArgument("krylov_dim must be >= 0");
    return s;
}

bispec::StudyQuantity to_core(bispec_study_quantity q)
{
    switch (q) {
    case BISPEC_STUDY_LAMBDA1: return bispec::StudyQuantity::Lambda1;
    case BISPEC_STUDY_BILAPLACE_OPSQUARE: return bispec::StudyQuantity::BiLaplaceOperatorSquare;
    case BISPEC_STUDY_BILAPLACE_MIXED: return bispec::StudyQuantity::BiLaplaceMixed;
    case BISPEC_STUDY_BUCKLING1: return bispec::StudyQuantity::Buckling1;
    case BISPEC_STUDY_TAKAHASHI: return bispec::StudyQuantity::Takahashi;
    }
    throw bispec::InvalidArgument("unknown study quantity " + std::to_string(static_cast<int>(q)));
}

bispec_solver_options from_core(const bispec::SolverOptions& s)
{
    bispec_solver_options o{};
    o.mode = static_cast<bispec_solver_mode>(static_cast<int>(s.mode));
    o.tol = s.tol;
    o.max_restarts = s.max_restarts;
    o.krylov_dim = s.krylov_dim;
    o.seed = s.seed;
    return o;
}

std::string dump(const nlohmann::json& j)
{
    return j.dump(2) + "\n";
}

} // namespace

extern "C" {

const char* bispec_version(void)
{
    return "0.1.0";
}

const char* bispec_last_error(void)
{
    return last_error.c_str();
}

const double* bispec_last_best_residuals(size_t* count)
{
    if (count) *count = last_residuals.size();
    return last_residuals.empty() ? nullptr : last_residuals.data();
}

void bispec_string_free(char* s)
{
    std::free(s);
}

void bispec_solver_options_default(bispec_solver_options* out)
{
    if (out) *out = from_core(bispec::SolverOptions{});
}

void bispec_numeric_options_default(bispec_numeric_options* out)
{
    if (!out) return;
    const bispec::NumericOptions d;
    out->grid = d.grid;
    out->levels = d.levels;
    out->segments = d.segments;
    out->count = static_cast<int>(d.count);
    out->tol = d.tol;
    out->slack = d.slack;
    out->takahashi_tol = d.takahashi_tol;
    out->solver = from_core(d.solver);
}

void bispec_study_options_default(bispec_study_options* out)
{
    if (!out) return;
    const bispec::StudyOptions d;
    out->base = d.base;
    out->levels = d.levels;
    out->quantity = BISPEC_STUDY_LAMBDA1;
    out->count = static_cast<int>(d.count);
    out->solver = from_core(d.solver);
}

bispec_status bispec_problem_from_string(const char* name, bispec_problem* out)
{
    return guarded([&] {
        require(name, "name");
        require(out, "output pointer");
        const std::string n(name);
        if (n == "laplace") *out = BISPEC_LAPLACE;
        else if (n == "bilaplace") *out = BISPEC_BILAPLACE;
        else if (n == "buckling") *out = BISPEC_BUCKLING;
        else throw bispec::InvalidArgument("unknown problem '" + n + "'");
    });
}

bispec_status bispec_study_quantity_from_string(const char* name, bispec_study_quantity* out)
{
    return guarded([&] {
        require(name, "name");
        require(out, "output pointer");
        *out = static_cast<bispec_study_quantity>(static_cast<int>(bispec::study_quantity_from_string(name)));
    });
}

// ---- surfaces

bispec_status bispec_surface_great_sphere(int n, bispec_surface** out)
{
    return guarded([&] {
        require(out, "output pointer");
        *out = new bispec_surface{bispec::make_great_sphere(n)};
    });
}

bispec_status bispec_surface_clifford(int p, int q, bispec_surface** out)
{
    return guarded([&] {
        require(out, "output pointer");
        *out = new bispec_surface{bispec::make_clifford(p, q)};
    });
}

bispec_status bispec_surface_product(int p, int q, double r1_sq, bispec_surface** out)
{
    return guarded([&] {
        require(out, "output pointer");
        if (!(r1_sq > 0.0 && r1_sq < 1.0)) throw bispec::InvalidArgument("r1^2 must lie strictly between 0 and 1");
        *out = new bispec_surface{bispec::make_product(p, q, std::sqrt(r1_sq), std::sqrt(1.0 - r1_sq))};
    });
}

bispec_status bispec_surface_from_json(const char* json, bispec_surface** out)
{
    return guarded([&] {
        require(json, "json");
        require(out, "output pointer");
        *out = new bispec_surface{bispec::spec_from_json(nlohmann::json::parse(json))};
    });
}

bispec_status bispec_surface_to_json(const bispec_surface* s, char** out)
{
    return guarded([&] {
        require(s, "surface");
        emit(out, dump(bispec::to_json(s->spec)));
    });
}

bispec_status bispec_surface_label(const bispec_surface* s, char** out)
{
    return guarded([&] {
        require(s, "surface");
        emit(out, s->spec.label());
    });
}

int bispec_surface_dimension(const bispec_surface* s)
{
    return s ? s->spec.dimension() : 0;
}

int bispec_surface_is_minimal(const bispec_surface* s)
{
    return s && bispec::is_minimal(s->spec) ? 1 : 0;
}

void bispec_surface_free(bispec_surface* s)
{
    delete s;
}

// ---- exact spectra

bispec_status bispec_spectrum_analytic(const bispec_surface* s, bispec_problem problem, double cutoff,
    bispec_spectrum** out)
{
    return guarded([&] {
        require(s, "surface");
        require(out, "output pointer");
        const bispec::Problem p = to_core(problem);
        if (cutoff <= 0.0) cutoff = bispec::first_eigenvalue_cutoff(s->spec);
        bispec::Spectrum laplace = bispec::laplace_spectrum(s->spec, cutoff);
        if (p == bispec::Problem::Laplace) *out = new bispec_spectrum{std::move(laplace)};
        else *out = new bispec_spectrum{bispec::derived_spectrum(laplace, p)};
    });
}

size_t bispec_spectrum_size(const bispec_spectrum* sp)
{
    return sp ? sp->spectrum.entries.size() : 0;
}

bispec_status bispec_spectrum_entry(const bispec_spectrum* sp, size_t index, int64_t* num, int64_t* den,
    int64_t* multiplicity)
{
    return guarded([&] {
        require(sp, "spectrum");
        if (index >= sp->spectrum.entries.size())
            throw bispec::InvalidArgument("spectrum index " + std::to_string(index) + " out of range");
        const auto& e = sp->spectrum.entries[index];
        if (num) *num = e.value.num();
        if (den) *den = e.value.den();
        if (multiplicity) *multiplicity = e.multiplicity;
    });
}

bispec_status bispec_spectrum_to_json(const bispec_spectrum* sp, char** out)
{
    return guarded([&] {
        require(sp, "spectrum");
        emit(out, dump(bispec::to_json(sp->spectrum)));
    });
}

bispec_status bispec_spectrum_to_csv(const bispec_spectrum* sp, char** out)
{
    return guarded([&] {
        require(sp, "spectrum");
        std::ostringstream os;
        bispec::write_csv(os, sp->spectrum);
        emit(out, os.str());
    });
}

void bispec_spectrum_free(bispec_spectrum* sp)
{
    delete sp;
}

// ---- meshes

namespace {

bispec_mesh* wrap(bispec::SimplicialMesh mesh)
{
    return new bispec_mesh{std::make_shared<const bispec::SimplicialMesh>(std::move(mesh))};
}

} // namespace

bispec_status bispec_mesh_circle(int segments, bispec_mesh** out)
{
    return guarded([&] {
        require(out, "output pointer");
        *out = wrap(bispec::mesh_circle(segments));
    });
}

bispec_status bispec_mesh_torus(const bispec_surface* s, int grid, bispec_mesh** out)
{
    return guarded([&] {
        require(s, "surface");
        require(out, "output pointer");
        *out = wrap(bispec::mesh_product_torus(s->spec, grid));
    });
}

bispec_status bispec_mesh_icosphere(int levels, bispec_mesh** out)
{
    return guarded([&] {
        require(out, "output pointer");
        *out = wrap(bispec::mesh_great_sphere2(levels));
    });
}

bispec_status bispec_mesh_for(const bispec_surface* s, int resolution, bispec_mesh** out)
{
    return guarded([&] {
        require(s, "surface");
        require(out, "output pointer");
        bispec::NumericOptions o;
        o.grid = o.levels = o.segments = resolution;
        *out = wrap(bispec::mesh_for(s->spec, o));
    });
}

bispec_status bispec_mesh_refine(const bispec_mesh* m, bispec_mesh** out)
{
    return guarded([&] {
        require(m, "mesh");
        require(out, "output pointer");
        *out = wrap(bispec::refine(*m->mesh));
    });
}

bispec_status bispec_mesh_info_get(const bispec_mesh* m, bispec_mesh_info* out)
{
    return guarded([&] {
        require(m, "mesh");
        require(out, "output pointer");
        const auto stats = bispec::mesh_stats(*m->mesh);
        const auto topo = bispec::mesh_topology(*m->mesh);
        out->dim = m->mesh->dim;
        out->ambient_dim = m->mesh->ambient_dim();
        out->vertices = m->mesh->vertex_count();
        out->simplices = m->mesh->simplex_count();
        out->euler_characteristic = topo.euler_characteristic;
        out->h_max = stats.h_max;
        out->h_min = stats.h_min;
        out->total_measure = stats.total_measure;
        out->quality_min = stats.quality_min;
    });
}

bispec_status bispec_mesh_write_off(const bispec_mesh* m, const char* path)
{
    if (!m) return fail(BISPEC_ERR_INVALID_ARGUMENT, "mesh is null");
    if (!path) return fail(BISPEC_ERR_INVALID_ARGUMENT, "path is null");
    return write_file(path, [&](std::ostream& f) { bispec::write_off(f, *m->mesh); });
}

bispec_status bispec_mesh_to_json(const bispec_mesh* m, char** out)
{
    return guarded([&] {
        require(m, "mesh");
        emit(out, dump(bispec::to_json(*m->mesh)));
    });
}

void bispec_mesh_free(bispec_mesh* m)
{
    delete m;
}

// ---- operators

bispec_status bispec_operators_assemble(const bispec_mesh* m, bispec_mass_mode mode, bispec_operators** out)
{
    return guarded([&] {
        require(m, "mesh");
        require(out, "output pointer");
        bispec::MassMode core;
        switch (mode) {
        case BISPEC_MASS_CONSISTENT: core = bispec::MassMode::Consistent; break;
        case BISPEC_MASS_LUMPED: core = bispec::MassMode::Lumped; break;
        default: throw bispec::InvalidArgument("unknown mass mode " + std::to_string(static_cast<int>(mode)));
        }
        *out = new bispec_operators{bispec::assemble_operators(m->mesh, core)};
    });
}

int64_t bispec_operators_order(const bispec_operators* ops)
{
    return ops ? ops->ops.order() : 0;
}

bispec_status bispec_operators_write_matrix(const bispec_operators* ops, char which, const char* path)
{
    if (!ops) return fail(BISPEC_ERR_INVALID_ARGUMENT, "operators is null");
    if (which != 'K' && which != 'M') return fail(BISPEC_ERR_INVALID_ARGUMENT, "matrix selector must be 'K' or 'M'");
    if (!path) return fail(BISPEC_ERR_INVALID_ARGUMENT, "path is null");
    const auto& matrix = which == 'K' ? ops->ops.stiffness : ops->ops.mass;
    return write_file(path, [&](std::ostream& f) { bispec::write_matrix_market(f, matrix); });
}

bispec_status bispec_takahashi_residual(const bispec_operators* ops, int n, double* out)
{
    return guarded([&] {
        require(ops, "operators");
        require(out, "output pointer");
        *out = bispec::takahashi_residual(ops->ops, n);
    });
}

void bispec_operators_free(bispec_operators* ops)
{
    delete ops;
}

// ---- eigenproblems

bispec_status bispec_eigs(const bispec_operators* ops, bispec_problem problem, int count,
    bispec_bilaplace_method method, const bispec_solver_options* options, bispec_eigen_result** out)
{
    return guarded([&] {
        require(ops, "operators");
        require(out, "output pointer");
        const bispec::SolverOptions o = to_core(options);
        switch (to_core(problem)) {
        case bispec::Problem::Laplace: *out = new bispec_eigen_result{bispec::laplace_eigs(ops->ops, count, o)}; break;
        case bispec::Problem::BiLaplace: {
            bispec::BiLaplaceMethod m;
            if (method == BISPEC_OPERATOR_SQUARE) m = bispec::BiLaplaceMethod::OperatorSquare;
            else if (method == BISPEC_MIXED) m = bispec::BiLaplaceMethod::Mixed;
            else throw bispec::InvalidArgument("unknown bi-Laplace method " + std::to_string(static_cast<int>(method)));
            *out = new bispec_eigen_result{bispec::bilaplace_eigs(ops->ops, count, m, o)};
            break;
        }
        case bispec::Problem::Buckling: *out = new bispec_eigen_result{bispec::buckling_eigs(ops->ops, count, o)}; break;
        }
    });
}

size_t bispec_eigen_count(const bispec_eigen_result* r)
{
    return r ? static_cast<size_t>(r->result.count()) : 0;
}

int64_t bispec_eigen_order(const bispec_eigen_result* r)
{
    return r ? r->result.vectors.rows() : 0;
}

bispec_status bispec_eigen_value(const bispec_eigen_result* r, size_t index, double* value, double* residual)
{
    return guarded([&] {
        require(r, "eigen result");
        if (index >= static_cast<size_t>(r->result.count()))
            throw bispec::InvalidArgument("eigenpair index " + std::to_string(index) + " out of range");
        if (value) *value = r->result.values[static_cast<Eigen::Index>(index)];
        if (residual) *residual = r->result.residuals[index];
    });
}

bispec_status bispec_eigen_vector(const bispec_eigen_result* r, size_t index, double* buffer, size_t len)
{
    return guarded([&] {
        require(r, "eigen result");
        require(buffer, "buffer");
        if (index >= static_cast<size_t>(r->result.count()))
            throw bispec::InvalidArgument("eigenpair index " + std::to_string(index) + " out of range");
        if (len != static_cast<size_t>(r->result.vectors.rows()))
            throw bispec::InvalidArgument("buffer length does not match the matrix order");
        const Eigen::VectorXd v = r->result.vectors.col(static_cast<Eigen::Index>(index));
        std::memcpy(buffer, v.data(), len * sizeof(double));
    });
}

bispec_status bispec_eigen_to_json(const bispec_eigen_result* r, const char* vectors_file, char** out)
{
    return guarded([&] {
        require(r, "eigen result");
        emit(out, dump(bispec::to_json(r->result, vectors_file ? vectors_file : "")));
    });
}

bispec_status bispec_eigen_write_vectors(const bispec_eigen_result* r, const char* path)
{
    if (!r) return fail(BISPEC_ERR_INVALID_ARGUMENT, "eigen result is null");
    if (!path) return fail(BISPEC_ERR_INVALID_ARGUMENT, "path is null");
    return write_file(path, [&](std::ostream& f) { bispec::write_vectors(f, r->result); },
        std::ios::out | std::ios::binary);
}

bispec_status bispec_eigen_spectrum_json(const bispec_eigen_result* r, char** out)
{
    return guarded([&] {
        require(r, "eigen result");
        emit(out, dump(bispec::numeric_spectrum_json(r->result)));
    });
}

bispec_status bispec_eigen_spectrum_csv(const bispec_eigen_result* r, char** out)
{
    return guarded([&] {
        require(r, "eigen result");
        std::ostringstream os;
        bispec::write_numeric_csv(os, r->result);
        emit(out, os.str());
    });
}

void bispec_eigen_free(bispec_eigen_result* r)
{
    delete r;
}

// ---- verification

namespace {

bispec_report* make_report(std::vector<bispec::VerificationReport> reports, bool collection)
{
    auto* r = new bispec_report{std::move(reports), collection, {}, {}};
    r->index();
    return r;
}

} // namespace

bispec_status bispec_verify_analytic(const bispec_surface* s, double cutoff, bispec_report** out)
{
    return guarded([&] {
        require(s, "surface");
        require(out, "output pointer");
        *out = make_report({bispec::verify_analytic(s->spec, cutoff)}, false);
    });
}

bispec_status bispec_verify_numeric(const bispec_surface* s, const bispec_numeric_options* options,
    bispec_report** out)
{
    return guarded([&] {
        require(s, "surface");
        require(out, "output pointer");
        bispec::NumericOptions o;
        if (options) {
            o.grid = options->grid;
            o.levels = options->levels;
            o.segments = options->segments;
            o.count = options->count;
            o.tol = options->tol;
            o.slack = options->slack;
            o.takahashi_tol = options->takahashi_tol;
            o.solver = to_core(&options->solver);
        }
        *out = make_report({bispec::verify_numeric(s->spec, o)}, false);
    });
}

bispec_status bispec_verify_all_minimal(int n_max, bispec_report** out)
{
    return guarded([&] {
        require(out, "output pointer");
        *out = make_report(bispec::verify_all_minimal(n_max), true);
    });
}

bispec_status bispec_converge(const bispec_surface* s, const bispec_study_options* options, bispec_report** out)
{
    return guarded([&] {
        require(s, "surface");
        require(options, "study options");
        require(out, "output pointer");
        bispec::StudyOptions o;
        o.base = options->base;
        o.levels = options->levels;
        o.quantity = to_core(options->quantity);
        o.count = options->count;
        o.solver = to_core(&options->solver);
        bispec::VerificationReport report;
        report.spec = s->spec;
        report.convergence = bispec::convergence_study(s->spec, o);
        report.mesh = report.convergence->family + " base=" + std::to_string(o.base) + " levels=" +
                      std::to_string(o.levels);
        *out = make_report({std::move(report)}, false);
    });
}

int bispec_report_passed(const bispec_report* r)
{
    if (!r) return 0;
    for (const auto& rep : r->reports)
        if (!rep.ok()) return 0;
    return 1;
}

size_t bispec_report_check_count(const bispec_report* r)
{
    return r ? r->flat.size() : 0;
}

bispec_status bispec_report_check(const bispec_report* r, size_t index, bispec_check* out)
{
    return guarded([&] {
        require(r, "report");
        require(out, "output pointer");
        if (index >= r->flat.size()) throw bispec::InvalidArgument("check index " + std::to_string(index) + " out of range");
        const bispec::CheckEntry& c = *r->flat[index];
        out->name = r->names[index].c_str();
        out->claim_ref = c.claim_ref.c_str();
        out->measured = c.measured;
        out->expected = c.expected;
        out->tolerance = c.tolerance;
        out->pass = c.pass ? 1 : 0;
        out->expected_failure = c.expected_failure ? 1 : 0;
    });
}

bispec_status bispec_report_to_json(const bispec_report* r, char** out)
{
    return guarded([&] {
        require(r, "report");
        if (!r->collection && r->reports.size() == 1) {
            emit(out, dump(bispec::to_json(r->reports.front())));
            return;
        }
        nlohmann::json list = nlohmann::json::array();
        for (const auto& rep : r->reports) list.push_back(bispec::to_json(rep));
        emit(out, dump({{"reports", list}, {"ok", bispec_report_passed(r) == 1}}));
    });
}

bispec_status bispec_report_to_csv(const bispec_report* r, char** out)
{
    return guarded([&] {
        require(r, "report");
        std::ostringstream os;
        bispec::write_csv(os, r->reports);
        emit(out, os.str());
    });
}

void bispec_report_free(bispec_report* r)
{
    delete r;
}

} // extern "C"
