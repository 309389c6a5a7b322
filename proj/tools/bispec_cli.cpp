// Command-line front end. Everything goes through the C interface.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or config error,
// 3 runtime failure (no convergence, I/O, resource guard).

#include "bispec/bispec.h"
#include "run_config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using bispec::cli::ConfigError;
using bispec::cli::PathKind;
using bispec::cli::RunConfig;
using bispec::cli::SubjectKind;
using nlohmann::json;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// Error raised by a C call; usage errors map to exit code 2.
class ApiError : public std::runtime_error {
public:
    ApiError(bispec_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    int exit_code() const { return status_ == BISPEC_ERR_INVALID_ARGUMENT ? kExitUsage : kExitRuntime; }

private:
    bispec_status status_;
};

void ok(bispec_status status)
{
    if (status != BISPEC_OK) throw ApiError(status, bispec_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using Surface = std::unique_ptr<bispec_surface, Deleter<bispec_surface, bispec_surface_free>>;
using Mesh = std::unique_ptr<bispec_mesh, Deleter<bispec_mesh, bispec_mesh_free>>;
using Operators = std::unique_ptr<bispec_operators, Deleter<bispec_operators, bispec_operators_free>>;
using EigenResult = std::unique_ptr<bispec_eigen_result, Deleter<bispec_eigen_result, bispec_eigen_free>>;
using Spectrum = std::unique_ptr<bispec_spectrum, Deleter<bispec_spectrum, bispec_spectrum_free>>;
using Report = std::unique_ptr<bispec_report, Deleter<bispec_report, bispec_report_free>>;

std::string take(char* s)
{
    std::string out = s ? s : "";
    bispec_string_free(s);
    return out;
}

template <typename F>
std::string text(F&& call)
{
    char* s = nullptr;
    ok(call(&s));
    return take(s);
}

void write_text(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw ApiError(BISPEC_ERR_IO, "cannot write '" + path.string() + "'");
}

// ---- flags shared by the subcommands

struct Flags {
    std::string config_file;
    std::vector<int> clifford;
    int great_sphere = 0;
    std::vector<int> product;
    double r1sq = 0.0;
    bool analytic = false;
    bool numeric = false;
    double cutoff = 0.0;
    int grid = 0;
    int levels = 0;
    int segments = 0;
    int count = 0;
    double eig_tol = 0.0;
    std::string solver;
    double tol = 0.0;
    double slack = 0.0;
    double takahashi_tol = 0.0;
    std::string out;
    bool all_minimal = false;
    int n_max = 0;
    std::string quantity;
    int num_levels = 0;
    int base = 0;
};

void add_subject_flags(CLI::App& app, Flags& f)
{
    app.add_option("--config", f.config_file, "RunConfig JSON file; flags override it");
    app.add_option("--clifford", f.clifford, "minimal S^p(sqrt(p/n)) x S^q(sqrt(q/n))")->expected(2)->type_name("P Q");
    app.add_option("--great-sphere", f.great_sphere, "totally geodesic S^n")->type_name("N");
    app.add_option("--product", f.product, "S^p(r1) x S^q(r2), with --r1sq")->expected(2)->type_name("P Q");
    app.add_option("--r1sq", f.r1sq, "r1^2 of a --product (r2^2 = 1 - r1^2)");
}

void add_mesh_flags(CLI::App& app, Flags& f)
{
    app.add_option("--grid", f.grid, "torus lattice size");
    app.add_option("--levels", f.levels, "icosphere subdivision levels");
    app.add_option("--segments", f.segments, "circle segments");
}

void add_solver_flags(CLI::App& app, Flags& f)
{
    app.add_option("--count", f.count, "eigenpairs per problem, kernel included");
    app.add_option("--eig-tol", f.eig_tol, "relative residual bound per eigenpair");
    app.add_option("--solver", f.solver, "auto, dense or iterative");
}

void add_path_flags(CLI::App& app, Flags& f)
{
    auto* a = app.add_flag("--analytic", f.analytic, "exact catalog spectra");
    auto* n = app.add_flag("--numeric", f.numeric, "finite element spectra");
    a->excludes(n);
}

void add_output_flag(CLI::App& app, Flags& f)
{
    app.add_option("--out", f.out, "output directory");
}

bool given(const CLI::App& app, const char* name)
{
    const CLI::Option* o = app.get_option_no_throw(name);
    return o && o->count() > 0;
}

// Config file first, then every flag the user actually passed.
RunConfig resolve(const CLI::App& app, const Flags& f)
{
    RunConfig c;
    if (given(app, "--config")) c = bispec::cli::load_config(f.config_file);

    int subjects = 0;
    if (given(app, "--clifford")) {
        ++subjects;
        c.subject = {};
        c.subject.kind = SubjectKind::Clifford;
        c.subject.p = f.clifford.at(0);
        c.subject.q = f.clifford.at(1);
    }
    if (given(app, "--great-sphere")) {
        ++subjects;
        c.subject = {};
        c.subject.kind = SubjectKind::GreatSphere;
        c.subject.n = f.great_sphere;
    }
    if (given(app, "--product")) {
        ++subjects;
        if (!given(app, "--r1sq")) throw ConfigError("--r1sq", "required with --product");
        c.subject = {};
        c.subject.kind = SubjectKind::Product;
        c.subject.p = f.product.at(0);
        c.subject.q = f.product.at(1);
        c.subject.r1_sq = f.r1sq;
    } else if (given(app, "--r1sq")) {
        throw ConfigError("--r1sq", "only valid with --product");
    }
    if (given(app, "--all-minimal")) {
        ++subjects;
        c.subject = {};
        c.subject.kind = SubjectKind::AllMinimal;
        c.subject.n_max = given(app, "--n-max") ? f.n_max : 12;
    } else if (given(app, "--n-max")) {
        throw ConfigError("--n-max", "only valid with --all-minimal");
    }
    if (subjects > 1) throw ConfigError("subject", "give exactly one of --clifford, --great-sphere, --product, --all-minimal");

    if (given(app, "--analytic")) c.path = PathKind::Analytic;
    if (given(app, "--numeric")) c.path = PathKind::Numeric;
    if (given(app, "--cutoff")) c.cutoff = f.cutoff;
    if (given(app, "--grid")) c.mesh.grid = f.grid;
    if (given(app, "--levels")) c.mesh.levels = f.levels;
    if (given(app, "--segments")) c.mesh.segments = f.segments;
    if (given(app, "--count")) c.count = f.count;
    if (given(app, "--eig-tol")) c.solver.tol = f.eig_tol;
    if (given(app, "--solver")) c.solver.mode = f.solver;
    if (given(app, "--tol")) c.tol = f.tol;
    if (given(app, "--slack")) c.slack = f.slack;
    if (given(app, "--takahashi-tol")) c.takahashi_tol = f.takahashi_tol;
    if (given(app, "--out")) c.output_dir = f.out;
    if (given(app, "--quantity")) c.study.quantity = f.quantity;
    if (given(app, "--num-levels")) c.study.num_levels = f.num_levels;
    if (given(app, "--base")) c.study.base = f.base;
    c.validate();
    return c;
}

Surface make_surface(const RunConfig& c)
{
    bispec_surface* s = nullptr;
    switch (c.subject.kind) {
    case SubjectKind::GreatSphere: ok(bispec_surface_great_sphere(c.subject.n, &s)); break;
    case SubjectKind::Clifford: ok(bispec_surface_clifford(c.subject.p, c.subject.q, &s)); break;
    case SubjectKind::Product: ok(bispec_surface_product(c.subject.p, c.subject.q, c.subject.r1_sq, &s)); break;
    default: throw ConfigError("subject", "this command needs a single surface");
    }
    return Surface(s);
}

bispec_solver_options solver_options(const RunConfig& c)
{
    bispec_solver_options o;
    bispec_solver_options_default(&o);
    if (c.solver.mode == "dense") o.mode = BISPEC_SOLVER_DENSE;
    else if (c.solver.mode == "iterative") o.mode = BISPEC_SOLVER_ITERATIVE;
    else o.mode = BISPEC_SOLVER_AUTO;
    o.tol = c.solver.tol;
    o.max_restarts = c.solver.max_restarts;
    o.krylov_dim = c.solver.krylov_dim;
    if (!c.deterministic && c.seed) o.seed = *c.seed;
    return o;
}

// Resolution of the mesh generator that matches the surface.
int resolution_for(const bispec_surface* s, const RunConfig& c)
{
    const int n = bispec_surface_dimension(s);
    if (c.subject.kind == SubjectKind::GreatSphere) return n == 1 ? c.mesh.segments : c.mesh.levels;
    return c.mesh.grid;
}

fs::path prepare_output(const RunConfig& c)
{
    const fs::path dir(c.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ApiError(BISPEC_ERR_IO, "cannot create output directory '" + dir.string() + "': " + ec.message());
    write_text(dir / "run_config.json", bispec::cli::to_json(c).dump(2) + "\n");
    return dir;
}

std::string format(double x)
{
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

// ---- spectrum

const char* problem_name(bispec_problem p)
{
    switch (p) {
    case BISPEC_LAPLACE: return "laplace";
    case BISPEC_BILAPLACE: return "bilaplace";
    case BISPEC_BUCKLING: return "buckling";
    }
    return "?";
}

int cmd_spectrum(const RunConfig& c, const std::string& bilaplace_method)
{
    Surface surface = make_surface(c);
    const fs::path dir = prepare_output(c);
    const std::string label = text([&](char** o) { return bispec_surface_label(surface.get(), o); });
    std::cout << "subject " << label << " (" << bispec::cli::to_string(c.path) << ")\n";
    std::cout << std::left << std::setw(10) << "problem" << std::setw(20) << "first nonzero" << "multiplicity\n";

    const bispec_problem problems[] = {BISPEC_LAPLACE, BISPEC_BILAPLACE, BISPEC_BUCKLING};
    if (c.path == PathKind::Analytic) {
        for (bispec_problem p : problems) {
            bispec_spectrum* raw = nullptr;
            ok(bispec_spectrum_analytic(surface.get(), p, c.cutoff, &raw));
            Spectrum sp(raw);
            const std::string name = problem_name(p);
            write_text(dir / ("spectrum_" + name + ".json"), text([&](char** o) { return bispec_spectrum_to_json(sp.get(), o); }));
            write_text(dir / ("spectrum_" + name + ".csv"), text([&](char** o) { return bispec_spectrum_to_csv(sp.get(), o); }));
            for (size_t i = 0; i < bispec_spectrum_size(sp.get()); ++i) {
                int64_t num = 0, den = 1, mult = 0;
                ok(bispec_spectrum_entry(sp.get(), i, &num, &den, &mult));
                if (num == 0) continue;
                const std::string value = den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
                std::cout << std::setw(10) << name << std::setw(20) << value << mult << "\n";
                break;
            }
        }
        return 0;
    }

    bispec_mesh* raw_mesh = nullptr;
    ok(bispec_mesh_for(surface.get(), resolution_for(surface.get(), c), &raw_mesh));
    Mesh mesh(raw_mesh);
    bispec_operators* raw = nullptr;
    ok(bispec_operators_assemble(mesh.get(), BISPEC_MASS_CONSISTENT, &raw));
    Operators consistent(raw);
    ok(bispec_operators_assemble(mesh.get(), BISPEC_MASS_LUMPED, &raw));
    Operators lumped(raw);
    const bispec_solver_options opts = solver_options(c);
    const bispec_bilaplace_method method = bilaplace_method == "opsquare" ? BISPEC_OPERATOR_SQUARE : BISPEC_MIXED;

    for (bispec_problem p : problems) {
        const bispec_operators* ops = p == BISPEC_LAPLACE || (p == BISPEC_BILAPLACE && method == BISPEC_MIXED)
                                          ? consistent.get()
                                          : lumped.get();
        bispec_eigen_result* r = nullptr;
        ok(bispec_eigs(ops, p, c.count, method, &opts, &r));
        EigenResult result(r);
        const std::string name = problem_name(p);
        write_text(dir / ("spectrum_" + name + ".json"), text([&](char** o) { return bispec_eigen_spectrum_json(result.get(), o); }));
        write_text(dir / ("spectrum_" + name + ".csv"), text([&](char** o) { return bispec_eigen_spectrum_csv(result.get(), o); }));
        write_text(dir / ("eigen_" + name + ".json"), text([&](char** o) { return bispec_eigen_to_json(result.get(), nullptr, o); }));

        const json clusters = json::parse(text([&](char** o) { return bispec_eigen_spectrum_json(result.get(), o); }));
        for (const auto& e : clusters.at("entries")) {
            if (e.at("value").get<double>() <= 1e-9) continue;
            std::cout << std::setw(10) << name << std::setw(20) << format(e.at("value").get<double>())
                      << e.at("mult").get<int>() << "\n";
            break;
        }
    }
    return 0;
}

// ---- verify

void print_checks(const bispec_report* report)
{
    std::vector<bispec_check> checks(bispec_report_check_count(report));
    std::size_t width = 8;
    for (size_t i = 0; i < checks.size(); ++i) {
        ok(bispec_report_check(report, i, &checks[i]));
        width = std::max(width, std::strlen(checks[i].name) + 2);
    }
    const auto w = static_cast<int>(width);
    std::cout << std::left << std::setw(w) << "check" << std::setw(18) << "measured" << std::setw(18) << "expected"
              << std::setw(12) << "tolerance" << "status\n";
    for (const bispec_check& c : checks) {
        const char* status = c.expected_failure ? (c.pass ? "xpass" : "xfail") : (c.pass ? "pass" : "fail");
        std::cout << std::setw(w) << c.name << std::setw(18) << format(c.measured) << std::setw(18) << format(c.expected)
                  << std::setw(12) << format(c.tolerance) << status << "\n";
    }
}

int cmd_verify(const RunConfig& c)
{
    bispec_report* raw = nullptr;
    if (c.subject.kind == SubjectKind::AllMinimal) {
        if (c.path != PathKind::Analytic) throw ConfigError("path", "--all-minimal runs on the analytic path only");
        ok(bispec_verify_all_minimal(c.subject.n_max, &raw));
    } else {
        Surface surface = make_surface(c);
        if (c.path == PathKind::Analytic) {
            ok(bispec_verify_analytic(surface.get(), c.cutoff, &raw));
        } else {
            bispec_numeric_options o;
            bispec_numeric_options_default(&o);
            o.grid = c.mesh.grid;
            o.levels = c.mesh.levels;
            o.segments = c.mesh.segments;
            o.count = c.count;
            o.tol = c.tol;
            o.slack = c.slack;
            o.takahashi_tol = c.takahashi_tol;
            o.solver = solver_options(c);
            ok(bispec_verify_numeric(surface.get(), &o, &raw));
        }
    }
    Report report(raw);
    const fs::path dir = prepare_output(c);
    write_text(dir / "report.json", text([&](char** o) { return bispec_report_to_json(report.get(), o); }));
    write_text(dir / "report.csv", text([&](char** o) { return bispec_report_to_csv(report.get(), o); }));
    print_checks(report.get());
    const bool passed = bispec_report_passed(report.get()) == 1;
    std::cout << (passed ? "verification passed" : "verification FAILED") << "\n";
    return passed ? 0 : kExitFailed;
}

// ---- converge

int default_base(const RunConfig& c)
{
    if (c.subject.kind == SubjectKind::GreatSphere) return c.subject.n == 1 ? 64 : 3;
    return 32;
}

int cmd_converge(const RunConfig& c)
{
    Surface surface = make_surface(c);
    bispec_study_options o;
    bispec_study_options_default(&o);
    o.base = c.study.base > 0 ? c.study.base : default_base(c);
    o.levels = c.study.num_levels;
    ok(bispec_study_quantity_from_string(c.study.quantity.c_str(), &o.quantity));
    o.count = c.count;
    o.solver = solver_options(c);
    bispec_report* raw = nullptr;
    ok(bispec_converge(surface.get(), &o, &raw));
    Report report(raw);

    const std::string report_json = text([&](char** out) { return bispec_report_to_json(report.get(), out); });
    const json record = json::parse(report_json).at("convergence");
    const fs::path dir = prepare_output(c);
    write_text(dir / "convergence.json", report_json);

    // rate i comes from levels i..i+2 (or i..i+1 against a reference) and
    // is listed on the finest of them
    const auto& values = record.at("values");
    const auto& rates = record.at("rates");
    const std::size_t offset = values.size() - rates.size();
    std::ostringstream csv;
    csv << std::setprecision(17) << "level,resolution,h,value,multiplicity,rate\n";
    std::cout << std::left << std::setw(8) << "level" << std::setw(12) << "resolution" << std::setw(16) << "h"
              << std::setw(20) << c.study.quantity << "rate\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string rate = i >= offset ? format(rates.at(i - offset).get<double>()) : "";
        csv << i << ',' << record.at("levels").at(i).get<int>() << ',' << record.at("h").at(i).get<double>() << ','
            << values.at(i).get<double>() << ',' << record.at("multiplicities").at(i).get<int>() << ',' << rate << '\n';
        std::cout << std::setw(8) << i << std::setw(12) << record.at("levels").at(i).get<int>() << std::setw(16)
                  << format(record.at("h").at(i).get<double>()) << std::setw(20) << format(values.at(i).get<double>())
                  << rate << "\n";
    }
    write_text(dir / "convergence.csv", csv.str());
    std::cout << "estimated rate " << format(record.at("estimated_rate").get<double>()) << ", extrapolated "
              << format(record.at("extrapolated").get<double>())
              << (record.at("flagged").get<bool>() ? " (flagged: rate far from 2)" : "") << "\n";
    return 0;
}

// ---- export

int cmd_export(const RunConfig& c, const std::string& mass)
{
    Surface surface = make_surface(c);
    bispec_mesh* raw_mesh = nullptr;
    ok(bispec_mesh_for(surface.get(), resolution_for(surface.get(), c), &raw_mesh));
    Mesh mesh(raw_mesh);
    bispec_operators* raw = nullptr;
    ok(bispec_operators_assemble(mesh.get(), mass == "lumped" ? BISPEC_MASS_LUMPED : BISPEC_MASS_CONSISTENT, &raw));
    Operators ops(raw);
    const fs::path dir = prepare_output(c);
    ok(bispec_mesh_write_off(mesh.get(), (dir / "mesh.off").string().c_str()));
    write_text(dir / "mesh.json", text([&](char** o) { return bispec_mesh_to_json(mesh.get(), o); }));
    ok(bispec_operators_write_matrix(ops.get(), 'K', (dir / "K.mtx").string().c_str()));
    ok(bispec_operators_write_matrix(ops.get(), 'M', (dir / "M.mtx").string().c_str()));
    bispec_mesh_info info;
    ok(bispec_mesh_info_get(mesh.get(), &info));
    std::cout << "vertices " << info.vertices << ", simplices " << info.simplices << ", euler "
              << info.euler_characteristic << ", h_max " << format(info.h_max) << ", min quality "
              << format(info.quality_min) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral checks for minimal isoparametric hypersurfaces of round spheres"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bispec_version()));

    Flags spectrum_flags, verify_flags, converge_flags, export_flags;
    std::string bilaplace_method = "mixed";
    std::string mass = "consistent";

    auto* spectrum = app.add_subcommand("spectrum", "write Laplace, bi-Laplace and buckling spectra");
    add_subject_flags(*spectrum, spectrum_flags);
    add_path_flags(*spectrum, spectrum_flags);
    spectrum->add_option("--cutoff", spectrum_flags.cutoff, "largest Laplace eigenvalue kept (analytic)");
    add_mesh_flags(*spectrum, spectrum_flags);
    add_solver_flags(*spectrum, spectrum_flags);
    spectrum->add_option("--bilaplace-method", bilaplace_method, "mixed or opsquare (numeric)")
        ->check(CLI::IsMember({"mixed", "opsquare"}));
    add_output_flag(*spectrum, spectrum_flags);

    auto* verify = app.add_subcommand("verify", "check the eigenvalue identities and write a report");
    add_subject_flags(*verify, verify_flags);
    verify->add_flag("--all-minimal", verify_flags.all_minimal, "every minimal catalog surface up to --n-max");
    verify->add_option("--n-max", verify_flags.n_max, "largest dimension for --all-minimal (default 12)");
    add_path_flags(*verify, verify_flags);
    verify->add_option("--cutoff", verify_flags.cutoff, "largest Laplace eigenvalue kept (analytic)");
    add_mesh_flags(*verify, verify_flags);
    add_solver_flags(*verify, verify_flags);
    verify->add_option("--tol", verify_flags.tol, "relative tolerance on continuum targets");
    verify->add_option("--slack", verify_flags.slack, "slack on discrete identities");
    verify->add_option("--takahashi-tol", verify_flags.takahashi_tol, "bound on the coordinate-function residual");
    add_output_flag(*verify, verify_flags);

    auto* converge = app.add_subcommand("converge", "mesh refinement study of one quantity");
    add_subject_flags(*converge, converge_flags);
    converge->add_option("--quantity", converge_flags.quantity,
        "lambda1, Lambda1-opsquare, Lambda1-mixed, Gamma1 or takahashi");
    converge->add_option("--num-levels", converge_flags.num_levels, "refinement levels (>= 3)");
    converge->add_option("--base", converge_flags.base, "base resolution (grid, level or segments)");
    add_solver_flags(*converge, converge_flags);
    add_output_flag(*converge, converge_flags);

    auto* exporter = app.add_subcommand("export", "write the mesh (OFF, JSON) and K, M (MatrixMarket)");
    add_subject_flags(*exporter, export_flags);
    add_mesh_flags(*exporter, export_flags);
    exporter->add_option("--mass", mass, "consistent or lumped")->check(CLI::IsMember({"consistent", "lumped"}));
    add_output_flag(*exporter, export_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(resolve(*spectrum, spectrum_flags), bilaplace_method);
        if (verify->parsed()) return cmd_verify(resolve(*verify, verify_flags));
        if (converge->parsed()) return cmd_converge(resolve(*converge, converge_flags));
        if (exporter->parsed()) return cmd_export(resolve(*exporter, export_flags), mass);
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ApiError& e) {
        std::cerr << (e.exit_code() == kExitUsage ? "usage error: " : "error: ") << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
