#include "bispec/serialize.hpp"

#include "bispec/error.hpp"

#include <bit>
#include <cstring>
#include <iomanip>
#include <ostream>

namespace bispec {

namespace {

std::string_view kind_name(SurfaceKind kind)
{
    return kind == SurfaceKind::GreatSphere ? "GreatSphere" : "ProductOfSpheres";
}

SurfaceKind kind_from_name(const std::string& name)
{
    if (name == "GreatSphere") return SurfaceKind::GreatSphere;
    if (name == "ProductOfSpheres") return SurfaceKind::ProductOfSpheres;
    throw InvalidArgument("unknown hypersurface kind '" + name + "'");
}

template <typename T>
T field(const json& j, const char* key)
{
    if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
    }
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

json to_json(const HypersurfaceSpec& spec)
{
    json factors = json::array();
    for (const auto& f : spec.factors())
        factors.push_back({{"dim", f.dim}, {"radius_sq_num", f.radius_sq.num()}, {"radius_sq_den", f.radius_sq.den()}});
    return {{"kind", kind_name(spec.kind())}, {"n", spec.dimension()}, {"factors", factors}};
}

HypersurfaceSpec spec_from_json(const json& j)
{
    if (!j.is_object()) throw InvalidArgument("hypersurface spec must be a JSON object");
    std::vector<SphereFactor> factors;
    if (j.contains("factors")) {
        for (const auto& f : j.at("factors"))
            factors.push_back({field<int>(f, "dim"),
                Rational(field<std::int64_t>(f, "radius_sq_num"), field<std::int64_t>(f, "radius_sq_den"))});
    }
    return make_surface(kind_from_name(field<std::string>(j, "kind")), field<int>(j, "n"), std::move(factors));
}

json to_json(const Spectrum& spectrum)
{
    json entries = json::array();
    for (const auto& e : spectrum.entries)
        entries.push_back({{"value_num", e.value.num()}, {"value_den", e.value.den()}, {"mult", e.multiplicity}});
    return {{"problem", to_string(spectrum.problem)}, {"cutoff", spectrum.cutoff}, {"entries", entries}};
}

Spectrum spectrum_from_json(const json& j)
{
    Spectrum s;
    s.problem = problem_from_string(field<std::string>(j, "problem"));
    s.cutoff = field<double>(j, "cutoff");
    for (const auto& e : field<json>(j, "entries"))
        s.entries.push_back({Rational(field<std::int64_t>(e, "value_num"), field<std::int64_t>(e, "value_den")),
            field<std::int64_t>(e, "mult")});
    return s;
}

void write_csv(std::ostream& out, const Spectrum& spectrum)
{
    out << "value,multiplicity\n";
    for (const auto& e : spectrum.entries) out << e.value.to_string() << ',' << e.multiplicity << '\n';
}

json numeric_spectrum_json(const EigenResult& result, double rel_tol)
{
    json entries = json::array();
    for (const auto& c : cluster_eigenvalues(result.values, rel_tol))
        entries.push_back({{"value", c.value}, {"mult", c.multiplicity}});
    return {{"problem", to_string(result.problem)}, {"path", "numeric"}, {"cluster_rel_tol", rel_tol}, {"entries", entries}};
}

void write_numeric_csv(std::ostream& out, const EigenResult& result, double rel_tol)
{
    out << "value,multiplicity\n" << std::setprecision(17);
    for (const auto& c : cluster_eigenvalues(result.values, rel_tol)) out << c.value << ',' << c.multiplicity << '\n';
}

json to_json(const EigenResult& result, const std::string& vectors_file)
{
    json j;
    j["problem"] = to_string(result.problem);
    j["method"] = to_string(result.method);
    j["sub_method"] = result.sub_method ? json(to_string(*result.sub_method)) : json(nullptr);
    j["order"] = result.vectors.rows();
    j["values"] = std::vector<double>(result.values.data(), result.values.data() + result.values.size());
    j["residuals"] = result.residuals;
    j["vectors_file"] = vectors_file.empty() ? json(nullptr) : json(vectors_file);
    return j;
}

void write_vectors(std::ostream& out, const EigenResult& result)
{
    static_assert(sizeof(double) == 8);
    for (Eigen::Index c = 0; c < result.vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < result.vectors.rows(); ++r) {
            auto bits = std::bit_cast<std::uint64_t>(result.vectors(r, c));
            char bytes[8];
            for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
            out.write(bytes, 8);
        }
    }
}

json to_json(const SimplicialMesh& mesh)
{
    json vertices = json::array();
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
        json row = json::array();
        for (Eigen::Index c = 0; c < mesh.vertices.cols(); ++c) row.push_back(mesh.vertices(v, c));
        vertices.push_back(std::move(row));
    }
    json simplices = json::array();
    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
        json row = json::array();
        for (Eigen::Index c = 0; c < mesh.simplices.cols(); ++c) row.push_back(mesh.simplices(s, c));
        simplices.push_back(std::move(row));
    }
    return {{"dim", mesh.dim}, {"ambient_dim", mesh.ambient_dim()}, {"spec", to_json(mesh.spec)},
        {"generator", mesh.generator}, {"resolution", mesh.resolution}, {"vertices", vertices},
        {"simplices", simplices}};
}

void write_off(std::ostream& out, const SimplicialMesh& mesh)
{
    out << "OFF\nAMBIENT " << mesh.ambient_dim() << '\n';
    out << mesh.vertex_count() << ' ' << mesh.simplex_count() << " 0\n";
    out << std::setprecision(17);
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
        for (Eigen::Index c = 0; c < mesh.vertices.cols(); ++c) out << (c ? " " : "") << mesh.vertices(v, c);
        out << '\n';
    }
    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
        out << mesh.simplices.cols();
        for (Eigen::Index c = 0; c < mesh.simplices.cols(); ++c) out << ' ' << mesh.simplices(s, c);
        out << '\n';
    }
}

json to_json(const CheckEntry& c)
{
    json j{{"name", c.name}, {"claim_ref", c.claim_ref}, {"measured", c.measured}, {"expected", c.expected},
        {"tolerance", c.tolerance}, {"relation", c.relation == Relation::Equal ? "eq" : "ge"}, {"pass", c.pass},
        {"expected_failure", c.expected_failure}, {"status", c.status()}};
    if (c.measured_exact) j["measured_exact"] = *c.measured_exact;
    if (c.expected_exact) j["expected_exact"] = *c.expected_exact;
    return j;
}

json to_json(const ConvergenceRecord& r)
{
    return {{"family", r.family}, {"quantity", r.quantity}, {"levels", r.levels}, {"h", r.h}, {"values", r.values},
        {"multiplicities", r.multiplicities}, {"reference", r.reference ? json(*r.reference) : json(nullptr)},
        {"rates", r.rates}, {"estimated_rate", r.estimated_rate}, {"extrapolated", r.extrapolated},
        {"reliable", r.reliable}, {"flagged", r.flagged}};
}

json to_json(const VerificationReport& report)
{
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back(to_json(c));
    json j{{"subject", {{"spec", to_json(report.spec)}, {"label", report.spec.label()},
                            {"minimal", is_minimal(report.spec)}, {"mesh", report.mesh}}},
        {"checks", checks}, {"ok", report.ok()}};
    j["convergence"] = report.convergence ? to_json(*report.convergence) : json(nullptr);
    return j;
}

void write_csv(std::ostream& out, const std::vector<VerificationReport>& reports, bool header)
{
    if (header) out << "check,measured,expected,tolerance,pass,status\n";
    out << std::setprecision(17);
    const bool prefixed = reports.size() > 1;
    for (const auto& r : reports) {
        for (const auto& c : r.checks) {
            const std::string name = prefixed ? r.spec.label() + ":" + c.name : c.name;
            out << csv_escape(name) << ',' << c.measured << ',' << c.expected << ',' << c.tolerance << ','
                << (c.pass ? "true" : "false") << ',' << c.status() << '\n';
        }
    }
}

} // namespace bispec
