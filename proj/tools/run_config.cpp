#include "run_config.hpp"

#include "bispec/bispec.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace bispec::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 0x6269737065635ULL;

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<const char*> known)
{
    const std::set<std::string> allowed(known.begin(), known.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(join(prefix, it.key()), "unknown field");
}

const json& object_at(const json& j, const std::string& prefix, const char* key)
{
    const json& v = j.at(key);
    if (!v.is_object()) throw ConfigError(join(prefix, key), "expected an object");
    return v;
}

template <typename T>
void read(const json& j, const std::string& prefix, const char* key, T& out)
{
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string field = join(prefix, key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(field, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
        if constexpr (std::is_signed_v<T>) {
            if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<T>::max()))
                throw ConfigError(field, "integer out of range");
            const auto x = v.get<std::int64_t>();
            if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max())
                throw ConfigError(field, "integer out of range");
        } else if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
            throw ConfigError(field, "expected a non-negative integer");
        }
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(field, "expected a number");
    } else {
        if (!v.is_string()) throw ConfigError(field, "expected a string");
    }
    out = v.get<T>();
}

SubjectKind subject_kind(const std::string& name)
{
    if (name == "none") return SubjectKind::None;
    if (name == "great_sphere") return SubjectKind::GreatSphere;
    if (name == "clifford") return SubjectKind::Clifford;
    if (name == "product") return SubjectKind::Product;
    if (name == "all_minimal") return SubjectKind::AllMinimal;
    throw ConfigError("subject.kind", "unknown subject kind '" + name + "'");
}

void check(bool ok, const char* field, const std::string& message)
{
    if (!ok) throw ConfigError(field, message);
}

} // namespace

std::string to_string(SubjectKind kind)
{
    switch (kind) {
    case SubjectKind::None: return "none";
    case SubjectKind::GreatSphere: return "great_sphere";
    case SubjectKind::Clifford: return "clifford";
    case SubjectKind::Product: return "product";
    case SubjectKind::AllMinimal: return "all_minimal";
    }
    return "none";
}

std::string to_string(PathKind kind)
{
    return kind == PathKind::Analytic ? "analytic" : "numeric";
}

void RunConfig::validate() const
{
    switch (subject.kind) {
    case SubjectKind::None: throw ConfigError("subject", "no subject given");
    case SubjectKind::GreatSphere: check(subject.n >= 1, "subject.n", "must be >= 1"); break;
    case SubjectKind::Clifford:
        check(subject.p >= 1, "subject.p", "must be >= 1");
        check(subject.q >= 1, "subject.q", "must be >= 1");
        break;
    case SubjectKind::Product:
        check(subject.p >= 1, "subject.p", "must be >= 1");
        check(subject.q >= 1, "subject.q", "must be >= 1");
        check(subject.r1_sq > 0.0 && subject.r1_sq < 1.0, "subject.r1_sq", "must lie strictly between 0 and 1");
        break;
    case SubjectKind::AllMinimal: check(subject.n_max >= 1, "subject.n_max", "must be >= 1"); break;
    }
    check(mesh.grid >= 3 && mesh.grid <= BISPEC_MAX_TORUS_GRID, "mesh.grid",
        "must lie in [3, " + std::to_string(BISPEC_MAX_TORUS_GRID) + "]");
    check(mesh.levels >= 0 && mesh.levels <= BISPEC_MAX_ICOSPHERE_LEVEL, "mesh.levels",
        "must lie in [0, " + std::to_string(BISPEC_MAX_ICOSPHERE_LEVEL) + "]");
    check(mesh.segments >= 3 && mesh.segments <= BISPEC_MAX_CIRCLE_SEGMENTS, "mesh.segments",
        "must lie in [3, " + std::to_string(BISPEC_MAX_CIRCLE_SEGMENTS) + "]");
    check(solver.mode == "auto" || solver.mode == "dense" || solver.mode == "iterative", "solver.mode",
        "must be auto, dense or iterative");
    check(std::isfinite(solver.tol) && solver.tol > 0.0, "solver.tol", "must be positive");
    check(solver.max_restarts >= 1, "solver.max_restarts", "must be >= 1");
    check(solver.krylov_dim >= 0, "solver.krylov_dim", "must be >= 0");
    check(std::isfinite(tol) && tol > 0.0, "tol", "must be positive");
    check(std::isfinite(slack) && slack >= 0.0, "slack", "must be >= 0");
    check(std::isfinite(takahashi_tol) && takahashi_tol > 0.0, "takahashi_tol", "must be positive");
    check(std::isfinite(cutoff) && cutoff >= 0.0, "cutoff", "must be >= 0");
    check(count >= 2, "count", "must be >= 2 (the kernel pair plus at least one more)");
    check(study.num_levels >= 3, "study.num_levels", "a convergence study needs at least 3 levels");
    check(study.base >= 0, "study.base", "must be >= 0");
    bispec_study_quantity q;
    if (bispec_study_quantity_from_string(study.quantity.c_str(), &q) != BISPEC_OK)
        throw ConfigError("study.quantity", bispec_last_error());
    check(!output_dir.empty(), "output_dir", "must not be empty");
    check(!(deterministic && seed && *seed != kDefaultSeed), "seed", "a custom seed requires deterministic = false");
}

json to_json(const RunConfig& c)
{
    json subject{{"kind", to_string(c.subject.kind)}};
    switch (c.subject.kind) {
    case SubjectKind::None: break;
    case SubjectKind::GreatSphere: subject["n"] = c.subject.n; break;
    case SubjectKind::Clifford:
        subject["p"] = c.subject.p;
        subject["q"] = c.subject.q;
        break;
    case SubjectKind::Product:
        subject["p"] = c.subject.p;
        subject["q"] = c.subject.q;
        subject["r1_sq"] = c.subject.r1_sq;
        break;
    case SubjectKind::AllMinimal: subject["n_max"] = c.subject.n_max; break;
    }
    json j{{"subject", subject}, {"path", to_string(c.path)},
        {"mesh", {{"grid", c.mesh.grid}, {"levels", c.mesh.levels}, {"segments", c.mesh.segments}}},
        {"solver", {{"mode", c.solver.mode}, {"tol", c.solver.tol}, {"max_restarts", c.solver.max_restarts},
                       {"krylov_dim", c.solver.krylov_dim}}},
        {"tol", c.tol}, {"slack", c.slack}, {"takahashi_tol", c.takahashi_tol}, {"cutoff", c.cutoff},
        {"count", c.count},
        {"study", {{"quantity", c.study.quantity}, {"num_levels", c.study.num_levels}, {"base", c.study.base}}},
        {"output_dir", c.output_dir}, {"deterministic", c.deterministic}};
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    return j;
}

RunConfig config_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown(j, "", {"subject", "path", "mesh", "solver", "tol", "slack", "takahashi_tol", "cutoff", "count",
                              "study", "output_dir", "deterministic", "seed"});
    RunConfig c;
    if (j.contains("subject")) {
        const json& s = object_at(j, "", "subject");
        reject_unknown(s, "subject", {"kind", "n", "p", "q", "r1_sq", "n_max"});
        std::string kind = "none";
        read(s, "subject", "kind", kind);
        c.subject.kind = subject_kind(kind);
        read(s, "subject", "n", c.subject.n);
        read(s, "subject", "p", c.subject.p);
        read(s, "subject", "q", c.subject.q);
        read(s, "subject", "r1_sq", c.subject.r1_sq);
        read(s, "subject", "n_max", c.subject.n_max);
    }
    if (j.contains("path")) {
        std::string path;
        read(j, "", "path", path);
        if (path == "analytic") c.path = PathKind::Analytic;
        else if (path == "numeric") c.path = PathKind::Numeric;
        else throw ConfigError("path", "must be analytic or numeric");
    }
    if (j.contains("mesh")) {
        const json& m = object_at(j, "", "mesh");
        reject_unknown(m, "mesh", {"grid", "levels", "segments"});
        read(m, "mesh", "grid", c.mesh.grid);
        read(m, "mesh", "levels", c.mesh.levels);
        read(m, "mesh", "segments", c.mesh.segments);
    }
    if (j.contains("solver")) {
        const json& s = object_at(j, "", "solver");
        reject_unknown(s, "solver", {"mode", "tol", "max_restarts", "krylov_dim"});
        read(s, "solver", "mode", c.solver.mode);
        read(s, "solver", "tol", c.solver.tol);
        read(s, "solver", "max_restarts", c.solver.max_restarts);
        read(s, "solver", "krylov_dim", c.solver.krylov_dim);
    }
    read(j, "", "tol", c.tol);
    read(j, "", "slack", c.slack);
    read(j, "", "takahashi_tol", c.takahashi_tol);
    read(j, "", "cutoff", c.cutoff);
    read(j, "", "count", c.count);
    if (j.contains("study")) {
        const json& s = object_at(j, "", "study");
        reject_unknown(s, "study", {"quantity", "num_levels", "base"});
        read(s, "study", "quantity", c.study.quantity);
        read(s, "study", "num_levels", c.study.num_levels);
        read(s, "study", "base", c.study.base);
    }
    read(j, "", "output_dir", c.output_dir);
    read(j, "", "deterministic", c.deterministic);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        std::uint64_t seed = 0;
        read(j, "", "seed", seed);
        c.seed = seed;
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

} // namespace bispec::cli
