#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bispec::cli {

// A config value that is missing, mistyped or outside its guard. field() is
// the dotted path of the offending entry, e.g. "mesh.grid".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class SubjectKind { None, GreatSphere, Clifford, Product, AllMinimal };
enum class PathKind { Analytic, Numeric };

struct Subject {
    SubjectKind kind = SubjectKind::None;
    int n = 0;          // great sphere dimension
    int p = 0;
    int q = 0;
    double r1_sq = 0.0; // product only
    int n_max = 0;      // all-minimal sweep only
};

struct MeshParams {
    int grid = 64;
    int levels = 4;
    int segments = 256;
};

struct SolverParams {
    std::string mode = "auto";
    double tol = 1e-6;
    int max_restarts = 500;
    int krylov_dim = 0;
};

struct StudyParams {
    std::string quantity = "lambda1";
    int num_levels = 3;
    int base = 0; // 0: per-family default
};

struct RunConfig {
    Subject subject;
    PathKind path = PathKind::Analytic;
    MeshParams mesh;
    SolverParams solver;
    double tol = 0.01;            // continuum targets
    double slack = 1e-6;          // discrete identities
    double takahashi_tol = 0.01;
    double cutoff = 0.0;          // analytic spectra; 0 picks a default
    int count = 10;
    StudyParams study;
    std::string output_dir = "out";
    // Outputs depend on the config alone: fixed solver start vectors, no
    // timestamps. Turning it off only permits a custom solver seed.
    bool deterministic = true;
    std::optional<std::uint64_t> seed;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing fields keep their defaults; unknown fields are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

std::string to_string(SubjectKind kind);
std::string to_string(PathKind kind);

} // namespace bispec::cli
