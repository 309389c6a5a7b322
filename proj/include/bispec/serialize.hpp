#pragma once

#include "bispec/analytic_spectrum.hpp"
#include "bispec/eigensolver.hpp"
#include "bispec/mesh.hpp"
#include "bispec/report.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace bispec {

using json = nlohmann::json;

// { "kind", "n", "factors": [{"dim", "radius_sq_num", "radius_sq_den"}] }
json to_json(const HypersurfaceSpec& spec);
HypersurfaceSpec spec_from_json(const json& j);

// { "problem", "cutoff", "entries": [{"value_num", "value_den", "mult"}] }
json to_json(const Spectrum& spectrum);
Spectrum spectrum_from_json(const json& j);
/// value,multiplicity rows; values as exact fractions
void write_csv(std::ostream& out, const Spectrum& spectrum);

/// Clustered numeric spectrum: { "problem", "path": "numeric", "entries": [{"value", "mult"}] }
json numeric_spectrum_json(const EigenResult& result, double rel_tol = 1e-6);
void write_numeric_csv(std::ostream& out, const EigenResult& result, double rel_tol = 1e-6);

/// { "problem", "method", "sub_method", "values", "residuals", "vectors_file" }
json to_json(const EigenResult& result, const std::string& vectors_file = {});
/// order × count float64, little-endian, column-major
void write_vectors(std::ostream& out, const EigenResult& result);

json to_json(const SimplicialMesh& mesh);
/// OFF with an "AMBIENT d" line; d coordinates per vertex, "k i0 .. ik-1" per simplex
void write_off(std::ostream& out, const SimplicialMesh& mesh);

json to_json(const CheckEntry& check);
json to_json(const ConvergenceRecord& record);
json to_json(const VerificationReport& report);
/// check,measured,expected,tolerance,pass,status. With several reports the
/// check names are prefixed by the subject label.
void write_csv(std::ostream& out, const std::vector<VerificationReport>& reports, bool header = true);

} // namespace bispec
