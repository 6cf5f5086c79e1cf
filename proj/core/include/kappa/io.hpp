#pragma once

// Canonical JSON documents for ensembles, scenarios and reports
// (format_version "1"). Field order is fixed, numbers use the shortest
// decimal form that round-trips, complex numbers are [re, im] pairs and
// matrices are lists of rows.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kappa/bounds.hpp"
#include "kappa/compatibility.hpp"
#include "kappa/ontology.hpp"
#include "kappa/quantum.hpp"

namespace kappa {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "1";
inline constexpr double kDocumentNormTolerance = 1e-8;
inline constexpr double kDocumentUnitaryTolerance = 1e-8;

struct EnsembleDocument {
  std::string format_version{kFormatVersion};
  int dimension = 0;
  Vector psi0;
  std::vector<Vector> satellites;
  std::map<std::string, std::string> metadata;
};

struct MeasurementEntry {
  PairIndex pair;
  /// Columns are the basis vectors.
  Matrix basis;
  /// Column carrying m0, m1, m2.
  std::array<int, 3> assignment{0, 1, 2};
  /// [from, into]: column `from` reports the outcome of assigned column `into`.
  std::vector<std::array<int, 2>> merged;
};

struct ScenarioDocument {
  EnsembleDocument ensemble;
  std::vector<MeasurementEntry> measurements;
};

EnsembleDocument to_document(const StateEnsemble& e, std::map<std::string, std::string> metadata = {});
ScenarioDocument to_document(const BoundScenario& s, std::map<std::string, std::string> metadata = {});

/// Throw ValidationError listing every violated invariant.
StateEnsemble to_ensemble(const EnsembleDocument& doc);
BoundScenario to_scenario(const ScenarioDocument& doc);

Json to_json(const EnsembleDocument& doc);
Json to_json(const ScenarioDocument& doc);
Json to_json(const BoundReport& report);
Json to_json(const CertificationReport& report);
Json to_json(const FuzzReport& report);

/// Two-space indented JSON; arrays of scalars and of [re, im] pairs stay on
/// one line. Output ends with a newline.
std::string dump_canonical(const Json& value);

/// Document text, with `report` appended under the "report" key when given.
std::string write_document(const EnsembleDocument& doc, const std::optional<Json>& report = std::nullopt);
std::string write_document(const ScenarioDocument& doc, const std::optional<Json>& report = std::nullopt);

/// Throw ParseError on malformed text or wrong field types (message names the
/// line or the field path) and ValidationError on invariant violations. An
/// optional "report" key is ignored.
EnsembleDocument read_ensemble_document(std::string_view text);
ScenarioDocument read_scenario_document(std::string_view text);

/// Shortest round-trip decimal form of a finite double ("-0.0" for -0).
std::string format_double(double value);

}  // namespace kappa
