#include "kappa/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "kappa/errors.hpp"

namespace kappa {

namespace {

std::string pair_label(PairIndex p) {
  return "(" + std::to_string(p.j1) + "," + std::to_string(p.j2) + ")";
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_json(v(k)));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- reading -------------------------------------------------------------

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object at " + path);
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + std::string(key) + "' at " + path);
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError("expected a number at " + path);
  return v.get<double>();
}

int integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError("expected an integer at " + path);
  const auto value = v.get<std::int64_t>();
  if (value < -1'000'000'000 || value > 1'000'000'000) throw ParseError("integer out of range at " + path);
  return static_cast<int>(value);
}

const Json& array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected an array at " + path);
  return v;
}

Complex complex_value(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ParseError("expected [re, im] at " + path);
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

Vector vector_value(const Json& v, const std::string& path) {
  const Json& a = array(v, path);
  Vector out(static_cast<Eigen::Index>(a.size()));
  for (std::size_t k = 0; k < a.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = complex_value(a[k], path + "[" + std::to_string(k) + "]");
  }
  return out;
}

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

EnsembleDocument ensemble_from_json(const Json& j, const std::string& path) {
  EnsembleDocument doc;
  const Json& version = field(j, "format_version", path);
  if (!version.is_string()) throw ParseError("expected a string at " + path + ".format_version");
  doc.format_version = version.get<std::string>();
  doc.dimension = integer(field(j, "dimension", path), path + ".dimension");
  doc.psi0 = vector_value(field(j, "psi0", path), path + ".psi0");
  const Json& sats = array(field(j, "satellites", path), path + ".satellites");
  for (std::size_t k = 0; k < sats.size(); ++k) {
    doc.satellites.push_back(vector_value(sats[k], path + ".satellites[" + std::to_string(k) + "]"));
  }
  if (const auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) throw ParseError("expected an object at " + path + ".metadata");
    for (const auto& [key, value] : it->items()) {
      if (!value.is_string()) throw ParseError("expected a string at " + path + ".metadata." + key);
      doc.metadata.emplace(key, value.get<std::string>());
    }
  }
  return doc;
}

MeasurementEntry measurement_from_json(const Json& j, const std::string& path) {
  MeasurementEntry m;
  const Json& pair = array(field(j, "pair", path), path + ".pair");
  if (pair.size() != 2) throw ParseError("expected [j1, j2] at " + path + ".pair");
  m.pair = {integer(pair[0], path + ".pair[0]"), integer(pair[1], path + ".pair[1]")};

  const Json& rows = array(field(j, "basis", path), path + ".basis");
  const auto dim = static_cast<Eigen::Index>(rows.size());
  m.basis = Matrix::Zero(dim, dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rp = path + ".basis[" + std::to_string(r) + "]";
    const Vector row = vector_value(rows[r], rp);
    if (row.size() != dim) throw ParseError("basis row length differs from row count at " + rp);
    m.basis.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }

  const Json& assignment = field(j, "assignment", path);
  const char* keys[3] = {"m0", "m1", "m2"};
  for (int i = 0; i < 3; ++i) {
    m.assignment[static_cast<std::size_t>(i)] =
        integer(field(assignment, keys[i], path + ".assignment"), path + ".assignment." + keys[i]);
  }
  if (const auto it = j.find("merged"); it != j.end()) {
    const Json& merged = array(*it, path + ".merged");
    for (std::size_t k = 0; k < merged.size(); ++k) {
      const std::string mp = path + ".merged[" + std::to_string(k) + "]";
      if (!merged[k].is_array() || merged[k].size() != 2) throw ParseError("expected [from, into] at " + mp);
      m.merged.push_back({integer(merged[k][0], mp + "[0]"), integer(merged[k][1], mp + "[1]")});
    }
  }
  return m;
}

// --- validation ----------------------------------------------------------

void check_state(const Vector& v, int dim, const std::string& name, std::vector<std::string>& failures) {
  if (v.size() != dim) {
    failures.push_back(name + ": expected " + std::to_string(dim) + " amplitudes, got " +
                       std::to_string(v.size()));
    return;
  }
  if (!v.allFinite()) {
    failures.push_back(name + ": non-finite amplitude");
    return;
  }
  const double deviation = std::abs(v.norm() - 1.0);
  if (!(deviation <= kDocumentNormTolerance)) {
    failures.push_back(name + ": norm deviates from 1 by " + sci(deviation));
  }
}

void validate_ensemble(const EnsembleDocument& doc, std::vector<std::string>& failures) {
  if (doc.format_version != kFormatVersion) {
    failures.push_back("unsupported format_version '" + doc.format_version + "'");
  }
  if (doc.dimension < 2 || doc.dimension > kMaxDimension) {
    failures.push_back("dimension must be in [2, 64], got " + std::to_string(doc.dimension));
    return;
  }
  check_state(doc.psi0, doc.dimension, "psi0", failures);
  if (doc.satellites.size() < 2) failures.push_back("need at least 2 satellites");
  for (std::size_t k = 0; k < doc.satellites.size(); ++k) {
    check_state(doc.satellites[k], doc.dimension, "satellite " + std::to_string(k + 1), failures);
  }
}

// Labels per column, or nullopt after recording failures.
std::optional<std::vector<int>> column_labels(const MeasurementEntry& m, int dim,
                                              std::vector<std::string>& failures) {
  const std::string name = "measurement " + pair_label(m.pair);
  bool ok = true;
  std::vector<int> labels(static_cast<std::size_t>(dim), -1);
  for (int i = 0; i < 3; ++i) {
    const int c = m.assignment[static_cast<std::size_t>(i)];
    if (c < 0 || c >= dim) {
      failures.push_back(name + ": assignment m" + std::to_string(i) + " column " + std::to_string(c) +
                         " out of range");
      ok = false;
    } else if (labels[static_cast<std::size_t>(c)] >= 0) {
      failures.push_back(name + ": column " + std::to_string(c) + " assigned twice");
      ok = false;
    } else {
      labels[static_cast<std::size_t>(c)] = c;
    }
  }
  if (!ok) return std::nullopt;
  for (const auto& [from, into] : m.merged) {
    const bool into_assigned = std::find(m.assignment.begin(), m.assignment.end(), into) != m.assignment.end();
    if (from < 0 || from >= dim || !into_assigned) {
      failures.push_back(name + ": invalid merge [" + std::to_string(from) + ", " + std::to_string(into) + "]");
      ok = false;
    } else if (labels[static_cast<std::size_t>(from)] >= 0) {
      failures.push_back(name + ": column " + std::to_string(from) + " is both assigned and merged");
      ok = false;
    } else {
      labels[static_cast<std::size_t>(from)] = into;
    }
  }
  for (int c = 0; c < dim && ok; ++c) {
    if (labels[static_cast<std::size_t>(c)] < 0) {
      failures.push_back(name + ": incomplete assignment, column " + std::to_string(c) +
                         " is neither assigned nor merged");
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return labels;
}

void validate_scenario(const ScenarioDocument& doc, std::vector<std::string>& failures) {
  validate_ensemble(doc.ensemble, failures);
  if (!failures.empty()) return;
  const int dim = doc.ensemble.dimension;
  const int n = static_cast<int>(doc.ensemble.satellites.size());
  if (dim < 3) failures.push_back("3-outcome measurements need dimension >= 3");
  const auto expected = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (doc.measurements.size() != expected) {
    failures.push_back("expected " + std::to_string(expected) + " measurements, got " +
                       std::to_string(doc.measurements.size()));
  }
  std::set<PairIndex> seen;
  for (const MeasurementEntry& m : doc.measurements) {
    const std::string name = "measurement " + pair_label(m.pair);
    if (m.pair.j1 < 1 || m.pair.j2 <= m.pair.j1 || m.pair.j2 > n) {
      failures.push_back(name + ": pair out of range");
      continue;
    }
    if (!seen.insert(m.pair).second) failures.push_back(name + ": duplicate pair");
    if (m.basis.rows() != dim) {
      failures.push_back(name + ": basis must be " + std::to_string(dim) + "x" + std::to_string(dim));
      continue;
    }
    if (!m.basis.allFinite()) {
      failures.push_back(name + ": non-finite basis entry");
      continue;
    }
    const Matrix gram = m.basis.adjoint() * m.basis;
    const double deviation = (gram - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (!(deviation <= kDocumentUnitaryTolerance)) {
      failures.push_back(name + ": basis Gram deviation " + sci(deviation) + " exceeds 1e-08");
    }
    column_labels(m, dim, failures);
  }
}

template <typename Doc, typename Check>
void throw_if_invalid(const Doc& doc, Check check) {
  std::vector<std::string> failures;
  check(doc, failures);
  if (!failures.empty()) throw ValidationError(std::move(failures));
}

// --- canonical text ------------------------------------------------------

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

bool is_inline_array(const Json& v) {
  return std::all_of(v.begin(), v.end(), [](const Json& e) {
    return is_scalar(e) || (e.is_array() && e.size() <= 2 &&
                            std::all_of(e.begin(), e.end(), [](const Json& x) { return is_scalar(x); }));
  });
}

void emit(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        emit(value, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      if (is_inline_array(v)) {
        out += "[";
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k > 0) out += ", ";
          emit(v[k], indent, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) out += ",\n";
        out += inner;
        emit(v[k], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

Json pair_json(PairIndex p) { return Json::array({p.j1, p.j2}); }

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) throw InvalidInput("cannot serialize a non-finite number");
  if (value == 0.0) return std::signbit(value) ? "-0.0" : "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

EnsembleDocument to_document(const StateEnsemble& e, std::map<std::string, std::string> metadata) {
  EnsembleDocument doc;
  doc.dimension = e.dim();
  doc.psi0 = e.psi0().amplitudes();
  for (const auto& s : e.satellites()) doc.satellites.push_back(s.amplitudes());
  doc.metadata = std::move(metadata);
  return doc;
}

ScenarioDocument to_document(const BoundScenario& s, std::map<std::string, std::string> metadata) {
  ScenarioDocument doc;
  doc.ensemble = to_document(s.ensemble(), std::move(metadata));
  for (const PairMeasurement& pm : s.measurements()) {
    MeasurementEntry m;
    m.pair = pm.pair;
    m.basis = pm.basis.vectors();
    const auto& labels = pm.basis.labels();
    for (int i = 0; i < 3; ++i) {
      const auto it = std::find(labels.begin(), labels.end(), pm.assignment[static_cast<std::size_t>(i)]);
      m.assignment[static_cast<std::size_t>(i)] = static_cast<int>(it - labels.begin());
    }
    for (int c = 0; c < static_cast<int>(labels.size()); ++c) {
      if (std::find(m.assignment.begin(), m.assignment.end(), c) != m.assignment.end()) continue;
      for (int i = 0; i < 3; ++i) {
        if (labels[static_cast<std::size_t>(c)] == pm.assignment[static_cast<std::size_t>(i)]) {
          m.merged.push_back({c, m.assignment[static_cast<std::size_t>(i)]});
        }
      }
    }
    doc.measurements.push_back(std::move(m));
  }
  return doc;
}

StateEnsemble to_ensemble(const EnsembleDocument& doc) {
  throw_if_invalid(doc, validate_ensemble);
  std::vector<PureState> satellites;
  for (const auto& s : doc.satellites) satellites.emplace_back(s);
  return StateEnsemble(PureState(doc.psi0), std::move(satellites));
}

BoundScenario to_scenario(const ScenarioDocument& doc) {
  throw_if_invalid(doc, validate_scenario);
  const int dim = doc.ensemble.dimension;
  std::vector<PairMeasurement> measurements;
  std::vector<std::string> failures;
  for (const MeasurementEntry& m : doc.measurements) {
    auto labels = column_labels(m, dim, failures);
    measurements.push_back(
        {m.pair, MeasurementBasis(m.basis, std::move(*labels), kDocumentUnitaryTolerance), m.assignment});
  }
  return BoundScenario(to_ensemble(doc.ensemble), std::move(measurements));
}

Json to_json(const EnsembleDocument& doc) {
  Json j;
  j["format_version"] = doc.format_version;
  j["dimension"] = doc.dimension;
  j["psi0"] = vector_json(doc.psi0);
  Json sats = Json::array();
  for (const auto& s : doc.satellites) sats.push_back(vector_json(s));
  j["satellites"] = std::move(sats);
  Json meta = Json::object();
  for (const auto& [k, v] : doc.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  return j;
}

Json to_json(const ScenarioDocument& doc) {
  Json j;
  j["format_version"] = std::string(kFormatVersion);
  j["ensemble"] = to_json(doc.ensemble);
  Json ms = Json::array();
  for (const MeasurementEntry& m : doc.measurements) {
    Json e;
    e["pair"] = pair_json(m.pair);
    e["basis"] = matrix_json(m.basis);
    e["assignment"] = Json{{"m0", m.assignment[0]}, {"m1", m.assignment[1]}, {"m2", m.assignment[2]}};
    Json merged = Json::array();
    for (const auto& [from, into] : m.merged) merged.push_back(Json::array({from, into}));
    e["merged"] = std::move(merged);
    ms.push_back(std::move(e));
  }
  j["measurements"] = std::move(ms);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["n"] = r.n;
  j["kappa_bound"] = r.kappa_bound;
  j["error_sum"] = r.error_sum;
  j["omega_q_sum"] = r.omega_q_sum;
  j["noise_threshold"] = r.noise_threshold;
  j["trivial"] = r.trivial();
  Json terms = Json::array();
  for (const PairTerms& t : r.per_pair_terms) {
    Json e;
    e["pair"] = pair_json(t.pair);
    e["p"] = Json::array({t.p[0], t.p[1], t.p[2]});
    terms.push_back(std::move(e));
  }
  j["per_pair_terms"] = std::move(terms);
  return j;
}

Json to_json(const CertificationReport& r) {
  Json j;
  j["triples_total"] = r.triples_total;
  j["triples_pp_incompatible"] = r.triples_pp_incompatible;
  Json failing = Json::array();
  for (const PairIndex p : r.failing_triples) failing.push_back(pair_json(p));
  j["failing_triples"] = std::move(failing);
  Json near = Json::array();
  for (const PairIndex p : r.near_boundary_triples) near.push_back(pair_json(p));
  j["near_boundary_triples"] = std::move(near);
  j["overlaps_equal"] = r.overlaps_equal;
  j["overlap_tolerance"] = r.overlap_tolerance;
  return j;
}

Json to_json(const FuzzReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  return j;
}

std::string dump_canonical(const Json& value) {
  std::string out;
  emit(value, 0, out);
  out += "\n";
  return out;
}

std::string write_document(const EnsembleDocument& doc, const std::optional<Json>& report) {
  Json j = to_json(doc);
  if (report) j["report"] = *report;
  return dump_canonical(j);
}

std::string write_document(const ScenarioDocument& doc, const std::optional<Json>& report) {
  Json j = to_json(doc);
  if (report) j["report"] = *report;
  return dump_canonical(j);
}

EnsembleDocument read_ensemble_document(std::string_view text) {
  const Json j = parse_text(text);
  EnsembleDocument doc;
  try {
    doc = ensemble_from_json(j, "$");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  throw_if_invalid(doc, validate_ensemble);
  return doc;
}

ScenarioDocument read_scenario_document(std::string_view text) {
  const Json j = parse_text(text);
  ScenarioDocument doc;
  try {
    const Json& version = field(j, "format_version", "$");
    if (!version.is_string()) throw ParseError("expected a string at $.format_version");
    if (version.get<std::string>() != kFormatVersion) {
      throw ValidationError({"unsupported format_version '" + version.get<std::string>() + "'"});
    }
    doc.ensemble = ensemble_from_json(field(j, "ensemble", "$"), "$.ensemble");
    const Json& ms = array(field(j, "measurements", "$"), "$.measurements");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      doc.measurements.push_back(measurement_from_json(ms[k], "$.measurements[" + std::to_string(k) + "]"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  throw_if_invalid(doc, validate_scenario);
  return doc;
}

}  // namespace kappa
