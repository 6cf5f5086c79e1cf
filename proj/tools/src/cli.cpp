#include "kappa/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kappa/bounds.hpp"
#include "kappa/compatibility.hpp"
#include "kappa/constructions.hpp"
#include "kappa/errors.hpp"
#include "kappa/io.hpp"
#include "kappa/ontology.hpp"
#include "kappa/optimizer.hpp"
#include "table.hpp"

namespace kappa::cli {

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_output(const Common& common, const std::string& text, std::ostream& out) {
  if (common.output.empty()) return;
  if (common.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(common.output, std::ios::binary);
  file << text;
  if (!file) throw InvalidInput("cannot write '" + common.output + "'");
}

std::string pair_name(PairIndex p) { return "(" + std::to_string(p.j1) + "," + std::to_string(p.j2) + ")"; }

void print_terms(const BoundReport& r, std::ostream& out) {
  Table t({"pair", "P(m0|psi0)", "P(m1|psi_j1)", "P(m2|psi_j2)", "sum"});
  for (const PairTerms& term : r.per_pair_terms) {
    t.add({pair_name(term.pair), fixed(term.p[0], 8), fixed(term.p[1], 8), fixed(term.p[2], 8),
           fixed(term.p[0] + term.p[1] + term.p[2], 8)});
  }
  t.print(out);
}

void print_summary(const BoundReport& r, std::ostream& out) {
  Table t({"quantity", "value"});
  t.add({"n", std::to_string(r.n)});
  t.add({"error sum", fixed(r.error_sum, 8)});
  t.add({"omega_Q sum", fixed(r.omega_q_sum, 8)});
  t.add({"kappa bound", fixed(r.kappa_bound, 6)});
  t.add({"noise threshold", sci(r.noise_threshold, 3)});
  t.add({"trivial", r.trivial() ? "yes" : "no"});
  t.print(out);
}

void print_certification(const CertificationReport& c, std::ostream& out) {
  Table t({"certification", "value"});
  t.add({"PP-incompatible triples",
         std::to_string(c.triples_pp_incompatible) + "/" + std::to_string(c.triples_total)});
  t.add({"near-boundary triples", std::to_string(c.near_boundary_triples.size())});
  t.add({"equal overlaps", c.overlaps_equal ? "yes" : "no"});
  t.print(out);
}

double round_one_significant(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double scale = std::pow(10.0, std::floor(std::log10(std::abs(x))));
  return std::round(x / scale) * scale;
}

// --- subcommands ---------------------------------------------------------

struct VerifyArgs {
  std::string which = "all";
  double tolerance = 5e-4;
};

int verify_fixtures(const VerifyArgs& args, const Common& common, std::ostream& out) {
  std::vector<FixtureId> ids;
  if (args.which == "all") {
    ids.assign(std::begin(kAllFixtures), std::end(kAllFixtures));
  } else if (auto id = parse_fixture_id(args.which)) {
    ids.push_back(*id);
  } else {
    throw InvalidInput("unknown case '" + args.which + "' (expected d3n3, d3n4, d4n4 or all)");
  }

  Table table({"case", "bound", "reference", "diff", "noise", "rounded", "reference", "status"});
  Json cases = Json::array();
  std::vector<std::pair<FixtureCase, BoundReport>> failed;
  for (FixtureId id : ids) {
    FixtureCase f = reference_fixture(id);
    const BoundReport r = evaluate_bound(f.scenario);
    const double diff = r.kappa_bound - f.expected_bound;
    const double rounded = round_one_significant(r.noise_threshold);
    const bool bound_ok = std::abs(diff) <= args.tolerance;
    const bool noise_ok = std::abs(rounded - f.expected_noise) <= 1e-9 * f.expected_noise;
    const bool ok = bound_ok && noise_ok;
    table.add({std::string(to_string(id)), fixed(r.kappa_bound, 6), fixed(f.expected_bound, 4),
               sci(diff, 1), sci(r.noise_threshold, 3), sci(rounded, 0), sci(f.expected_noise, 0),
               ok ? "ok" : "MISMATCH"});
    Json entry;
    entry["case"] = std::string(to_string(id));
    entry["kappa_bound"] = r.kappa_bound;
    entry["expected_bound"] = f.expected_bound;
    entry["noise_threshold"] = r.noise_threshold;
    entry["expected_noise"] = f.expected_noise;
    entry["pass"] = ok;
    entry["report"] = to_json(r);
    cases.push_back(std::move(entry));
    if (!ok) failed.emplace_back(std::move(f), r);
  }
  table.print(out);
  for (const auto& [f, r] : failed) {
    out << "\n" << to_string(f.id) << ": bound off by " << sci(r.kappa_bound - f.expected_bound, 2)
        << " (tolerance " << sci(args.tolerance, 1) << "); per-pair terms:\n";
    print_terms(r, out);
  }

  Json doc;
  doc["format_version"] = std::string(kFormatVersion);
  doc["tolerance"] = args.tolerance;
  doc["cases"] = std::move(cases);
  write_output(common, dump_canonical(doc), out);
  return failed.empty() ? kSuccess : kReproductionMismatch;
}

struct ConstructArgs {
  std::string family;
  int d = 0;
  int n = 0;
  int restarts = 32;
};

int construct(const ConstructArgs& args, const Common& common, std::ostream& out) {
  std::map<std::string, std::string> metadata{{"family", args.family}, {"d", std::to_string(args.d)}};
  std::optional<StateEnsemble> ensemble;
  std::optional<PackingStates> packing;
  if (args.family == "packing") {
    if (args.n < 2) throw InvalidInput("--n >= 2 is required for the packing family");
    PackingOptions opts;
    opts.restarts = args.restarts;
    packing.emplace(packing_states(args.d, args.n, common.seed, opts));
    ensemble.emplace(packing->ensemble);
    metadata["n"] = std::to_string(args.n);
    metadata["seed"] = std::to_string(common.seed);
    metadata["chi"] = format_double(packing->chi);
    metadata["max_overlap_sq"] = format_double(packing->packing.achieved_max_overlap_sq);
  } else if (args.family == "mub" || args.family == "hadamard") {
    ensemble.emplace(args.family == "mub" ? mub_states(args.d) : hadamard_states(args.d));
    if (args.n != 0 && args.n != ensemble->n()) {
      throw InvalidInput("the " + args.family + " family in d = " + std::to_string(args.d) + " has n = " +
                         std::to_string(ensemble->n()));
    }
    metadata["n"] = std::to_string(ensemble->n());
  } else {
    throw InvalidInput("unknown family '" + args.family + "' (expected packing, mub or hadamard)");
  }

  out << args.family << " ensemble: d = " << ensemble->dim() << ", n = " << ensemble->n() << "\n\n";
  const CertificationReport cert = certify_ensemble(*ensemble);
  print_certification(cert, out);
  out << '\n';

  Table bounds({"bound", "value"});
  if (cert.all_pp_incompatible() && cert.overlaps_equal) {
    bounds.add({"equal-overlap bound", fixed(equal_overlap_bound(*ensemble), 6)});
  }
  if (packing) {
    const PackingBound pb = packing_bound(args.d, args.n);
    bounds.add({"packing target", fixed(packing->packing.target_overlap_sq, 6)});
    bounds.add({"packing achieved", fixed(packing->packing.achieved_max_overlap_sq, 6)});
    bounds.add({"packing target met", packing->packing.met_target ? "yes" : "no"});
    bounds.add({"exact bound", fixed(pb.exact, 6)});
    bounds.add({"loose bound", fixed(pb.loose, 6)});
    if (args.d >= 4) bounds.add({"noise threshold", sci(packing_noise_threshold(args.d, args.n), 3)});
  }
  bounds.print(out);

  Json report;
  report["certification"] = to_json(cert);
  write_output(common, write_document(to_document(*ensemble, metadata), report), out);
  return kSuccess;
}

struct SolveArgs {
  std::string states;
  int restarts = 8;
};

int solve(const SolveArgs& args, const Common& common, std::ostream& out) {
  const EnsembleDocument doc = read_ensemble_document(read_file(args.states));
  const StateEnsemble ensemble = to_ensemble(doc);
  SearchConfig cfg;
  cfg.dim = ensemble.dim();
  cfg.n = ensemble.n();
  cfg.seed = common.seed;
  cfg.measurement_restarts = args.restarts;
  cfg.validate();
  const BoundScenario scenario = solve_measurements(ensemble, cfg);
  const BoundReport report = evaluate_bound(scenario);
  print_terms(report, out);
  out << '\n';
  print_summary(report, out);
  write_output(common, write_document(to_document(scenario, doc.metadata), to_json(report)), out);
  return kSuccess;
}

struct EvaluateArgs {
  std::string scenario;
};

int evaluate(const EvaluateArgs& args, const Common& common, std::ostream& out) {
  const ScenarioDocument doc = read_scenario_document(read_file(args.scenario));
  const BoundReport report = evaluate_bound(to_scenario(doc));
  print_terms(report, out);
  out << '\n';
  print_summary(report, out);
  write_output(common, write_document(doc, to_json(report)), out);
  return kSuccess;
}

struct SearchArgs {
  int d = 3;
  int n = 4;
  int restarts = 64;
  int max_iterations = 5000;
};

int search(const SearchArgs& args, const Common& common, std::ostream& out) {
  SearchConfig cfg;
  cfg.dim = args.d;
  cfg.n = args.n;
  cfg.restarts = args.restarts;
  cfg.max_iterations = args.max_iterations;
  cfg.seed = common.seed;
  cfg.validate();
  const SearchResult result = joint_search(cfg);
  int best_hits = 0;
  for (double v : result.objective_history) {
    if (v <= result.report.kappa_bound + 1e-6) ++best_hits;
  }
  out << "restarts reaching the best value: " << best_hits << "/" << result.objective_history.size() << "\n\n";
  print_summary(result.report, out);
  const std::map<std::string, std::string> metadata{{"source", "search"},
                                                    {"seed", std::to_string(result.seed_used)},
                                                    {"restarts", std::to_string(args.restarts)}};
  write_output(common, write_document(to_document(result.scenario, metadata), to_json(result.report)), out);
  return kSuccess;
}

struct FuzzArgs {
  long trials = 10000;
  int ontic = 8;
  int n = 3;
  bool adversarial = false;
};

int fuzz(const FuzzArgs& args, const Common& common, std::ostream& out) {
  FuzzOptions opts;
  opts.adversarial = args.adversarial;
  const FuzzReport r = fuzz_overlap_inequality(args.trials, common.seed, args.ontic, args.n, opts);
  Table t({"trials", "L", "n", "responses", "violations", "worst margin"});
  t.add({std::to_string(r.trials), std::to_string(args.ontic), std::to_string(args.n),
         args.adversarial ? "adversarial" : "random", std::to_string(r.violations), sci(r.worst_margin, 3)});
  t.print(out);
  Json doc = to_json(r);
  doc["seed"] = common.seed;
  doc["ontic_count"] = args.ontic;
  doc["n"] = args.n;
  doc["adversarial"] = args.adversarial;
  write_output(common, dump_canonical(doc), out);
  return r.violations == 0 ? kSuccess : kReproductionMismatch;
}

struct KsArgs {
  double angle = 90.0;
  long samples = 1'000'000;
};

int ks_check(const KsArgs& args, const Common& common, std::ostream& out) {
  const double half = args.angle * std::numbers::pi / 360.0;
  const PureState a{Complex(1.0), Complex(0.0)};
  const PureState b{Complex(std::cos(half)), Complex(std::sin(half))};
  const std::optional<double> kappa = ks_qubit_kappa(a, b, args.samples, common.seed);
  if (!kappa) throw InvalidInput("states at angle " + fixed(args.angle, 3) + " are orthogonal");
  const double wq = omega_q(a, b);
  Table t({"angle (deg)", "samples", "omega_Q", "omega_C estimate", "kappa"});
  t.add({fixed(args.angle, 3), std::to_string(args.samples), fixed(wq, 6), fixed(*kappa * wq, 6), fixed(*kappa, 4)});
  t.print(out);
  Json doc;
  doc["angle_degrees"] = args.angle;
  doc["samples"] = args.samples;
  doc["seed"] = common.seed;
  doc["omega_q"] = wq;
  doc["kappa"] = *kappa;
  write_output(common, dump_canonical(doc), out);
  return kSuccess;
}

CLI::App* add_common(CLI::App& app, const char* name, const char* description, Common& common) {
  CLI::App* sub = app.add_subcommand(name, description);
  sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  sub->add_option("--output", common.output, "Write the canonical document here ('-' for stdout)");
  return sub;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-scenario bounds on the classical-to-quantum overlap ratio", "kappa"};
  app.require_subcommand(1);

  Common common;
  VerifyArgs verify_args;
  ConstructArgs construct_args;
  SolveArgs solve_args;
  EvaluateArgs evaluate_args;
  SearchArgs search_args;
  FuzzArgs fuzz_args;
  KsArgs ks_args;

  auto* verify_cmd = add_common(app, "verify-fixtures", "Reproduce the published d3n3, d3n4 and d4n4 bounds", common);
  verify_cmd->add_option("--case", verify_args.which, "d3n3, d3n4, d4n4 or all")->capture_default_str();
  verify_cmd->add_option("--tolerance", verify_args.tolerance, "Allowed bound deviation")->capture_default_str();

  auto* construct_cmd = add_common(app, "construct", "Build a state family and certify it", common);
  construct_cmd->add_option("--family", construct_args.family, "packing, mub or hadamard")->required();
  construct_cmd->add_option("--d", construct_args.d, "Hilbert space dimension")->required();
  construct_cmd->add_option("--n", construct_args.n, "Number of satellite states");
  construct_cmd->add_option("--restarts", construct_args.restarts, "Packing restarts")->capture_default_str();

  auto* solve_cmd = add_common(app, "solve-measurements", "Optimize the pair measurements for fixed states", common);
  solve_cmd->add_option("--states", solve_args.states, "Ensemble document")->required();
  solve_cmd->add_option("--restarts", solve_args.restarts, "Random starts per pair")->capture_default_str();

  auto* evaluate_cmd = add_common(app, "evaluate", "Evaluate the bound of a scenario document", common);
  evaluate_cmd->add_option("--scenario", evaluate_args.scenario, "Scenario document")->required();

  auto* search_cmd = add_common(app, "search", "Jointly optimize states and measurements", common);
  search_cmd->add_option("--d", search_args.d, "Hilbert space dimension")->capture_default_str();
  search_cmd->add_option("--n", search_args.n, "Number of satellite states")->capture_default_str();
  search_cmd->add_option("--restarts", search_args.restarts, "Random starts")->capture_default_str();
  search_cmd->add_option("--max-iterations", search_args.max_iterations, "Simplex iterations per run")
      ->capture_default_str();

  auto* fuzz_cmd = add_common(app, "fuzz-overlap", "Test the overlap inequality on random finite models", common);
  fuzz_cmd->add_option("--trials", fuzz_args.trials, "Number of random models")->capture_default_str();
  fuzz_cmd->add_option("--L", fuzz_args.ontic, "Number of ontic states")->capture_default_str();
  fuzz_cmd->add_option("--n", fuzz_args.n, "Number of satellite states")->capture_default_str();
  fuzz_cmd->add_flag("--adversarial", fuzz_args.adversarial, "Use worst-case response functions");

  auto* ks_cmd = add_common(app, "ks-check", "Monte Carlo kappa of the Kochen-Specker qubit model", common);
  ks_cmd->add_option("--angle", ks_args.angle, "Bloch-sphere angle between the states (degrees)")
      ->capture_default_str();
  ks_cmd->add_option("--samples", ks_args.samples, "Monte Carlo samples")->capture_default_str();

  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationFailure;
  }

  try {
    if (*verify_cmd) return verify_fixtures(verify_args, common, out);
    if (*construct_cmd) return construct(construct_args, common, out);
    if (*solve_cmd) return solve(solve_args, common, out);
    if (*evaluate_cmd) return evaluate(evaluate_args, common, out);
    if (*search_cmd) return search(search_args, common, out);
    if (*fuzz_cmd) return fuzz(fuzz_args, common, out);
    if (*ks_cmd) return ks_check(ks_args, common, out);
  } catch (const ValidationError& e) {
    err << "validation failed:\n";
    for (const auto& f : e.failures()) err << "  " << f << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kValidationFailure;
}

}  // namespace kappa::cli
