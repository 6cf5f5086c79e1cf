// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kappa/bounds.hpp"
#include "kappa/cli.hpp"
#include "kappa/compatibility.hpp"
#include "kappa/constructions.hpp"
#include "kappa/io.hpp"
#include "kappa/ontology.hpp"
#include "kappa/optimizer.hpp"

using namespace kappa;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome fixture_reproduction() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double bound[3] = {0.9964, 0.9361, 0.9054};
  const double noise[3] = {6e-4, 5e-3, 7e-3};
  for (std::size_t k = 0; k < 3; ++k) {
    const FixtureId id = kAllFixtures[k];
    const BoundReport r = evaluate_bound(reference_fixture(id).scenario);
    const double scale = std::pow(10.0, std::floor(std::log10(r.noise_threshold)));
    const double rounded = std::round(r.noise_threshold / scale) * scale;
    o.check(std::abs(r.kappa_bound - bound[k]) <= 5e-4, std::string(to_string(id)) + " bound " + num(r.kappa_bound));
    o.check(std::abs(rounded - noise[k]) <= 1e-9 * noise[k], std::string(to_string(id)) + " noise " + num(r.noise_threshold));
    o.note(std::string(to_string(id)) + " " + num(r.kappa_bound, "%.4f") + "/" + num(r.noise_threshold, "%.0e"));
  }
  std::ostringstream out, err;
  o.check(cli::run({"kappa", "verify-fixtures", "--case", "all"}, out, err) == 0, "verify-fixtures exit code");
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  return o;
}

Outcome equal_overlap_formulas() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const int d = 4;
  const double mub = equal_overlap_bound(mub_states(d));
  const double mub_closed = 1.0 / (d * d * (1.0 - std::sqrt(1.0 - 1.0 / d)));
  o.check(std::abs(mub - mub_closed) <= 1e-9, "mub d=4 " + num(mub, "%.12f"));
  o.check(mub < 2.0 / d, "mub d=4 not below 2/d");
  o.note("mub d=4 " + num(mub, "%.5f"));
  for (int h : {4, 5}) {
    const double value = equal_overlap_bound(hadamard_states(h));
    const double closed = 1.0 / (std::pow(2.0, h - 1) * (1.0 - std::sqrt(1.0 - 1.0 / h)));
    o.check(std::abs(value - closed) <= 1e-9, "hadamard d=" + std::to_string(h) + " " + num(value, "%.12f"));
    o.check(value < 4.0 * h / std::pow(2.0, h), "hadamard d=" + std::to_string(h) + " not below 4d/2^d");
    o.note("hadamard d=" + std::to_string(h) + " " + num(value, "%.5f"));
  }
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  return o;
}

Outcome packing_construction() {
  Outcome o;
  double slowest = 0.0;
  for (int d : {4, 5}) {
    for (int n : {8, 16, 32}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto ps = packing_states(d, n, 1);
      const auto cert = certify_ensemble(ps.ensemble);
      const auto pb = packing_bound(d, n);
      const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n);
      o.check(ps.packing.met_target, tag + " packing target missed");
      o.check(cert.all_pp_incompatible(), tag + " " + std::to_string(cert.failing_triples.size()) + " triples fail");
      const double chi = 0.25 * std::pow(n, -1.0 / (d - 2));
      double worst = 0.0;
      for (const auto& s : ps.ensemble.satellites()) {
        worst = std::max(worst, std::abs(std::norm(inner_product(ps.ensemble.psi0(), s)) - chi));
      }
      o.check(worst <= 1e-12, tag + " overlap off by " + num(worst));
      o.check(pb.exact <= pb.loose, tag + " exact > loose");
      slowest = std::max(slowest, seconds_since(t0));
    }
  }
  o.check(slowest < 60.0, "slowest case " + num(slowest) + " s");
  o.note("slowest case " + num(slowest, "%.2f") + " s");
  return o;
}

Outcome scaling() {
  Outcome o;
  double previous = INFINITY;
  for (double n : {4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0}) {
    const double loose = packing_bound(4, n).loose;
    o.check(loose < previous, "not decreasing at n=" + num(n));
    o.check(std::abs(loose - 8.0 / std::sqrt(n)) <= 1e-12, "closed form at n=" + num(n));
    previous = loose;
  }
  o.check(previous <= 0.125, "n=4096 loose " + num(previous));
  for (const auto& row : kappa_scaling_report(4, {4, 16, 64, 256, 1024, 4096})) {
    o.check(row.consistent, "scaling row n=" + num(row.n) + " inconsistent");
  }
  o.note("n=4096 loose " + num(previous));
  return o;
}

Outcome search_rediscovery() {
  Outcome o;
  const struct {
    int d;
    double threshold;
  } cases[] = {{3, 0.9411}, {4, 0.9104}};
  for (const auto& c : cases) {
    SearchConfig cfg;
    cfg.dim = c.d;
    cfg.n = 4;
    cfg.restarts = 64;
    cfg.seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const SearchResult r = joint_search(cfg);
    const double elapsed = seconds_since(t0);
    const std::string tag = "d=" + std::to_string(c.d) + " n=4";
    o.check(r.report.kappa_bound <= c.threshold, tag + " bound " + num(r.report.kappa_bound));
    o.check(elapsed < 300.0, tag + " runtime " + num(elapsed) + " s");
    o.note(tag + " " + num(r.report.kappa_bound, "%.6f") + " in " + num(elapsed, "%.1f") + " s");
  }
  return o;
}

Outcome overlap_fuzz() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {2, 3, 5}) {
    const FuzzReport r = fuzz_overlap_inequality(10000, 1, 8, n);
    o.check(r.violations == 0, "n=" + std::to_string(n) + " " + std::to_string(r.violations) + " violations");
    o.check(r.worst_margin >= -1e-10, "n=" + std::to_string(n) + " worst margin " + num(r.worst_margin));
    o.note("n=" + std::to_string(n) + " worst " + num(r.worst_margin, "%.3g"));
  }
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 30.0, "runtime " + num(elapsed) + " s");
  return o;
}

Outcome kochen_specker() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const PureState a{Complex(1.0), Complex(0.0)};
  for (double angle : {30.0, 60.0, 90.0, 120.0}) {
    const double half = angle * std::numbers::pi / 360.0;
    const PureState b{Complex(std::cos(half)), Complex(std::sin(half))};
    const auto k = ks_qubit_kappa(a, b, 1'000'000, 1);
    o.check(k && std::abs(*k - 1.0) <= 0.01, num(angle) + " deg kappa " + (k ? num(*k) : "undefined"));
    if (k) o.note(num(angle) + " deg " + num(*k, "%.4f"));
  }
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 30.0, "runtime " + num(elapsed) + " s");
  return o;
}

Outcome solver_parity() {
  Outcome o;
  for (FixtureId id : kAllFixtures) {
    const FixtureCase f = reference_fixture(id);
    SearchConfig cfg;
    cfg.dim = f.scenario.ensemble().dim();
    cfg.n = f.scenario.ensemble().n();
    const double mine = evaluate_bound(solve_measurements(f.scenario.ensemble(), cfg)).error_sum;
    const double ref = evaluate_bound(f.scenario).error_sum;
    o.check(mine <= ref + 1e-6, std::string(to_string(id)) + " " + num(mine) + " > " + num(ref));
    o.note(std::string(to_string(id)) + " " + num(mine, "%.6f") + " vs " + num(ref, "%.6f"));
  }
  return o;
}

Outcome round_trip() {
  Outcome o;
  for (FixtureId id : kAllFixtures) {
    const FixtureCase f = reference_fixture(id);
    const std::string tag(to_string(id));
    const BoundReport in_process = evaluate_bound(f.scenario);
    const std::string text = write_document(to_document(f.scenario), to_json(in_process));
    const ScenarioDocument doc = read_scenario_document(text);
    o.check(write_document(doc, to_json(in_process)) == text, tag + " text differs after round trip");
    const BoundScenario back = to_scenario(doc);
    for (int j = 0; j <= back.ensemble().n(); ++j) {
      o.check(back.ensemble().state(j).amplitudes() == f.scenario.ensemble().state(j).amplitudes(),
              tag + " state " + std::to_string(j) + " changed");
    }
    for (std::size_t k = 0; k < back.measurements().size(); ++k) {
      o.check(back.measurements()[k].basis.vectors() == f.scenario.measurements()[k].basis.vectors(),
              tag + " basis " + std::to_string(k) + " changed");
    }
    const double diff = std::abs(evaluate_bound(back).kappa_bound - in_process.kappa_bound);
    o.check(diff <= 1e-12, tag + " bound differs by " + num(diff));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fixture reproduction", fixture_reproduction},
      {"equal-overlap closed forms", equal_overlap_formulas},
      {"packing construction", packing_construction},
      {"bound scaling", scaling},
      {"search rediscovery", search_rediscovery},
      {"overlap inequality fuzz", overlap_fuzz},
      {"Kochen-Specker check", kochen_specker},
      {"solver parity", solver_parity},
      {"document round trip", round_trip},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %-28s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
