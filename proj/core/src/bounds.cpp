#include "kappa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kappa/errors.hpp"

namespace kappa {

namespace {

std::string pair_name(PairIndex p) {
  return "(" + std::to_string(p.j1) + "," + std::to_string(p.j2) + ")";
}

}  // namespace

BoundScenario::BoundScenario(StateEnsemble ensemble, std::vector<PairMeasurement> measurements)
    : ensemble_(std::move(ensemble)), measurements_(std::move(measurements)) {
  const int n = ensemble_.n();
  const auto expected = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (measurements_.size() != expected) {
    throw InvalidInput("scenario needs " + std::to_string(expected) + " measurements, got " +
                       std::to_string(measurements_.size()));
  }
  std::sort(measurements_.begin(), measurements_.end(),
            [](const PairMeasurement& a, const PairMeasurement& b) { return a.pair < b.pair; });
  const auto pairs = enumerate_pairs(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const PairMeasurement& m = measurements_[k];
    if (m.pair != pairs[k]) {
      throw InvalidInput("measurement pairs must cover each 1 <= j1 < j2 <= n exactly once");
    }
    if (m.basis.dim() != ensemble_.dim()) {
      throw InvalidInput("measurement " + pair_name(m.pair) + " has the wrong dimension");
    }
    const auto& a = m.assignment;
    if (a[0] == a[1] || a[0] == a[2] || a[1] == a[2]) {
      throw InvalidInput("measurement " + pair_name(m.pair) + " assigns one outcome twice");
    }
    std::vector<int> assigned(a.begin(), a.end());
    std::sort(assigned.begin(), assigned.end());
    if (m.basis.distinct_labels() != assigned) {
      throw InvalidInput("measurement " + pair_name(m.pair) +
                         " must have exactly the three assigned outcomes");
    }
  }
}

const PairMeasurement& BoundScenario::measurement(PairIndex p) const {
  return measurements_.at(pair_position(p, ensemble_.n()));
}

double BoundReport::kappa_bound_with_noise(double epsilon) const {
  return (1.0 + error_sum + 1.5 * n * (n - 1) * epsilon) / omega_q_sum;
}

BoundReport evaluate_bound(const BoundScenario& s) {
  const StateEnsemble& e = s.ensemble();
  BoundReport r;
  r.n = e.n();
  r.per_pair_terms.reserve(s.measurements().size());

  for (const PairMeasurement& m : s.measurements()) {
    PairTerms t{m.pair, {}};
    const std::array<int, 3> which{0, m.pair.j1, m.pair.j2};
    for (std::size_t i = 0; i < 3; ++i) {
      t.p[i] = born_probability(m.basis, m.assignment[i], e.state(which[i]));
      r.error_sum += t.p[i];
    }
    r.per_pair_terms.push_back(t);
  }
  for (const auto& sat : e.satellites()) r.omega_q_sum += omega_q(e.psi0(), sat);

  if (!(r.omega_q_sum > 0.0)) {
    throw InvalidInput("degenerate scenario: every satellite is orthogonal to psi0");
  }
  r.kappa_bound = (1.0 + r.error_sum) / r.omega_q_sum;
  r.noise_threshold = (r.omega_q_sum - 1.0 - r.error_sum) / (1.5 * r.n * (r.n - 1));
  return r;
}

CertificationFailure::CertificationFailure(const std::string& what, CertificationReport report)
    : std::runtime_error(what), report_(std::move(report)) {}

double equal_overlap_bound(const StateEnsemble& e) {
  CertificationReport cert = certify_ensemble(e);
  if (!cert.all_pp_incompatible()) {
    throw CertificationFailure(std::to_string(cert.failing_triples.size()) + " of " +
                                   std::to_string(cert.triples_total) +
                                   " triples are not PP-incompatible",
                               std::move(cert));
  }
  if (!cert.overlaps_equal) {
    throw CertificationFailure("satellite overlaps with psi0 are not all equal",
                               std::move(cert));
  }
  return 1.0 / (e.n() * omega_q(e.psi0(), e.satellites().front()));
}

double packing_overlap_sq(int d, double n) {
  if (d < 3) throw InvalidInput("packing family needs d >= 3");
  if (!(n >= 1.0)) throw InvalidInput("packing family needs n >= 1");
  return 0.25 * std::pow(n, -1.0 / (d - 2));
}

PackingBound packing_bound(int d, double n) {
  if (!(n >= 2.0)) throw InvalidInput("packing bound needs n >= 2");
  const double chi = packing_overlap_sq(d, n);
  PackingBound b;
  b.exact = 1.0 / (n * (1.0 - std::sqrt(1.0 - chi)));
  b.loose = 8.0 / std::pow(n, static_cast<double>(d - 3) / (d - 2));
  return b;
}

double packing_noise_threshold(int d, double n) {
  if (d < 4) throw InvalidInput("packing noise threshold needs d >= 4");
  if (!(n >= 1.0)) throw InvalidInput("packing noise threshold needs n >= 1");
  return 1.0 / (12.0 * std::pow(n, static_cast<double>(d - 1) / (d - 2)));
}

std::vector<ScalingRow> kappa_scaling_report(int d, const std::vector<double>& n_values) {
  if (d < 4) throw InvalidInput("scaling report needs d >= 4");
  std::vector<ScalingRow> rows;
  rows.reserve(n_values.size());
  for (const double n : n_values) {
    ScalingRow row;
    row.n = n;
    row.inner_product = std::sqrt(packing_overlap_sq(d, n));
    row.loose_bound = 8.0 / std::pow(n, static_cast<double>(d - 3) / (d - 2));
    row.power_law_bound = std::pow(4.0, d) / 8.0 * std::pow(row.inner_product, 2.0 * (d - 3));
    row.consistent =
        std::abs(row.power_law_bound - row.loose_bound) <= 1e-9 * std::abs(row.loose_bound);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kappa
