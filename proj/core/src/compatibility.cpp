#include "kappa/compatibility.hpp"

#include <algorithm>
#include <cmath>

namespace kappa {

namespace {

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TripleOverlaps triple_overlaps(const PureState& psi0, const PureState& a, const PureState& b) {
  return {clamp_unit(std::norm(inner_product(psi0, a))),
          clamp_unit(std::norm(inner_product(psi0, b))),
          clamp_unit(std::norm(inner_product(a, b)))};
}

bool CriterionMargins::near_boundary(double tol) const {
  return std::abs(sum_margin) <= tol || std::abs(square_margin) <= tol;
}

CriterionMargins criterion_margins(const TripleOverlaps& t) {
  const double rest = 1.0 - t.x1 - t.x2 - t.x3;
  return {rest, rest * rest - 4.0 * t.x1 * t.x2 * t.x3};
}

bool is_pp_incompatible(const TripleOverlaps& t, double tol) {
  const CriterionMargins m = criterion_margins(t);
  return m.sum_margin > tol && m.square_margin >= -tol;
}

CertificationReport certify_ensemble(const StateEnsemble& e, double overlap_tol) {
  CertificationReport report;
  report.overlap_tolerance = overlap_tol;

  const int n = e.n();
  for (const PairIndex p : enumerate_pairs(n)) {
    const TripleOverlaps t = triple_overlaps(e.psi0(), e.state(p.j1), e.state(p.j2));
    ++report.triples_total;
    if (is_pp_incompatible(t)) {
      ++report.triples_pp_incompatible;
    } else {
      report.failing_triples.push_back(p);
    }
    if (criterion_margins(t).near_boundary()) report.near_boundary_triples.push_back(p);
  }

  double lo = 1.0;
  double hi = 0.0;
  for (const auto& s : e.satellites()) {
    const double w = omega_q(e.psi0(), s);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  report.overlaps_equal = (hi - lo) <= overlap_tol;
  return report;
}

}  // namespace kappa
