#pragma once

#include <vector>

#include "kappa/quantum.hpp"

namespace kappa {

inline constexpr double kCriterionTolerance = 1e-10;
inline constexpr double kOverlapEqualTolerance = 1e-9;

/// Squared moduli |<psi0|a>|^2, |<psi0|b>|^2, |<a|b>|^2, each clamped to [0,1].
struct TripleOverlaps {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

TripleOverlaps triple_overlaps(const PureState& psi0, const PureState& a, const PureState& b);

/// Signed slack of the two conditions:
///   sum_margin    = 1 - (x1 + x2 + x3)                 (needs > 0)
///   square_margin = (1 - x1 - x2 - x3)^2 - 4 x1 x2 x3  (needs >= 0)
struct CriterionMargins {
  double sum_margin = 0.0;
  double square_margin = 0.0;

  /// Either margin lies within `tol` of zero.
  bool near_boundary(double tol = kCriterionTolerance) const;
};

CriterionMargins criterion_margins(const TripleOverlaps& t);

/// PP-incompatibility of (psi0, a, b) from their overlaps. A margin inside
/// [-tol, tol] counts as sitting on the boundary: the strict sum condition
/// then fails, the non-strict square condition passes.
bool is_pp_incompatible(const TripleOverlaps& t, double tol = kCriterionTolerance);

struct CertificationReport {
  int triples_total = 0;
  int triples_pp_incompatible = 0;
  std::vector<PairIndex> failing_triples;
  /// Triples whose verdict was decided inside the boundary tolerance.
  std::vector<PairIndex> near_boundary_triples;
  bool overlaps_equal = false;
  double overlap_tolerance = kOverlapEqualTolerance;

  bool all_pp_incompatible() const noexcept {
    return triples_pp_incompatible == triples_total;
  }
};

/// Checks every triple (psi0, psi_j1, psi_j2), j1 < j2, and whether all
/// omega_Q(psi0, psi_j) agree within `overlap_tol`.
CertificationReport certify_ensemble(const StateEnsemble& e,
                                     double overlap_tol = kOverlapEqualTolerance);

}  // namespace kappa
