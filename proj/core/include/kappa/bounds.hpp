#pragma once

// Bound formulas on the classical-to-quantum overlap ratio kappa:
//  * the finite-scenario bound (1 + sum of error probabilities) / sum omega_Q
//    together with its worst-case noise tolerance,
//  * the equal-overlap bound 1 / (n omega_Q) for PP-incompatible ensembles,
//  * the closed forms attached to the line-packing family of states.

#include <array>
#include <stdexcept>
#include <vector>

#include "kappa/compatibility.hpp"
#include "kappa/quantum.hpp"

namespace kappa {

/// The 3-outcome measurement used for the triple (psi0, psi_j1, psi_j2).
/// `assignment[i]` is the outcome label m_i; m_0 is scored on psi0, m_1 on
/// psi_j1 and m_2 on psi_j2.
struct PairMeasurement {
  PairIndex pair;
  MeasurementBasis basis;
  std::array<int, 3> assignment{0, 1, 2};
};

/// An ensemble plus one measurement per satellite pair. Construction checks
/// that every pair is covered exactly once and that each basis has exactly
/// the three assigned outcomes (extra columns must be merged into one of them).
class BoundScenario {
 public:
  BoundScenario(StateEnsemble ensemble, std::vector<PairMeasurement> measurements);

  const StateEnsemble& ensemble() const noexcept { return ensemble_; }
  /// Sorted in enumerate_pairs order.
  const std::vector<PairMeasurement>& measurements() const noexcept { return measurements_; }
  const PairMeasurement& measurement(PairIndex p) const;

 private:
  StateEnsemble ensemble_;
  std::vector<PairMeasurement> measurements_;
};

/// P(m_0|psi0), P(m_1|psi_j1), P(m_2|psi_j2) for one pair.
struct PairTerms {
  PairIndex pair;
  std::array<double, 3> p{};
};

struct BoundReport {
  int n = 0;
  double kappa_bound = 0.0;
  double error_sum = 0.0;
  double omega_q_sum = 0.0;
  /// Largest per-probability estimation error that keeps the bound below 1.
  /// Negative when the noiseless bound is already trivial.
  double noise_threshold = 0.0;
  std::vector<PairTerms> per_pair_terms;

  bool trivial() const noexcept { return kappa_bound >= 1.0; }
  /// Bound after adding `epsilon` to each of the 3 n(n-1)/2 probabilities.
  double kappa_bound_with_noise(double epsilon) const;
};

BoundReport evaluate_bound(const BoundScenario& s);

/// Raised by equal_overlap_bound when the ensemble does not qualify.
class CertificationFailure : public std::runtime_error {
 public:
  CertificationFailure(const std::string& what, CertificationReport report);
  const CertificationReport& report() const noexcept { return report_; }

 private:
  CertificationReport report_;
};

/// 1 / (n omega_Q(psi0, psi_1)); requires every triple PP-incompatible and
/// equal overlaps (throws CertificationFailure otherwise).
double equal_overlap_bound(const StateEnsemble& e);

struct PackingBound {
  double exact = 0.0;  ///< 1 / (n (1 - sqrt(1 - n^{-1/(d-2)} / 4)))
  double loose = 0.0;  ///< 8 / n^{(d-3)/(d-2)}
};

/// Average-kappa bound for the packing family in dimension d >= 3 with
/// n >= 2 satellites.
PackingBound packing_bound(int d, double n);

/// Squared overlap chi = n^{-1/(d-2)} / 4 between psi0 and each satellite of
/// the packing family.
double packing_overlap_sq(int d, double n);

/// Noise tolerance 1 / (12 n^{(d-1)/(d-2)}) of the packing family, d >= 4.
double packing_noise_threshold(int d, double n);

struct ScalingRow {
  double n = 0.0;
  double inner_product = 0.0;     ///< |<psi|phi>| = sqrt(chi)
  double loose_bound = 0.0;       ///< 8 / n^{(d-3)/(d-2)}
  double power_law_bound = 0.0;   ///< (4^d / 8) |<psi|phi>|^{2(d-3)}
  bool consistent = false;        ///< the two agree within 1e-9 relative
  bool trivial() const noexcept { return loose_bound >= 1.0; }
};

/// kappa against the inner product for the packing family, d >= 4.
std::vector<ScalingRow> kappa_scaling_report(int d, const std::vector<double>& n_values);

}  // namespace kappa
