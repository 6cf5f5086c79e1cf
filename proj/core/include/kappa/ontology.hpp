#pragma once

// Finite ontological models: epistemic states are probability vectors over
// L ontic states, response functions are column-stochastic outcome tables.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kappa/quantum.hpp"

namespace kappa {

class DiscreteOntologicalModel {
 public:
  /// Throws InvalidInput unless every epistemic state is a probability vector
  /// of length ontic_count and every response table has ontic_count columns,
  /// each a probability vector over outcomes (tolerance 1e-12).
  DiscreteOntologicalModel(int ontic_count, std::vector<std::vector<double>> epistemic_states,
                           std::vector<Eigen::MatrixXd> response_functions);

  int ontic_count() const noexcept { return ontic_count_; }
  const std::vector<std::vector<double>>& epistemic_states() const noexcept { return states_; }
  /// Table (outcome, ontic state).
  const std::vector<Eigen::MatrixXd>& response_functions() const noexcept { return responses_; }

 private:
  int ontic_count_;
  std::vector<std::vector<double>> states_;
  std::vector<Eigen::MatrixXd> responses_;
};

/// sum_l min(mu_a(l), mu_b(l)).
double classical_overlap(std::span<const double> mu_a, std::span<const double> mu_b);

/// sum_l xi(outcome | l) mu_state(l).
double model_probability(const DiscreteOntologicalModel& model, int measurement, int outcome,
                         int state_index);

/// Slack of the pairwise-overlap inequality for a model laid out as
/// states 0..n (state 0 is psi0) and one 3-outcome table per pair (j1, j2)
/// in enumerate_pairs order:
///   1 + sum_pairs [P(m0|0) + P(m1|j1) + P(m2|j2)] - sum_j omega_C(0, j).
double overlap_inequality_margin(const DiscreteOntologicalModel& model);

/// Response tables that minimize the right-hand side of the inequality for
/// the given epistemic states: at each ontic state the outcome of the
/// triple member with the smallest weight fires with certainty.
std::vector<Eigen::MatrixXd> adversarial_responses(const std::vector<std::vector<double>>& states);

struct FuzzReport {
  long trials = 0;
  long violations = 0;
  double worst_margin = 0.0;
};

inline constexpr double kViolationTolerance = 1e-10;

struct FuzzOptions {
  /// Use adversarial_responses instead of random tables.
  bool adversarial = false;
  unsigned threads = 0;
};

/// Random models with n + 1 flat-Dirichlet epistemic states over L ontic
/// states and column-wise flat-Dirichlet response tables; each trial has
/// its own random stream derived from (seed, trial).
FuzzReport fuzz_overlap_inequality(long trials, std::uint64_t seed, int ontic_count, int n,
                                   const FuzzOptions& options = {});

/// Bloch vector (x, y, z) of a qubit state.
Eigen::Vector3d bloch_vector(const PureState& psi);

/// Monte Carlo estimate of omega_C / omega_Q in the Kochen-Specker qubit
/// model, where mu_psi(l) = max(psi . l, 0) / pi on the unit sphere.
/// Samples are drawn from mu_a (cosine-weighted about a's Bloch vector) with
/// weight min(1, mu_b / mu_a). Returns nullopt for orthogonal states.
std::optional<double> ks_qubit_kappa(const PureState& a, const PureState& b, long samples,
                                     std::uint64_t seed, unsigned threads = 0);

/// The trivial psi-ontic model for two states and one basis: state a sits on
/// ontic state 0, state b on ontic state 1, and the response table (one row
/// per distinct outcome label) returns the Born probabilities of each.
DiscreteOntologicalModel psi_ontic_model(const PureState& a, const PureState& b,
                                         const MeasurementBasis& basis);

}  // namespace kappa
