#pragma once

// Measurement and state searches that drive the finite-scenario kappa bound
// down. States and bases are parameterized by unconstrained angle vectors:
// hyperspherical angles (plus relative phases) for states, products of
// Givens rotations (with phases in the complex case) for bases.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kappa/bounds.hpp"
#include "kappa/quantum.hpp"

namespace kappa {

struct SearchConfig {
  int dim = 3;
  int n = 4;
  int restarts = 64;
  std::uint64_t seed = 1;
  /// Nelder-Mead iterations per simplex run.
  int max_iterations = 5000;
  double tolerance = 1e-12;
  /// Defaults to true for d in {3, 4}.
  std::optional<bool> real_only;
  /// Random starts per triple in solve_measurements.
  int measurement_restarts = 8;
  unsigned threads = 0;

  bool effective_real_only() const { return real_only.value_or(dim == 3 || dim == 4); }
  /// Throws InvalidInput.
  void validate() const;
};

/// Maps an angle vector to a unitary U = G_1 G_2 ... G_K, one (complex)
/// Givens rotation per coordinate pair (i < j). Column phases are irrelevant
/// to Born probabilities, so this covers every projective basis.
class BasisParameterization {
 public:
  BasisParameterization(int dim, bool real_only);

  int dim() const noexcept { return dim_; }
  bool real_only() const noexcept { return real_; }
  std::size_t size() const noexcept;
  void build(std::span<const double> params, Matrix& out) const;
  Matrix build(std::span<const double> params) const;

 private:
  int dim_;
  bool real_;
};

/// Unit vector from d-1 hyperspherical angles, followed by d-1 relative
/// phases when complex.
class StateParameterization {
 public:
  StateParameterization(int dim, bool real_only);

  std::size_t size() const noexcept;
  void build(std::span<const double> params, Vector& out) const;

 private:
  int dim_;
  bool real_;
};

/// Best labeling of a basis as a 3-outcome measurement for one triple.
struct TripleAssignment {
  double error = 0.0;
  /// Column carrying m0, m1, m2.
  std::array<int, 3> columns{0, 1, 2};
  /// Outcome (0, 1, 2) of every column; unassigned columns join the outcome
  /// on which they cost least.
  std::vector<int> labels;
};

/// Minimizes P(m0|s0) + P(m1|s1) + P(m2|s2) over the injective choices of
/// the three outcome columns, by brute force.
TripleAssignment best_assignment(const Matrix& basis, const PureState& s0, const PureState& s1,
                                 const PureState& s2);

struct TripleSolution {
  PairMeasurement measurement;
  double error = 0.0;
};

/// Measurement minimizing the error sum for (psi0, a, b).
TripleSolution solve_triple(const PureState& psi0, const PureState& a, const PureState& b,
                            const SearchConfig& cfg, std::uint64_t stream);

/// Independently solves every pair of `e`. Bases are real when
/// cfg.effective_real_only() and every state of `e` is real.
BoundScenario solve_measurements(const StateEnsemble& e, const SearchConfig& cfg);

struct SearchResult {
  BoundScenario scenario;
  BoundReport report;
  /// Best objective reached by each restart, in restart order.
  std::vector<double> objective_history;
  std::uint64_t seed_used = 0;
};

/// Minimizes the kappa bound jointly over satellite states (psi0 = e_0) and
/// all pair measurements from cfg.restarts random starts.
SearchResult joint_search(const SearchConfig& cfg);

}  // namespace kappa
