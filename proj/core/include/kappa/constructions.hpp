#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kappa/bounds.hpp"
#include "kappa/quantum.hpp"

namespace kappa {

struct PackingOptions {
  int restarts = 32;
  bool real_only = false;
  /// Descent iterations per smoothing stage.
  int max_iterations = 400;
  unsigned threads = 0;
};

struct PackingResult {
  std::vector<Vector> lines;
  double achieved_max_overlap_sq = 0.0;
  double target_overlap_sq = 0.0;
  bool met_target = false;
};

/// max_{i<j} |<a_i|a_j>|^2.
double max_pairwise_overlap_sq(std::span<const Vector> lines);

/// 1 - n^{-1/(D-1)}: the packing quality needed by the packing family.
double packing_target(int dim, int n);

/// n lines in C^dim (R^dim when real_only) with small maximal overlap.
/// Minimizes a log-sum-exp smoothing of the pairwise overlaps with projected
/// gradient descent, tightening the smoothing in stages, from
/// `options.restarts` random starts; the best restart wins, ties to the
/// lowest index. Deterministic for a given seed and independent of the
/// thread count.
PackingResult grassmannian_packing(int dim, int n, std::uint64_t seed,
                                   const PackingOptions& options = {});

struct PackingStates {
  StateEnsemble ensemble;
  PackingResult packing;
  double chi = 0.0;  ///< |<psi0|psi_j>|^2
};

/// psi0 = e_0 and psi_j = sqrt(chi) e_0 + sqrt(1 - chi) phi_j, where the phi_j
/// are a packing of n lines in the complement of e_0.
PackingStates packing_states(int d, int n, std::uint64_t seed, const PackingOptions& options = {});

/// d + 1 mutually unbiased bases (columns), the computational basis first.
/// Supported: prime d and d = 4.
std::vector<Matrix> mutually_unbiased_bases(int d);

/// psi0 = e_0; satellites are the d^2 vectors of the d non-computational bases.
StateEnsemble mub_states(int d);

inline constexpr int kMaxHadamardDimension = 13;

/// psi0 = e_0; satellites are (1, +-1, ..., +-1)/sqrt(d), all 2^{d-1} sign
/// patterns in binary order.
StateEnsemble hadamard_states(int d);

enum class FixtureId { d3n3, d3n4, d4n4 };

std::string_view to_string(FixtureId id);
std::optional<FixtureId> parse_fixture_id(std::string_view text);
inline constexpr FixtureId kAllFixtures[] = {FixtureId::d3n3, FixtureId::d3n4, FixtureId::d4n4};

/// Published near-optimal states and measurements for (d, n) in
/// {(3,3), (3,4), (4,4)}, built from their trigonometric closed forms.
struct FixtureCase {
  FixtureId id;
  BoundScenario scenario;
  double expected_bound = 0.0;
  double expected_noise = 0.0;
  std::map<std::string, double> angles;
};

FixtureCase reference_fixture(FixtureId id);

}  // namespace kappa
