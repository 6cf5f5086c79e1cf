#pragma once

// Dense pure-state primitives: normalized states, projective measurement
// bases with many-to-one outcome labels, the Born rule and the quantum
// overlap omega_Q.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace kappa {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr int kMaxDimension = 64;

/// Unit vector in C^d, d >= 2. The constructor normalizes its input and
/// rejects zero vectors, so every live PureState satisfies the norm
/// invariant. Inputs already normalized to ~1e-14 are kept bit-for-bit.
class PureState {
 public:
  explicit PureState(Vector amplitudes);
  PureState(std::initializer_list<Complex> amplitudes);

  /// The computational basis vector e_index.
  static PureState basis(int dim, int index);

  int dim() const noexcept { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const noexcept { return amps_; }
  Complex operator[](int k) const { return amps_(k); }

  /// True when every imaginary part is exactly zero.
  bool is_real() const noexcept;

 private:
  Vector amps_;
};

/// Orthonormal basis (columns of `vectors`) plus a label for each column.
/// Several columns may share a label; their projectors are then summed into
/// one outcome.
class MeasurementBasis {
 public:
  /// Each column gets its own label (0..d-1).
  explicit MeasurementBasis(Matrix vectors);
  MeasurementBasis(Matrix vectors, std::vector<int> outcome_labels,
                   double tolerance = kUnitaryTolerance);

  int dim() const noexcept { return static_cast<int>(vectors_.rows()); }
  const Matrix& vectors() const noexcept { return vectors_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Sorted, deduplicated label set.
  std::vector<int> distinct_labels() const;
  bool has_label(int label) const;

  /// max |(V^H V - I)_{ij}|.
  double gram_deviation() const;

 private:
  Matrix vectors_;
  std::vector<int> labels_;
};

/// 1-based satellite pair (j1, j2) with j1 < j2.
struct PairIndex {
  int j1 = 1;
  int j2 = 2;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

/// All pairs 1 <= j1 < j2 <= n in lexicographic order. This order fixes the
/// summation order of every per-pair total in the library.
std::vector<PairIndex> enumerate_pairs(int n);

/// Position of `p` in enumerate_pairs(n).
std::size_t pair_position(PairIndex p, int n);

/// psi0 together with n >= 2 satellites of a common dimension.
class StateEnsemble {
 public:
  StateEnsemble(PureState psi0, std::vector<PureState> satellites);

  const PureState& psi0() const noexcept { return psi0_; }
  const std::vector<PureState>& satellites() const noexcept { return satellites_; }
  /// 1-based; index 0 returns psi0.
  const PureState& state(int index) const;
  int n() const noexcept { return static_cast<int>(satellites_.size()); }
  int dim() const noexcept { return psi0_.dim(); }
  bool is_real() const noexcept;

 private:
  PureState psi0_;
  std::vector<PureState> satellites_;
};

/// <a|b> = sum_k conj(a_k) b_k.
Complex inner_product(const PureState& a, const PureState& b);

/// Sum of |<v_i|psi>|^2 over the columns i carrying `outcome`.
double born_probability(const MeasurementBasis& basis, int outcome, const PureState& psi);

/// omega_Q = 1 - sqrt(1 - |<a|b>|^2). The complement 1 - |<a|b>|^2 is taken
/// from the Lagrange identity sum_{k<l} |a_k b_l - a_l b_k|^2, which is exact
/// for a == b and keeps precision for nearly parallel states.
double omega_q(const PureState& a, const PureState& b);

}  // namespace kappa
