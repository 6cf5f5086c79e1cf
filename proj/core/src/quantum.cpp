#include "kappa/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kappa/errors.hpp"

namespace kappa {

namespace {

void require_same_dim(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
  }
}

}  // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw InvalidInput("pure state dimension must be >= 2");
  if (amps_.size() > kMaxDimension) throw InvalidInput("pure state dimension exceeds 64");
  for (Eigen::Index k = 0; k < amps_.size(); ++k) {
    if (!std::isfinite(amps_(k).real()) || !std::isfinite(amps_(k).imag())) {
      throw InvalidInput("pure state has a non-finite amplitude");
    }
  }
  const double norm_sq = amps_.squaredNorm();
  if (!(norm_sq > 0.0)) throw InvalidInput("cannot normalize the zero vector");
  if (std::abs(norm_sq - 1.0) > 1e-14) amps_ /= std::sqrt(norm_sq);
}

PureState::PureState(std::initializer_list<Complex> amplitudes)
    : PureState(Vector(Eigen::Map<const Vector>(amplitudes.begin(),
                                                static_cast<Eigen::Index>(amplitudes.size())))) {}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw InvalidInput("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

bool PureState::is_real() const noexcept {
  return (amps_.imag().array() == 0.0).all();
}

MeasurementBasis::MeasurementBasis(Matrix vectors)
    : MeasurementBasis(std::move(vectors), {}, kUnitaryTolerance) {}

MeasurementBasis::MeasurementBasis(Matrix vectors, std::vector<int> outcome_labels,
                                   double tolerance)
    : vectors_(std::move(vectors)), labels_(std::move(outcome_labels)) {
  if (vectors_.rows() != vectors_.cols()) throw InvalidInput("measurement basis must be square");
  if (vectors_.rows() < 2) throw InvalidInput("measurement basis dimension must be >= 2");
  if (labels_.empty()) {
    labels_.resize(static_cast<std::size_t>(vectors_.cols()));
    for (std::size_t i = 0; i < labels_.size(); ++i) labels_[i] = static_cast<int>(i);
  }
  if (static_cast<Eigen::Index>(labels_.size()) != vectors_.cols()) {
    throw InvalidInput("every basis column needs exactly one outcome label");
  }
  const double dev = gram_deviation();
  if (!(dev <= tolerance)) {
    throw InvalidInput("measurement basis is not orthonormal (Gram deviation " +
                       std::to_string(dev) + ")");
  }
}

std::vector<int> MeasurementBasis::distinct_labels() const {
  std::vector<int> out = labels_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool MeasurementBasis::has_label(int label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

double MeasurementBasis::gram_deviation() const {
  const Matrix gram = vectors_.adjoint() * vectors_;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

std::vector<PairIndex> enumerate_pairs(int n) {
  std::vector<PairIndex> pairs;
  if (n < 2) return pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int j1 = 1; j1 <= n; ++j1) {
    for (int j2 = j1 + 1; j2 <= n; ++j2) pairs.push_back({j1, j2});
  }
  return pairs;
}

std::size_t pair_position(PairIndex p, int n) {
  if (p.j1 < 1 || p.j2 <= p.j1 || p.j2 > n) throw InvalidInput("pair index out of range");
  // rows j < j1 contribute (n - j) pairs each
  const auto j1 = static_cast<std::size_t>(p.j1);
  const auto nn = static_cast<std::size_t>(n);
  return (j1 - 1) * nn - (j1 - 1) * j1 / 2 + static_cast<std::size_t>(p.j2 - p.j1 - 1);
}

StateEnsemble::StateEnsemble(PureState psi0, std::vector<PureState> satellites)
    : psi0_(std::move(psi0)), satellites_(std::move(satellites)) {
  if (satellites_.size() < 2) throw InvalidInput("ensemble needs at least 2 satellites");
  for (const auto& s : satellites_) {
    if (s.dim() != psi0_.dim()) throw InvalidInput("ensemble states differ in dimension");
  }
}

const PureState& StateEnsemble::state(int index) const {
  if (index == 0) return psi0_;
  if (index < 0 || index > n()) throw InvalidInput("state index out of range");
  return satellites_[static_cast<std::size_t>(index - 1)];
}

bool StateEnsemble::is_real() const noexcept {
  return psi0_.is_real() &&
         std::all_of(satellites_.begin(), satellites_.end(),
                     [](const PureState& s) { return s.is_real(); });
}

Complex inner_product(const PureState& a, const PureState& b) {
  require_same_dim(a, b);
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

double born_probability(const MeasurementBasis& basis, int outcome, const PureState& psi) {
  if (basis.dim() != psi.dim()) throw InvalidInput("basis and state differ in dimension");
  if (!basis.has_label(outcome)) {
    throw InvalidInput("unknown outcome label " + std::to_string(outcome));
  }
  double p = 0.0;
  const auto& labels = basis.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != outcome) continue;
    p += std::norm(basis.vectors().col(static_cast<Eigen::Index>(i)).dot(psi.amplitudes()));
  }
  return p;
}

double omega_q(const PureState& a, const PureState& b) {
  require_same_dim(a, b);
  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  double complement = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    for (Eigen::Index l = k + 1; l < x.size(); ++l) {
      complement += std::norm(x(k) * y(l) - x(l) * y(k));
    }
  }
  complement = std::clamp(complement, 0.0, 1.0);
  return std::clamp(1.0 - std::sqrt(complement), 0.0, 1.0);
}

}  // namespace kappa
