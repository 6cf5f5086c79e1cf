#include "kappa/quantum.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "kappa/errors.hpp"
#include "oracle.hpp"

using namespace kappa;

namespace {

PureState random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = Complex(g(rng), g(rng));
  return PureState(v);
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

}  // namespace

TEST(PureState, normalizes_input) {
  PureState s{Complex(3.0), Complex(0.0, 4.0)};
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(s[1].imag(), 0.8, 1e-15);
}

TEST(PureState, keeps_normalized_bits) {
  const double c = std::cos(1.1945), s = std::sin(1.1945);
  PureState p{Complex(c), Complex(s), Complex(0.0)};
  EXPECT_EQ(p[0].real(), c);
  EXPECT_EQ(p[1].real(), s);
}

TEST(PureState, rejects_bad_input) {
  EXPECT_THROW(PureState(Vector::Zero(3)), InvalidInput);
  EXPECT_THROW(PureState(Vector::Ones(1)), InvalidInput);
  EXPECT_THROW(PureState(Vector::Ones(65)), InvalidInput);
  Vector v = Vector::Ones(3);
  v(1) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(PureState{v}, InvalidInput);
  EXPECT_THROW(PureState::basis(3, 3), InvalidInput);
}

TEST(InnerProduct, basic_cases) {
  const auto e0 = PureState::basis(3, 0);
  const auto e1 = PureState::basis(3, 1);
  EXPECT_EQ(inner_product(e0, e0), Complex(1.0));
  EXPECT_EQ(inner_product(e0, e1), Complex(0.0));
  PureState b{Complex(std::cos(1.1945)), Complex(std::sin(1.1945)), Complex(0.0)};
  EXPECT_NEAR(inner_product(e0, b).real(), 0.367478, 1e-6);
  EXPECT_THROW(inner_product(e0, PureState::basis(4, 0)), InvalidInput);
}

TEST(InnerProduct, conjugates_first_argument) {
  PureState a{Complex(0.0, 1.0), Complex(0.0)};
  PureState b{Complex(1.0), Complex(0.0)};
  EXPECT_NEAR(inner_product(a, b).imag(), -1.0, 1e-15);
}

TEST(MeasurementBasis, validates_gram_and_labels) {
  Matrix m = Matrix::Identity(3, 3);
  EXPECT_NO_THROW(MeasurementBasis{m});
  Matrix bad = m;
  bad(0, 1) = 1e-6;
  EXPECT_THROW(MeasurementBasis{bad}, InvalidInput);
  EXPECT_THROW(MeasurementBasis(m, {0, 1}), InvalidInput);
  MeasurementBasis merged(Matrix::Identity(4, 4), {0, 1, 2, 0});
  EXPECT_EQ(merged.distinct_labels(), (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(merged.has_label(2));
  EXPECT_FALSE(merged.has_label(3));
}

TEST(BornProbability, basis_states) {
  MeasurementBasis id(Matrix::Identity(3, 3));
  const auto e0 = PureState::basis(3, 0);
  EXPECT_EQ(born_probability(id, 0, e0), 1.0);
  EXPECT_EQ(born_probability(id, 1, e0), 0.0);
  EXPECT_THROW(born_probability(id, 7, e0), InvalidInput);
}

TEST(BornProbability, merged_outcome_adds_columns) {
  MeasurementBasis merged(Matrix::Identity(4, 4), {0, 1, 2, 0});
  PureState psi{Complex(0.5), Complex(0.5), Complex(0.5), Complex(0.5)};
  EXPECT_NEAR(born_probability(merged, 0, psi), 0.5, 1e-15);
  EXPECT_NEAR(born_probability(merged, 1, psi), 0.25, 1e-15);
}

TEST(BornProbability, sums_to_one_over_labels) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 6;
    std::vector<int> labels(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c) labels[static_cast<std::size_t>(c)] = c % 3;
    MeasurementBasis basis(random_unitary(dim, rng), labels);
    const auto psi = random_state(dim, rng);
    double total = 0.0;
    for (int label : basis.distinct_labels()) {
      const double p = born_probability(basis, label, psi);
      EXPECT_NEAR(p, oracle::probability(basis, label, psi), 1e-12);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(OmegaQ, closed_cases) {
  const auto e0 = PureState::basis(3, 0);
  EXPECT_EQ(omega_q(e0, e0), 1.0);
  EXPECT_EQ(omega_q(e0, PureState::basis(3, 2)), 0.0);
  const double r = 1.0 / std::sqrt(3.0);
  PureState flat{Complex(r), Complex(r), Complex(r)};
  EXPECT_NEAR(omega_q(e0, flat), 1.0 - std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_NEAR(omega_q(e0, flat), 0.18350, 1e-5);
}

TEST(OmegaQ, equal_states_give_exactly_one) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_state(2 + trial % 8, rng);
    EXPECT_EQ(omega_q(a, a), 1.0);
  }
}

TEST(OmegaQ, symmetric_bounded_phase_invariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 7;
    const auto a = random_state(dim, rng);
    const auto b = random_state(dim, rng);
    const double w = omega_q(a, b);
    EXPECT_EQ(w, omega_q(b, a));
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
    EXPECT_NEAR(w, oracle::overlap_omega(a, b), 1e-12);
    const PureState rotated(std::polar(1.0, phase(rng)) * b.amplitudes());
    EXPECT_NEAR(omega_q(a, rotated), w, 1e-12);
  }
}

TEST(Pairs, enumeration_order) {
  const auto pairs = enumerate_pairs(4);
  ASSERT_EQ(pairs.size(), 6u);
  EXPECT_EQ(pairs.front(), (PairIndex{1, 2}));
  EXPECT_EQ(pairs[3], (PairIndex{2, 3}));
  EXPECT_EQ(pairs.back(), (PairIndex{3, 4}));
  for (std::size_t k = 0; k < pairs.size(); ++k) EXPECT_EQ(pair_position(pairs[k], 4), k);
}

TEST(StateEnsemble, validates_members) {
  const auto e0 = PureState::basis(3, 0);
  const auto e1 = PureState::basis(3, 1);
  EXPECT_THROW(StateEnsemble(e0, {e1}), InvalidInput);
  EXPECT_THROW(StateEnsemble(e0, {e1, PureState::basis(4, 1)}), InvalidInput);
  StateEnsemble e(e0, {e1, PureState::basis(3, 2)});
  EXPECT_EQ(e.n(), 2);
  EXPECT_EQ(e.dim(), 3);
  EXPECT_EQ(&e.state(0), &e.psi0());
  EXPECT_TRUE(e.is_real());
}
