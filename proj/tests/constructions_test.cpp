#include "kappa/constructions.hpp"

#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "kappa/compatibility.hpp"
#include "kappa/errors.hpp"

using namespace kappa;

TEST(Packing, orthogonal_when_lines_fit) {
  const auto r = grassmannian_packing(2, 2, 1);
  EXPECT_EQ(r.achieved_max_overlap_sq, 0.0);
  EXPECT_DOUBLE_EQ(r.target_overlap_sq, 0.5);
  EXPECT_TRUE(r.met_target);
  const auto r4 = grassmannian_packing(4, 3, 1);
  EXPECT_EQ(r4.achieved_max_overlap_sq, 0.0);
}

TEST(Packing, meets_target_above_welch) {
  const auto r = grassmannian_packing(4, 32, 1);
  const double welch = (32.0 - 4.0) / (4.0 * 31.0);
  EXPECT_NEAR(welch, 0.2258, 1e-4);
  EXPECT_TRUE(r.met_target);
  EXPECT_LE(r.achieved_max_overlap_sq, 1.0 - std::pow(32.0, -1.0 / 3.0));
  EXPECT_GE(r.achieved_max_overlap_sq, welch - 1e-12);
  EXPECT_NEAR(r.achieved_max_overlap_sq, max_pairwise_overlap_sq(r.lines), 1e-12);
  for (const auto& v : r.lines) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(Packing, deterministic_across_thread_counts) {
  PackingOptions one;
  one.threads = 1;
  one.restarts = 6;
  PackingOptions three = one;
  three.threads = 3;
  const auto a = grassmannian_packing(3, 9, 42, one);
  const auto b = grassmannian_packing(3, 9, 42, three);
  EXPECT_EQ(a.achieved_max_overlap_sq, b.achieved_max_overlap_sq);
  for (std::size_t k = 0; k < a.lines.size(); ++k) EXPECT_EQ(a.lines[k], b.lines[k]);
}

TEST(Packing, real_only_stays_real) {
  PackingOptions opts;
  opts.real_only = true;
  opts.restarts = 4;
  const auto r = grassmannian_packing(3, 6, 1, opts);
  for (const auto& v : r.lines) EXPECT_EQ(v.imag().norm(), 0.0);
}

TEST(PackingStates, overlap_with_psi0_is_chi) {
  for (int d : {3, 4, 5}) {
    for (int n : {2, 4, 8, 16}) {
      PackingOptions opts;
      opts.restarts = 8;
      const auto ps = packing_states(d, n, 1, opts);
      const double chi = 0.25 * std::pow(n, -1.0 / (d - 2));
      EXPECT_NEAR(ps.chi, chi, 1e-15);
      for (const auto& s : ps.ensemble.satellites()) {
        EXPECT_NEAR(std::norm(inner_product(ps.ensemble.psi0(), s)), chi, 1e-12);
        EXPECT_GT(omega_q(ps.ensemble.psi0(), s), chi / 2.0);
      }
      if (!ps.packing.met_target) continue;
      for (const auto& p : enumerate_pairs(n)) {
        const auto t = triple_overlaps(ps.ensemble.psi0(), ps.ensemble.state(p.j1), ps.ensemble.state(p.j2));
        EXPECT_LE(t.x3, (1.0 - 2.0 * chi) * (1.0 - 2.0 * chi) + 1e-10);
      }
    }
  }
}

TEST(PackingStates, two_satellites_in_dimension_three) {
  const auto ps = packing_states(3, 2, 1);
  EXPECT_DOUBLE_EQ(ps.chi, 0.125);
  const auto t = triple_overlaps(ps.ensemble.psi0(), ps.ensemble.state(1), ps.ensemble.state(2));
  EXPECT_NEAR(t.x3, ps.chi * ps.chi, 1e-12);
}

TEST(Mub, bases_are_orthonormal_and_unbiased) {
  for (int d : {2, 3, 4, 5, 7}) {
    const auto bases = mutually_unbiased_bases(d);
    ASSERT_EQ(bases.size(), static_cast<std::size_t>(d + 1));
    EXPECT_TRUE(bases[0].isIdentity(0.0));
    for (std::size_t i = 0; i < bases.size(); ++i) {
      EXPECT_LE((bases[i].adjoint() * bases[i] - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
      for (std::size_t j = i + 1; j < bases.size(); ++j) {
        const Matrix overlaps = (bases[i].adjoint() * bases[j]).cwiseAbs2();
        EXPECT_LE((overlaps.array() - 1.0 / d).abs().maxCoeff(), 1e-12) << "d=" << d << " " << i << "," << j;
      }
    }
  }
}

TEST(Mub, states) {
  const auto e3 = mub_states(3);
  EXPECT_EQ(e3.n(), 9);
  for (const auto& s : e3.satellites()) EXPECT_NEAR(omega_q(e3.psi0(), s), 1.0 - std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_EQ(mub_states(4).n(), 16);
  EXPECT_THROW(mub_states(6), InvalidInput);
  EXPECT_THROW(mub_states(1), InvalidInput);
}

TEST(Hadamard, sign_patterns) {
  const auto e = hadamard_states(3);
  ASSERT_EQ(e.n(), 4);
  const double r = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(e.state(1)[2].real(), r, 1e-15);
  EXPECT_NEAR(e.state(2)[1].real(), -r, 1e-15);
  EXPECT_NEAR(e.state(2)[2].real(), r, 1e-15);
  EXPECT_NEAR(e.state(3)[2].real(), -r, 1e-15);
  EXPECT_NEAR(e.state(4)[1].real(), -r, 1e-15);
  const auto e4 = hadamard_states(4);
  EXPECT_EQ(e4.n(), 8);
  for (const auto& p : enumerate_pairs(8)) {
    const double x = std::norm(inner_product(e4.state(p.j1), e4.state(p.j2)));
    EXPECT_TRUE(std::abs(x) < 1e-15 || std::abs(x - 0.25) < 1e-15) << x;
  }
  EXPECT_THROW(hadamard_states(2), InvalidInput);
  EXPECT_THROW(hadamard_states(kMaxHadamardDimension + 1), InvalidInput);
}

TEST(Fixture, ids_round_trip) {
  for (FixtureId id : kAllFixtures) EXPECT_EQ(parse_fixture_id(to_string(id)), id);
  EXPECT_FALSE(parse_fixture_id("d5n5").has_value());
}

TEST(Fixture, d3n4_shares_overlap) {
  const auto f = reference_fixture(FixtureId::d3n4);
  const auto& e = f.scenario.ensemble();
  EXPECT_TRUE(certify_ensemble(e).overlaps_equal);
  EXPECT_TRUE(e.is_real());
}

TEST(Fixture, d4n4_bases) {
  const auto f = reference_fixture(FixtureId::d4n4);
  const auto& e = f.scenario.ensemble();
  for (const auto& m : f.scenario.measurements()) {
    EXPECT_LE(m.basis.gram_deviation(), 1e-12);
    EXPECT_EQ(m.basis.labels(), (std::vector<int>{0, 1, 2, 0}));
    const PureState last(m.basis.vectors().col(3));
    for (int j : {0, m.pair.j1, m.pair.j2}) EXPECT_LE(std::abs(inner_product(last, e.state(j))), 1e-9);
  }
}

TEST(Fixture, closed_forms_at_printed_angles) {
  const auto f = reference_fixture(FixtureId::d3n3);
  ASSERT_TRUE(f.angles.count("theta1"));
  const double t1 = f.angles.at("theta1");
  EXPECT_EQ(t1, 1.1945);
  const auto& s1 = f.scenario.ensemble().state(1);
  EXPECT_EQ(s1[0].real(), std::cos(t1));
}
