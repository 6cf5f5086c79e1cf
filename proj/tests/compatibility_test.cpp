#include "kappa/compatibility.hpp"

#include <random>

#include <gtest/gtest.h>

#include "kappa/constructions.hpp"

using namespace kappa;

TEST(TripleOverlaps, orthogonal_and_repeated_states) {
  const auto e0 = PureState::basis(3, 0);
  const auto t = triple_overlaps(e0, PureState::basis(3, 1), PureState::basis(3, 2));
  EXPECT_EQ(t.x1, 0.0);
  EXPECT_EQ(t.x2, 0.0);
  EXPECT_EQ(t.x3, 0.0);
  EXPECT_EQ(triple_overlaps(e0, e0, PureState::basis(3, 1)).x1, 1.0);
}

TEST(Criterion, reference_points) {
  EXPECT_TRUE(is_pp_incompatible({0.0, 0.0, 0.0}));
  EXPECT_TRUE(is_pp_incompatible({0.25, 0.25, 0.25}));
  EXPECT_FALSE(is_pp_incompatible({0.9, 0.9, 0.9}));
  EXPECT_FALSE(is_pp_incompatible({0.5, 0.5, 0.0}));
  EXPECT_FALSE(is_pp_incompatible({0.3, 0.3, 0.3}));
}

TEST(Criterion, square_boundary_counts_as_compatible_side) {
  // (1 - 3/4)^2 = 4 (1/4)^3 exactly.
  const TripleOverlaps t{0.25, 0.25, 0.25};
  EXPECT_EQ(criterion_margins(t).square_margin, 0.0);
  EXPECT_TRUE(criterion_margins(t).near_boundary());
  EXPECT_TRUE(is_pp_incompatible({0.25, 0.25, 0.25 + 1e-12}));
  EXPECT_FALSE(is_pp_incompatible({0.25, 0.25, 0.26}));
}

TEST(Criterion, sum_boundary_is_strict) {
  EXPECT_FALSE(is_pp_incompatible({0.5, 0.5, 0.0}));
  EXPECT_FALSE(is_pp_incompatible({0.5, 0.5 - 1e-12, 0.0}));
  EXPECT_TRUE(is_pp_incompatible({0.0, 0.5, 0.0}));
}

TEST(Criterion, lowering_overlaps_keeps_verdict) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  int checked = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const TripleOverlaps t{u(rng), u(rng), u(rng)};
    if (!is_pp_incompatible(t) || criterion_margins(t).square_margin <= 0.0) continue;
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    const TripleOverlaps lower{t.x1 * frac(rng), t.x2 * frac(rng), t.x3 * frac(rng)};
    EXPECT_TRUE(is_pp_incompatible(lower));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Certify, repeated_psi0_fails) {
  const auto e0 = PureState::basis(3, 0);
  StateEnsemble e(e0, {e0, PureState::basis(3, 1), PureState::basis(3, 2)});
  const auto report = certify_ensemble(e);
  EXPECT_EQ(report.triples_total, 3);
  EXPECT_FALSE(report.all_pp_incompatible());
  EXPECT_EQ(report.failing_triples, (std::vector<PairIndex>{{1, 2}, {1, 3}}));
  EXPECT_FALSE(report.overlaps_equal);
}

TEST(Certify, mub_dimension_four) {
  const auto report = certify_ensemble(mub_states(4));
  EXPECT_EQ(report.triples_total, 120);
  EXPECT_TRUE(report.all_pp_incompatible());
  EXPECT_TRUE(report.overlaps_equal);
  EXPECT_FALSE(report.near_boundary_triples.empty());
}

TEST(Certify, packing_output) {
  const auto ps = packing_states(4, 16, 1);
  const auto report = certify_ensemble(ps.ensemble);
  EXPECT_EQ(report.triples_total, 120);
  EXPECT_TRUE(report.all_pp_incompatible());
  EXPECT_TRUE(report.overlaps_equal);
}

TEST(Certify, packing_grid_property) {
  for (int d : {3, 4, 5}) {
    for (int n : {2, 3, 5, 8}) {
      PackingOptions opts;
      opts.restarts = 8;
      const auto ps = packing_states(d, n, 2, opts);
      if (!ps.packing.met_target) continue;
      EXPECT_TRUE(certify_ensemble(ps.ensemble).all_pp_incompatible()) << "d=" << d << " n=" << n;
    }
  }
}
