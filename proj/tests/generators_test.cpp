#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "csync/generators.hpp"

namespace csync {
namespace {

TEST(Rng, MersenneTwisterReferenceOutput) {
  // The C++ standard pins the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ull);
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next();
  EXPECT_EQ(rng.next(), 9981545732273789042ull);
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(1);
  for (std::uint64_t bound : {1ull, 2ull, 3ull, 7ull, 1000ull})
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(bound), bound);
  EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(RandomPfa, OneUndefinedTransitionInLetterB) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenConfig cfg;
    cfg.n = 2 + seed % 15;
    cfg.seed = seed;
    const auto g = random_pfa_with_anchors(cfg);
    EXPECT_EQ(g.pfa.undefined_count(), 1u);
    EXPECT_FALSE(g.pfa.defined(g.anchor_b, 2));
    for (State q = 1; q <= cfg.n; ++q) {
      ASSERT_TRUE(g.pfa.defined(q, 1));
      EXPECT_NE(g.pfa.next(q, 1), g.anchor_a);
    }
  }
}

TEST(RandomPfa, SeveralUndefinedTransitions) {
  for (std::size_t k = 1; k <= 6; ++k) {
    GenConfig cfg;
    cfg.n = 6;
    cfg.undefined = k;
    cfg.seed = 100 + k;
    cfg.anchor_b = 4;
    const auto g = random_pfa_with_anchors(cfg);
    EXPECT_EQ(g.pfa.undefined_count(), k);
    EXPECT_FALSE(g.pfa.defined(4, 2));
    EXPECT_EQ(g.pfa.total_letters(), (std::vector<Letter>{1}));
  }
}

TEST(RandomPfa, FixedAnchors) {
  GenConfig cfg;
  cfg.n = 8;
  cfg.anchor_a = 3;
  cfg.anchor_b = 3;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    const Pfa pfa = random_pfa(cfg);
    EXPECT_FALSE(pfa.defined(3, 2));
    for (State q = 1; q <= 8; ++q) EXPECT_NE(pfa.next(q, 1), 3u);
  }
}

TEST(RandomPfa, Deterministic) {
  GenConfig cfg;
  cfg.n = 10;
  cfg.seed = 1234;
  EXPECT_EQ(random_pfa(cfg), random_pfa(cfg));
  GenConfig other = cfg;
  other.seed = 1235;
  EXPECT_NE(random_pfa(cfg), random_pfa(other));
}

TEST(RandomPfa, InvalidConfig) {
  GenConfig cfg;
  cfg.n = 1;
  EXPECT_THROW(random_pfa(cfg), std::invalid_argument);
  cfg.n = 4;
  cfg.undefined = 5;
  EXPECT_THROW(random_pfa(cfg), std::invalid_argument);
  cfg.undefined = 0;
  EXPECT_THROW(random_pfa(cfg), std::invalid_argument);
  cfg.undefined = 1;
  cfg.anchor_a = 9;
  EXPECT_THROW(random_pfa(cfg), std::invalid_argument);
}

// 10,000 samples at n = 10: anchor frequencies within three standard errors of
// 1/n, and letter a uniform over Q∖{q_a} by a chi-square test at 0.01.
TEST(RandomPfa, Distribution) {
  constexpr std::size_t n = 10, samples = 10000;
  std::array<double, n + 1> anchor_hits{};
  std::array<double, n - 1> rank_hits{};  // q·a ranked within Q∖{q_a}
  for (std::uint64_t seed = 0; seed < samples; ++seed) {
    GenConfig cfg;
    cfg.n = n;
    cfg.seed = 1'000'000 + seed;
    const auto g = random_pfa_with_anchors(cfg);
    anchor_hits[g.anchor_a] += 1;
    for (State q = 1; q <= n; ++q) {
      const State t = g.pfa.next(q, 1);
      rank_hits[t < g.anchor_a ? t - 1 : t - 2] += 1;
    }
  }
  const double p = 1.0 / n, se = std::sqrt(samples * p * (1 - p));
  for (State q = 1; q <= n; ++q) EXPECT_NEAR(anchor_hits[q], samples * p, 3 * se) << "state " << q;

  const double expected = static_cast<double>(samples * n) / (n - 1);
  double chi2 = 0.0;
  for (double h : rank_hits) chi2 += (h - expected) * (h - expected) / expected;
  EXPECT_LT(chi2, 20.090);  // chi-square, 8 degrees of freedom, upper 1% point
}

TEST(Pn, FourStates) {
  const Pfa p = pn(4);
  const std::vector<State> a{2, 3, 3, 4}, b{kUndefined, 3, 4, 1};
  for (State q = 1; q <= 4; ++q) {
    EXPECT_EQ(p.next(q, 1), a[q - 1]);
    EXPECT_EQ(p.next(q, 2), b[q - 1]);
  }
}

TEST(Pn, ThreeStates) { EXPECT_EQ(pn(3), parse_pfa("3 2\n2 0\n3 3\n3 1\n")); }

TEST(Pn, SingleUndefinedTransition) {
  for (std::size_t n = 3; n <= 20; ++n) EXPECT_EQ(pn(n).undefined_count(), 1u);
  EXPECT_THROW(pn(2), std::invalid_argument);
}

}  // namespace
}  // namespace csync
