#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "kcomb/error.hpp"
#include "kcomb/lattice.hpp"
#include "kcomb/limit_stats.hpp"
#include "kcomb/stats.hpp"

using namespace kcomb;

namespace {

KCombConfig comb() { return KCombConfig::from_lines({{0, 0.25}}); }

// Enumerates every path of length n move by move, multiplying transition
// probabilities. Independent of the DP in exact_distribution.
void enumerate(const KCombConfig& cfg, Position pos, double w, int left,
               std::map<Position, double>& out) {
  if (w == 0.0) return;
  if (left == 0) {
    out[pos] += w;
    return;
  }
  double pv = 0.5, ph = 0.0;
  for (const auto& l : cfg.lines()) {
    if (l.m == pos.y) {
      pv = l.p;
      ph = 0.5 - l.p;
    }
  }
  enumerate(cfg, {pos.x, pos.y + 1}, w * pv, left - 1, out);
  enumerate(cfg, {pos.x, pos.y - 1}, w * pv, left - 1, out);
  enumerate(cfg, {pos.x + 1, pos.y}, w * ph, left - 1, out);
  enumerate(cfg, {pos.x - 1, pos.y}, w * ph, left - 1, out);
}

}  // namespace

TEST(Config, ClassicalComb) {
  const std::pair<std::int64_t, double> raw[] = {{0, 0.25}};
  const auto cfg = validate_config(raw);
  ASSERT_EQ(cfg.k(), 1u);
  EXPECT_DOUBLE_EQ(cfg.lines()[0].alpha(), 0.5);
}

TEST(Config, SortsLines) {
  const std::pair<std::int64_t, double> raw[] = {{5, 0.4}, {-2, 0.1}};
  const auto cfg = validate_config(raw);
  ASSERT_EQ(cfg.k(), 2u);
  EXPECT_EQ(cfg.lines()[0].m, -2);
  EXPECT_EQ(cfg.lines()[1].m, 5);
  EXPECT_DOUBLE_EQ(cfg.lines()[0].alpha(), 0.2);
  EXPECT_DOUBLE_EQ(cfg.lines()[1].alpha(), 0.8);
}

TEST(Config, Errors) {
  const std::pair<std::int64_t, double> dup[] = {{3, 0.25}, {3, 0.1}};
  EXPECT_THROW(validate_config(dup), DuplicateLevel);
  EXPECT_THROW(KCombConfig::from_lines({}), EmptyConfig);
  EXPECT_THROW(KCombConfig::from_lines({{0, 0.5}}), InvalidProbability);
  EXPECT_THROW(KCombConfig::from_lines({{0, 0.0}}), InvalidProbability);
  EXPECT_THROW(KCombConfig::from_lines({{0, -0.1}}), InvalidProbability);
  EXPECT_THROW(KCombConfig::from_lines({{0, std::nan("")}}), InvalidProbability);
}

TEST(Config, LevelLookup) {
  const auto cfg = KCombConfig::from_lines({{-1, 0.25}, {0, 0.3}, {3, 0.45}});
  EXPECT_EQ(cfg.level_index(-1), 0u);
  EXPECT_EQ(cfg.level_index(3), 2u);
  EXPECT_FALSE(cfg.level_index(1));
  EXPECT_FALSE(cfg.level_index(-7));
  EXPECT_EQ(cfg.distance_to_nearest(1), 1);
  EXPECT_EQ(cfg.distance_to_nearest(2), 1);
  EXPECT_EQ(cfg.distance_to_nearest(10), 7);
  EXPECT_EQ(cfg.distance_to_nearest(-5), 4);
  EXPECT_EQ(cfg.distance_to_nearest(0), 0);
}

TEST(StepDirect, Examples) {
  EXPECT_EQ(step_direct({3, 5}, comb(), 0.7), (Position{3, 4}));
  EXPECT_EQ(step_direct({0, 0}, comb(), 0.6), (Position{1, 0}));
  EXPECT_EQ(step_direct({0, 0}, comb(), 0.0), (Position{0, 1}));
  EXPECT_EQ(step_direct({0, 0}, comb(), 0.3), (Position{0, -1}));
  EXPECT_EQ(step_direct({0, 0}, comb(), 0.8), (Position{-1, 0}));
  EXPECT_EQ(step_direct({0, 2}, comb(), 0.2), (Position{0, 3}));
}

TEST(StepDirect, OffLineNeverMovesHorizontally) {
  const auto cfg = KCombConfig::from_lines({{-2, 0.1}, {5, 0.4}});
  for (double u = 0.0; u < 1.0; u += 0.01) {
    const Position p = step_direct({4, 1}, cfg, u);
    EXPECT_EQ(p.x, 4);
  }
}

TEST(SimulateDirect, ZeroSteps) {
  const auto t = simulate_direct(comb(), 0, {1, 0}, RecordMode::full());
  ASSERT_EQ(t.positions.size(), 1u);
  EXPECT_EQ(t.positions[0], (Position{0, 0}));
}

TEST(SimulateDirect, OneStep) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = simulate_direct(comb(), 1, {s, 0}, RecordMode::endpoint()).endpoint();
    EXPECT_EQ(std::abs(p.x) + std::abs(p.y), 1);
  }
}

TEST(SimulateDirect, Deterministic) {
  const auto cfg = KCombConfig::from_lines({{-2, 0.1}, {5, 0.4}});
  const auto a = simulate_direct(cfg, 500, {42, 3}, RecordMode::full());
  const auto b = simulate_direct(cfg, 500, {42, 3}, RecordMode::full());
  EXPECT_EQ(a.positions, b.positions);
  const auto c = simulate_direct(cfg, 500, {42, 4}, RecordMode::full());
  EXPECT_NE(a.positions, c.positions);
  EXPECT_EQ(simulate_direct_endpoint(cfg, 500, {42, 3}), a.endpoint());
}

TEST(SimulateDirect, FullModeInvariants) {
  const auto cfg = KCombConfig::from_lines({{0, 0.25}, {3, 0.1}});
  for (std::uint64_t path = 0; path < 1000; ++path) {
    const auto t = simulate_direct(cfg, 1000, {9, path}, RecordMode::full());
    ASSERT_EQ(t.positions.size(), 1001u);
    ASSERT_EQ(t.positions[0], (Position{0, 0}));
    for (std::size_t i = 1; i < t.positions.size(); ++i) {
      const auto& a = t.positions[i - 1];
      const auto& b = t.positions[i];
      ASSERT_EQ(std::abs(b.x - a.x) + std::abs(b.y - a.y), 1);
      ASSERT_TRUE(b.x == a.x || cfg.contains_level(a.y));
      ASSERT_EQ(t.steps[i], static_cast<std::int64_t>(i));
    }
  }
}

TEST(SimulateDirect, Checkpoints) {
  const auto cfg = comb();
  const auto full = simulate_direct(cfg, 200, {5, 5}, RecordMode::full());
  const auto cp = simulate_direct(cfg, 200, {5, 5}, RecordMode::at({150, 10, 0, 10, 200}));
  ASSERT_EQ(cp.steps, (std::vector<std::int64_t>{0, 10, 150, 200}));
  for (std::size_t k = 0; k < cp.steps.size(); ++k) {
    EXPECT_EQ(cp.positions[k], full.positions[static_cast<std::size_t>(cp.steps[k])]);
    std::int64_t m = 0;
    for (std::int64_t i = 0; i <= cp.steps[k]; ++i) {
      m = std::max(m, std::abs(full.positions[static_cast<std::size_t>(i)].y));
    }
    EXPECT_EQ(cp.running_max_abs_y[k], m);
  }
}

TEST(Exact, OneStep) {
  const auto t = exact_distribution(comb(), 1);
  EXPECT_EQ(t.entries.size(), 4u);
  for (Position p : {Position{0, 1}, Position{0, -1}, Position{1, 0}, Position{-1, 0}}) {
    EXPECT_DOUBLE_EQ(t.probability(p), 0.25);
  }
}

TEST(Exact, ZeroSteps) {
  const auto t = exact_distribution(KCombConfig::from_lines({{4, 0.1}}), 0);
  EXPECT_EQ(t.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(t.probability({0, 0}), 1.0);
}

TEST(Exact, TwoStepsMatchesEnumeration) {
  const auto t = exact_distribution(comb(), 2);
  // 1/4 * 1/4 via (+-1,0) twice and 1/4 * 1/2 via (0,+-1) twice.
  EXPECT_DOUBLE_EQ(t.probability({0, 0}), 0.375);
  double off_origin = 0.0;
  for (const auto& [p, pr] : t.entries) {
    if (p == Position{0, 0}) continue;
    EXPECT_EQ(std::abs(p.x) + std::abs(p.y), 2);
    off_origin += pr;
  }
  EXPECT_NEAR(off_origin, 0.625, 1e-15);
}

TEST(Exact, MatchesEnumerationUpToEight) {
  const std::vector<KCombConfig> cfgs = {
      comb(), KCombConfig::from_lines({{-2, 0.1}, {5, 0.4}}),
      KCombConfig::from_lines({{-1, 0.25}, {0, 0.3}, {3, 0.45}})};
  for (const auto& cfg : cfgs) {
    for (int n = 0; n <= 8; ++n) {
      std::map<Position, double> ref;
      enumerate(cfg, {0, 0}, 1.0, n, ref);
      const auto t = exact_distribution(cfg, n);
      for (const auto& [p, pr] : ref) EXPECT_NEAR(t.probability(p), pr, 1e-14);
      for (const auto& [p, pr] : t.entries) EXPECT_TRUE(ref.contains(p));
    }
  }
}

TEST(Exact, MassParityAndLimit) {
  const auto cfg = KCombConfig::from_lines({{-1, 0.25}, {0, 0.3}, {3, 0.45}});
  for (std::int64_t n : {1, 5, 17, 40, 64}) {
    const auto t = exact_distribution(cfg, n);
    EXPECT_NEAR(t.total_mass(), 1.0, 1e-12) << n;
    for (const auto& [p, pr] : t.entries) {
      EXPECT_EQ((std::abs(p.x) + std::abs(p.y)) % 2, n % 2);
      EXPECT_LE(std::abs(p.x) + std::abs(p.y), n);
    }
  }
  EXPECT_THROW(exact_distribution(cfg, 65), TooLargeForExact);
}

TEST(Exact, DirectSamplerChiSquare) {
  const auto cfg = KCombConfig::from_lines({{-2, 0.1}, {5, 0.4}});
  const std::int64_t n = 12;
  const std::int64_t m = 100000;
  std::vector<Position> ends;
  ends.reserve(m);
  for (std::int64_t i = 0; i < m; ++i) {
    ends.push_back(simulate_direct_endpoint(cfg, n, {11, static_cast<std::uint64_t>(i)}));
  }
  const auto r = chi_square_endpoint(count_endpoints(ends), exact_distribution(cfg, n));
  EXPECT_LT(r.statistic, chi_square_quantile(r.dof, 0.999));
}
