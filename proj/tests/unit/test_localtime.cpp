#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <vector>

#include "kcomb/error.hpp"
#include "kcomb/localtime.hpp"
#include "kcomb/stats.hpp"

using namespace kcomb;

namespace {

std::vector<std::int64_t> random_path(std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> p{0};
  for (std::int64_t i = 0; i < n; ++i) p.push_back(p.back() + ((rng.next() >> 63) ? 1 : -1));
  return p;
}

// Plain map-based recount, sup over every site with a visited neighbor.
std::int64_t brute_uniformity(const std::vector<std::int64_t>& path) {
  std::map<std::int64_t, std::int64_t> c;
  for (std::size_t i = 1; i < path.size(); ++i) ++c[path[i]];
  std::int64_t best = 0;
  for (const auto& [x, v] : c) {
    const auto get = [&](std::int64_t y) { return c.contains(y) ? c.at(y) : 0; };
    best = std::max({best, std::abs(get(x + 1) - v), std::abs(v - get(x - 1))});
  }
  return best;
}

}  // namespace

TEST(Table, SmallPath) {
  const std::int64_t p[] = {0, 1, 0, 1};
  const auto t = local_time_table(p);
  EXPECT_EQ(t.n_steps(), 3);
  EXPECT_EQ(t.count(1), 2);
  EXPECT_EQ(t.count(0), 1);
  EXPECT_EQ(t.count(-1), 0);
  EXPECT_EQ(t.total(), 3);
}

TEST(Table, ZeroSteps) {
  const std::int64_t p[] = {0};
  const auto t = local_time_table(p);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.total(), 0);
  EXPECT_EQ(adjacent_uniformity_stat(t), 0);
  EXPECT_THROW(max_local_time(t), EmptyTable);
}

TEST(Table, InvalidPaths) {
  const std::int64_t jump[] = {0, 1, 3};
  EXPECT_THROW(local_time_table(jump), InvalidPath);
  const std::int64_t stay[] = {0, 0};
  EXPECT_THROW(local_time_table(stay), InvalidPath);
  const std::int64_t offset[] = {1, 2};
  EXPECT_THROW(local_time_table(offset), InvalidPath);
}

TEST(Table, Conservation) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = random_path(10000, s);
    const auto t = local_time_table(p);
    EXPECT_EQ(t.total(), 10000);
    EXPECT_EQ(t.n_steps(), 10000);
  }
  EXPECT_TRUE(conservation_holds(1000, 1000, 4));
}

TEST(Table, IncrementalMatchesBatch) {
  const auto p = random_path(5000, 7);
  LocalTimeTable inc;
  for (std::size_t i = 1; i < p.size(); ++i) inc.push(p[i]);
  EXPECT_EQ(inc, local_time_table(p));
}

TEST(Table, DenseWalkMatchesPush) {
  // Same bit convention as random_walk_local_time: LSB first, 1 means +1.
  for (std::int64_t n : {0, 1, 63, 64, 65, 5000, 200000}) {
    Rng a(SeedSpec{3, 1}, substream::kVertical);
    Rng b = a;
    LocalTimeTable ref;
    std::int64_t x = 0;
    std::uint64_t w = 0;
    int left = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (left == 0) {
        w = a.next();
        left = 64;
      }
      x += (w & 1U) ? 1 : -1;
      w >>= 1;
      --left;
      ref.push(x);
    }
    EXPECT_EQ(random_walk_local_time(n, b), ref) << n;
  }
}

TEST(MaxLocalTime, Examples) {
  const std::int64_t p[] = {0, 1, 0, 1};
  const auto [x, v] = max_local_time(local_time_table(p));
  EXPECT_EQ(x, 1);
  EXPECT_EQ(v, 2);
  // ties go to the leftmost site
  const std::int64_t q[] = {0, -1, 0, 1, 0, -1};
  const auto [x2, v2] = max_local_time(local_time_table(q));
  EXPECT_EQ(x2, -1);
  EXPECT_EQ(v2, 2);
}

TEST(MaxLocalTime, Additive) {
  auto t = LocalTimeTable::from_dense(-2, {1, 4, 2, 0, 3});
  const auto before = t.count(1);
  for (int i = 0; i < before; ++i) t.push(1);
  EXPECT_EQ(t.count(1), 2 * before);
  EXPECT_EQ(t.total(), 10 + before);
}

TEST(Uniformity, SmallPath) {
  // xi(-1)=0, xi(0)=1, xi(1)=2, xi(2)=0: the pair (1,2) gives the sup.
  const std::int64_t p[] = {0, 1, 0, 1};
  EXPECT_EQ(adjacent_uniformity_stat(local_time_table(p)), 2);
  const std::int64_t q[] = {0, 1, 0, -1, 0};
  EXPECT_EQ(adjacent_uniformity_stat(local_time_table(q)), 1);
}

TEST(Uniformity, MonotonePath) {
  const std::int64_t p[] = {0, 1, 2, 3, 4};
  EXPECT_EQ(adjacent_uniformity_stat(local_time_table(p)), 1);
}

TEST(Uniformity, MatchesBruteForce) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = random_path(1 + static_cast<std::int64_t>(s) * 37, s + 1000);
    const auto stat = adjacent_uniformity_stat(local_time_table(p));
    EXPECT_EQ(stat, brute_uniformity(p));
    EXPECT_GE(stat, 1);
  }
}

TEST(Uniformity, SquareRootScaleDecreases) {
  // sup_x |xi(x+1) - xi(x)| grows like n^{1/4} up to logs, so at exponent 1/2
  // the normalized median must fall across decades.
  const std::int64_t grid[] = {10000, 100000, 1000000};
  const auto med = uniformity_medians(grid, 50, 0.5, 3);
  ASSERT_EQ(med.size(), 3u);
  EXPECT_GT(med[0], med[1]);
  EXPECT_GT(med[1], med[2]);
}

TEST(Kesten, SmallNRejected) {
  EXPECT_THROW(kesten_statistic(random_walk_local_time(10, Rng(1))), InvalidArgument);
}

TEST(Kesten, SanityBand) {
  // Frozen band: across 20 blocks of 50 walks at n = 1e7, the block maximum
  // ranged over [1.32, 1.82] and the median stayed near 0.9.
  const auto s = kesten_sample(10000000, 50, 2024);
  const double mx = *std::max_element(s.begin(), s.end());
  EXPECT_LE(mx, 2.0);
  EXPECT_GT(median(s), 0.6);
  EXPECT_LT(median(s), 1.2);
}
