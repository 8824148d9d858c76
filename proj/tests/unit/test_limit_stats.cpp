#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kcomb/coupling.hpp"
#include "kcomb/error.hpp"
#include "kcomb/limit_stats.hpp"
#include "kcomb/localtime.hpp"

using namespace kcomb;

namespace {

KCombConfig comb() { return KCombConfig::from_lines({{0, 0.25}}); }

// E|Z| for a standard normal by the trapezoid rule on [-12, 12].
double abs_normal_mean_quadrature() {
  const int steps = 200000;
  const double h = 24.0 / steps;
  double s = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double z = -12.0 + h * i;
    const double f = std::abs(z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    s += (i == 0 || i == steps) ? 0.5 * f : f;
  }
  return s * h;
}

}  // namespace

TEST(LimitOracle, VarianceMatchesQuadrature) {
  const double target = abs_normal_mean_quadrature();
  EXPECT_NEAR(target, std::sqrt(2.0 / std::numbers::pi), 1e-9);
  const auto s = sample_limit_c1(1.0, 100000, 9);
  EXPECT_NEAR(variance(s), target, 0.02);
  EXPECT_NEAR(mean(s), 0.0, 0.01);
}

TEST(LimitOracle, ScaleEquivariance) {
  const auto a = sample_limit_c1(1.0, 1000, 4);
  const auto b = sample_limit_c1(4.0, 1000, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 2.0 * a[i], 1e-12);
}

TEST(LimitOracle, SignSymmetry) {
  const std::int64_t n = 100000;
  const auto s = sample_limit_c1(2.5, n, 17);
  const auto pos = std::count_if(s.begin(), s.end(), [](double v) { return v > 0.0; });
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(static_cast<double>(pos) / n, 0.5, 3.0 * sigma);
}

TEST(LimitOracle, InvalidScale) {
  EXPECT_THROW(sample_limit_c1(0.0, 10, 1), InvalidScale);
  EXPECT_THROW(sample_limit_c1(-1.0, 10, 1), InvalidScale);
}

TEST(LimitOracle, LocalTimeAtZeroIsHalfNormal) {
  // xi(0, n) / sqrt(n) of a simple walk against |Z|.
  const std::int64_t n = 100000;
  const std::int64_t paths = 4000;
  std::vector<double> lt;
  for (std::int64_t r = 0; r < paths; ++r) {
    const auto t = random_walk_local_time(
        n, Rng(SeedSpec{55, static_cast<std::uint64_t>(r)}, substream::kVertical));
    lt.push_back(static_cast<double>(t.count(0)) / std::sqrt(static_cast<double>(n)));
  }
  auto z = sample_standard_normal(100000, 56);
  for (double& v : z) v = std::abs(v);
  EXPECT_LT(ks_two_sample(lt, z), ks_critical_value(lt.size(), z.size(), 0.001));
}

TEST(ChiSquare, ExactProportionalIsZero) {
  const auto exact = exact_distribution(comb(), 4);
  EndpointCounts c;
  const std::int64_t m = 256 * 16;  // 4^4 divides every probability's denominator
  for (const auto& [p, pr] : exact.entries) c.counts[p] = std::llround(pr * m);
  c.total = m;
  const auto r = chi_square_endpoint(c, exact);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_EQ(r.dof, r.bins - 1);
}

TEST(ChiSquare, DetectsSwappedProbabilities) {
  const std::int64_t n = 12;
  const std::int64_t m = 100000;
  const auto truth = KCombConfig::from_lines({{0, 0.1}});
  const auto wrong = KCombConfig::from_lines({{0, 0.4}});
  std::vector<Position> ends;
  for (std::int64_t i = 0; i < m; ++i) {
    ends.push_back(simulate_direct_endpoint(wrong, n, {3, static_cast<std::uint64_t>(i)}));
  }
  const auto r = chi_square_endpoint(count_endpoints(ends), exact_distribution(truth, n));
  EXPECT_GT(r.statistic, chi_square_quantile(r.dof, 0.999));
}

TEST(ChiSquare, Errors) {
  const auto exact = exact_distribution(comb(), 2);
  EndpointCounts bad;
  bad.counts[{0, 0}] = 3;
  bad.total = 4;
  EXPECT_THROW(chi_square_endpoint(bad, exact), ShapeMismatch);
  EndpointCounts impossible;
  impossible.counts[{1, 0}] = 1;  // wrong parity for N = 2
  impossible.total = 1;
  EXPECT_TRUE(std::isinf(chi_square_endpoint(impossible, exact).statistic));
}

TEST(ChiSquare, PoolsSmallBins) {
  const auto exact = exact_distribution(comb(), 12);
  const std::int64_t m = 1000;
  std::vector<Position> ends;
  for (std::int64_t i = 0; i < m; ++i) {
    ends.push_back(simulate_direct_endpoint(comb(), 12, {4, static_cast<std::uint64_t>(i)}));
  }
  const auto r = chi_square_endpoint(count_endpoints(ends), exact);
  EXPECT_LT(static_cast<std::size_t>(r.bins), exact.entries.size());
  EXPECT_GE(r.bins, 2);
}

TEST(Ensemble, ScaledSamples) {
  const auto e = run_ensemble(comb(), 10000, 200, 6);
  ASSERT_EQ(e.endpoints.size(), 200u);
  const auto xs = e.scaled_x_samples();
  const auto ys = e.scaled_y_samples();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_DOUBLE_EQ(xs[i], static_cast<double>(e.endpoints[i].x) / 10.0);
    EXPECT_DOUBLE_EQ(ys[i], static_cast<double>(e.endpoints[i].y) / 100.0);
  }
  EXPECT_EQ(run_ensemble(comb(), 10000, 200, 6, Sampler::coupled, 1).endpoints,
            run_ensemble(comb(), 10000, 200, 6, Sampler::coupled, 4).endpoints);
}

TEST(Ensemble, SamplersAgreeInDistribution) {
  const auto cfg = KCombConfig::from_lines({{-1, 0.2}, {2, 0.35}});
  const auto d = run_ensemble(cfg, 2000, 4000, 12, Sampler::direct);
  const auto c = run_ensemble(cfg, 2000, 4000, 13, Sampler::coupled);
  EXPECT_LT(ks_two_sample(d.scaled_x_samples(), c.scaled_x_samples()),
            ks_critical_value(4000, 4000, 0.001));
  EXPECT_LT(ks_two_sample(d.scaled_y_samples(), c.scaled_y_samples()),
            ks_critical_value(4000, 4000, 0.001));
}

TEST(Scaling, SmallGrid) {
  const std::int64_t grid[] = {1000, 10000, 100000, 1000000};
  const auto r = scaling_exponents(comb(), grid, 1000, 99);
  EXPECT_NEAR(r.y.fit.slope, 0.5, 0.03);
  EXPECT_NEAR(r.x.fit.slope, 0.25, 0.04);
  const std::int64_t short_grid[] = {1000, 10000, 100000};
  EXPECT_THROW(scaling_exponent(comb(), short_grid, 10, Coordinate::x, 1), InsufficientGrid);
  const std::int64_t narrow[] = {1000, 2000, 4000, 8000};
  EXPECT_THROW(scaling_exponent(comb(), narrow, 10, Coordinate::x, 1), InsufficientGrid);
}

TEST(Marginals, ModerateN) {
  const std::int64_t grid[] = {100000};
  const auto r = marginal_limits(comb(), grid, 3000, 50000, 7);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_DOUBLE_EQ(r.a_k, 1.0);
  EXPECT_LT(r.points[0].ks_y, 0.04);
  EXPECT_LT(r.points[0].ks_x, 0.06);
}

TEST(Lil, Constants) {
  EXPECT_NEAR(lil_target_x(), 1.0434, 1e-4);
  EXPECT_EQ(kLilTargetY, 1.0);
  EXPECT_EQ(kChungTarget, 1.0);
}

TEST(Lil, Checkpoints) {
  const auto c = geometric_checkpoints(1000, 2.0);
  EXPECT_EQ(c.back(), 1000);
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
  EXPECT_EQ(std::adjacent_find(c.begin(), c.end()), c.end());
  EXPECT_THROW(geometric_checkpoints(1000, 1.0), InvalidArgument);
}

TEST(Lil, ReflectionAndSkips) {
  const auto cps = geometric_checkpoints(200000, 1.5);
  const auto [t, d] = simulate_coupled(comb(), 200000, {3, 3}, RecordMode::at(cps));
  Trajectory r = t;
  for (auto& p : r.positions) p = {-p.x, -p.y};
  const auto a = lil_statistics(t, 1.0);
  const auto b = lil_statistics(r, 1.0);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  ASSERT_FALSE(a.rows.empty());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_GE(a.rows[i].n, 16);
    EXPECT_DOUBLE_EQ(a.rows[i].y_stat, -b.rows[i].y_stat);
    EXPECT_DOUBLE_EQ(a.rows[i].x_stat, -b.rows[i].x_stat);
    EXPECT_DOUBLE_EQ(a.rows[i].chung_stat, b.rows[i].chung_stat);
  }
  for (auto n : a.skipped) EXPECT_LT(n, 16);
  EXPECT_EQ(a.rows.size() + a.skipped.size(), t.steps.size());

  const auto full = simulate_coupled(comb(), 100, {3, 3}, RecordMode::full()).first;
  EXPECT_THROW(lil_statistics(full, 1.0), InvalidArgument);
  EXPECT_THROW(lil_statistics(t, 0.0), InvalidScale);
}

TEST(Lil, YStatSanityBand) {
  // Per path: running max of y_stat over checkpoints up to 1e7. Frozen band
  // on the median over 50 paths; across 40 oracle blocks it stayed in
  // [0.69, 0.90].
  const auto cps = geometric_checkpoints(10000000, kDefaultCheckpointRatio);
  std::vector<double> maxima;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto t =
        simulate_coupled(comb(), 10000000, {606, i}, RecordMode::at(cps), {false, false}).first;
    double m = -1e300;
    for (const auto& row : lil_statistics(t, 1.0).rows) m = std::max(m, row.y_stat);
    maxima.push_back(m);
  }
  const double med = median(maxima);
  EXPECT_GE(med, 0.5);
  EXPECT_LE(med, 1.35);
}

TEST(Invariance, Examples) {
  const auto a = KCombConfig::from_lines({{0, 0.25}});
  const auto b = KCombConfig::from_lines({{5, 0.25}});
  const auto r = position_invariance_test(a, b, 100000, 2000, 8);
  EXPECT_TRUE(r.pass) << r.ks << " vs " << r.critical;
  EXPECT_NEAR(r.critical, ks_critical_value(2000, 2000, 0.01), 1e-15);
  EXPECT_TRUE(position_invariance_test(a, a, 10000, 2000, 9).pass);
  EXPECT_THROW(position_invariance_test(a, KCombConfig::from_lines({{0, 0.1}}), 100, 10, 1),
               NotComparable);
}
