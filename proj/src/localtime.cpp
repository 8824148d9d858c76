#include "kcomb/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "kcomb/error.hpp"
#include "kcomb/parallel.hpp"
#include "kcomb/stats.hpp"

namespace kcomb {

void LocalTimeTable::push(std::int64_t x) {
  if (counts_.empty()) {
    lo_ = x;
    counts_.push_back(0);
  } else if (x < lo_) {
    counts_.insert(counts_.begin(), static_cast<std::size_t>(lo_ - x), 0);
    lo_ = x;
  } else if (x > highest()) {
    counts_.resize(static_cast<std::size_t>(x - lo_) + 1, 0);
  }
  ++counts_[static_cast<std::size_t>(x - lo_)];
  ++n_;
}

LocalTimeTable LocalTimeTable::from_dense(std::int64_t lo, std::vector<std::int64_t> counts) {
  LocalTimeTable t;
  t.lo_ = lo;
  t.counts_ = std::move(counts);
  t.n_ = t.total();
  return t;
}

std::int64_t LocalTimeTable::count(std::int64_t x) const noexcept {
  if (counts_.empty() || x < lo_ || x > highest()) return 0;
  return counts_[static_cast<std::size_t>(x - lo_)];
}

std::int64_t LocalTimeTable::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

LocalTimeTable local_time_table(std::span<const std::int64_t> path) {
  if (path.empty() || path.front() != 0) throw InvalidPath("path must start at 0");
  LocalTimeTable table;
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (std::abs(path[k] - path[k - 1]) != 1) {
      throw InvalidPath("non-unit increment at step " + std::to_string(k));
    }
    table.push(path[k]);
  }
  return table;
}

std::pair<std::int64_t, std::int64_t> max_local_time(const LocalTimeTable& table) {
  if (table.n_steps() == 0) throw EmptyTable("maximal local time of a zero-step walk");
  std::int64_t best_x = table.lowest();
  std::int64_t best = table.count(best_x);
  for (std::int64_t x = table.lowest() + 1; x <= table.highest(); ++x) {
    if (table.count(x) > best) {
      best = table.count(x);
      best_x = x;
    }
  }
  return {best_x, best};
}

std::int64_t adjacent_uniformity_stat(const LocalTimeTable& table) {
  if (table.empty()) return 0;
  std::int64_t stat = 0;
  for (std::int64_t x = table.lowest() - 1; x <= table.highest(); ++x) {
    stat = std::max(stat, std::abs(table.count(x + 1) - table.count(x)));
  }
  return stat;
}

LocalTimeTable random_walk_local_time(std::int64_t n, Rng rng) {
  // Two-sided dense buffer grown on demand; cheaper than LocalTimeTable::push
  // for long walks.
  std::int64_t span = 1024;
  std::vector<std::int64_t> buf(static_cast<std::size_t>(2 * span + 1), 0);
  std::int64_t x = 0;
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  std::uint64_t word = 0;
  int left = 0;
  for (std::int64_t k = 0; k < n; ++k) {
    if (left == 0) {
      word = rng.next();
      left = 64;
    }
    x += static_cast<std::int64_t>(word & 1U) * 2 - 1;
    word >>= 1;
    --left;
    if (std::abs(x) > span) {
      const std::int64_t grown = span * 2;
      std::vector<std::int64_t> next(static_cast<std::size_t>(2 * grown + 1), 0);
      std::copy(buf.begin(), buf.end(), next.begin() + (grown - span));
      buf.swap(next);
      span = grown;
    }
    ++buf[static_cast<std::size_t>(x + span)];
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (n == 0) return {};
  const auto first = buf.begin() + (lo + span);
  const auto last = buf.begin() + (hi + span + 1);
  return LocalTimeTable::from_dense(lo, std::vector<std::int64_t>(first, last));
}

double kesten_statistic(const LocalTimeTable& table) {
  const auto n = static_cast<double>(table.n_steps());
  if (table.n_steps() < 16) throw InvalidArgument("kesten_statistic needs n >= 16");
  return static_cast<double>(max_local_time(table).second) /
         std::sqrt(2.0 * n * std::log(std::log(n)));
}

bool conservation_holds(std::int64_t n, std::int64_t paths, std::uint64_t master_seed,
                        unsigned threads) {
  std::vector<char> ok(static_cast<std::size_t>(paths), 0);
  parallel_for(ok.size(), threads, [&](std::size_t r) {
    const auto t = random_walk_local_time(n, Rng(SeedSpec{master_seed, r}, substream::kVertical));
    ok[r] = t.total() == n && t.n_steps() == n;
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

std::vector<double> uniformity_medians(std::span<const std::int64_t> n_grid, std::int64_t paths,
                                       double exponent, std::uint64_t master_seed,
                                       unsigned threads) {
  std::vector<double> out;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::int64_t n = n_grid[g];
    const std::uint64_t key = derive_key(master_seed, g);
    std::vector<double> stats(static_cast<std::size_t>(paths));
    parallel_for(stats.size(), threads, [&](std::size_t r) {
      const auto t = random_walk_local_time(n, Rng(SeedSpec{key, r}, substream::kVertical));
      stats[r] = static_cast<double>(adjacent_uniformity_stat(t)) /
                 std::pow(static_cast<double>(n), exponent);
    });
    out.push_back(median(std::move(stats)));
  }
  return out;
}

std::vector<double> kesten_sample(std::int64_t n, std::int64_t paths, std::uint64_t master_seed,
                                  unsigned threads) {
  std::vector<double> stats(static_cast<std::size_t>(paths));
  parallel_for(stats.size(), threads, [&](std::size_t r) {
    stats[r] = kesten_statistic(
        random_walk_local_time(n, Rng(SeedSpec{master_seed, r}, substream::kVertical)));
  });
  return stats;
}

}  // namespace kcomb
