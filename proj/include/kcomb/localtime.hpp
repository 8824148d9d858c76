#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcomb/rng.hpp"

namespace kcomb {

// xi(x, n) = #{k : 0 < k <= n, S(k) = x}. Time 0 is not a visit. Counts are
// stored densely over the visited range [lo, lo + counts.size()).
class LocalTimeTable {
 public:
  LocalTimeTable() = default;

  // Adopts dense counts for sites lo, lo + 1, ...; n is their sum.
  static LocalTimeTable from_dense(std::int64_t lo, std::vector<std::int64_t> counts);

  // Records the walk's position after its next step.
  void push(std::int64_t x);

  std::int64_t n_steps() const noexcept { return n_; }
  std::int64_t count(std::int64_t x) const noexcept;
  bool empty() const noexcept { return counts_.empty(); }
  std::int64_t lowest() const noexcept { return lo_; }
  std::int64_t highest() const noexcept {
    return lo_ + static_cast<std::int64_t>(counts_.size()) - 1;
  }
  std::int64_t total() const noexcept;

  friend bool operator==(const LocalTimeTable&, const LocalTimeTable&) = default;

 private:
  std::int64_t n_ = 0;
  std::int64_t lo_ = 0;
  std::vector<std::int64_t> counts_;
};

// Builds the table of a path S(0..n). Throws InvalidPath unless S(0) == 0
// and every increment is +-1.
LocalTimeTable local_time_table(std::span<const std::int64_t> path);

// (x*, xi(n)) with xi(n) = sup_x xi(x, n), ties going to the smallest x.
// Throws EmptyTable for a zero-step table.
std::pair<std::int64_t, std::int64_t> max_local_time(const LocalTimeTable& table);

// sup_x |xi(x+1, n) - xi(x, n)| over the visited range widened by one site
// on each side; outside that both counts vanish.
std::int64_t adjacent_uniformity_stat(const LocalTimeTable& table);

// Local time table of n steps of the simple symmetric walk driven by `rng`
// (one bit per step, as BitWalk).
LocalTimeTable random_walk_local_time(std::int64_t n, Rng rng);

// xi(n) / sqrt(2 n log log n); requires n >= 16.
double kesten_statistic(const LocalTimeTable& table);

// Ensemble drivers. Walk r of a batch keyed by `key` uses
// Rng(SeedSpec{key, r}, substream::kVertical); grid point g of
// uniformity_medians uses key derive_key(master_seed, g).

// True when sum_x xi(x, n) == n for every one of `paths` walks.
bool conservation_holds(std::int64_t n, std::int64_t paths, std::uint64_t master_seed,
                        unsigned threads = 0);

// Median over `paths` walks of adjacent_uniformity_stat / n^exponent, per n.
std::vector<double> uniformity_medians(std::span<const std::int64_t> n_grid, std::int64_t paths,
                                       double exponent, std::uint64_t master_seed,
                                       unsigned threads = 0);

// kesten_statistic of `paths` independent n-step walks.
std::vector<double> kesten_sample(std::int64_t n, std::int64_t paths, std::uint64_t master_seed,
                                  unsigned threads = 0);

}  // namespace kcomb
