#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "kcomb/lattice.hpp"
#include "kcomb/stats.hpp"

namespace kcomb {

// ---------------------------------------------------------------------------
// Limit laws at unit time.
//
// Horizontal: W1(A_K * eta2(0, 1)) with eta2(0, .) the local time at zero of
// an independent Wiener process W2. Since eta2(0, 1) has the law of |Z2|
// (Levy), the variable is sampled exactly as sqrt(A_K |Z2|) * Z1.
// Vertical: W2(1), a standard normal.
// ---------------------------------------------------------------------------

// Throws InvalidScale unless a_k > 0.
std::vector<double> sample_limit_c1(double a_k, std::int64_t count, std::uint64_t master_seed);
std::vector<double> sample_standard_normal(std::int64_t count, std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// Goodness of fit of endpoint histograms against the exact law.
// ---------------------------------------------------------------------------

struct EndpointCounts {
  std::map<Position, std::int64_t> counts;
  std::int64_t total = 0;  // number of paths; must equal the sum of counts
};

EndpointCounts count_endpoints(std::span<const Position> endpoints);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  int bins = 0;  // after merging
};

// Pearson statistic over bins with expected count >= min_expected; smaller
// cells are pooled into one bin, which is folded into the smallest regular
// bin if it is still short. An observation at a zero-probability position
// makes the statistic +inf. Throws ShapeMismatch if the counts do not sum
// to `total`.
ChiSquareResult chi_square_endpoint(const EndpointCounts& empirical,
                                    const DistributionTable& exact, double min_expected = 5.0);

// ---------------------------------------------------------------------------
// Ensembles.
// ---------------------------------------------------------------------------

enum class Sampler { direct, coupled };

struct CoordinateSummary {
  double mean = 0.0;
  double mean_abs = 0.0;
  double variance = 0.0;
  double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

// M endpoints C(N) from independent paths; path i uses
// SeedSpec{master_seed, i}. Summaries are of the scaled coordinates
// x / N^{1/4} and y / N^{1/2}.
struct EnsembleSummary {
  KCombConfig config;
  std::int64_t n_steps = 0;
  std::int64_t n_paths = 0;
  Sampler sampler = Sampler::coupled;
  std::vector<Position> endpoints;
  CoordinateSummary scaled_x;
  CoordinateSummary scaled_y;

  std::vector<double> scaled_x_samples() const;
  std::vector<double> scaled_y_samples() const;
};

EnsembleSummary run_ensemble(const KCombConfig& config, std::int64_t n_steps,
                             std::int64_t n_paths, std::uint64_t master_seed,
                             Sampler sampler = Sampler::coupled, unsigned threads = 0);

enum class Coordinate { x, y };

struct ScalingResult {
  std::vector<std::int64_t> n_grid;
  std::vector<double> mean_abs;  // E|coordinate(N)| per grid point
  LogLogFit fit;
};

// Slope of log E|coordinate(N)| against log N. The grid needs >= 4
// increasing points spanning >= 3 decades (InsufficientGrid). Grid point g
// uses master key derive_key(master_seed, g).
ScalingResult scaling_exponent(const KCombConfig& config, std::span<const std::int64_t> n_grid,
                               std::int64_t paths_per_n, Coordinate coordinate,
                               std::uint64_t master_seed, Sampler sampler = Sampler::coupled,
                               unsigned threads = 0);

// Both coordinates from the same ensembles.
struct ScalingPair {
  ScalingResult x;
  ScalingResult y;
};
ScalingPair scaling_exponents(const KCombConfig& config, std::span<const std::int64_t> n_grid,
                              std::int64_t paths_per_n, std::uint64_t master_seed,
                              Sampler sampler = Sampler::coupled, unsigned threads = 0);

// KS distances of the scaled marginals from their limit laws along a grid of
// N. The references (standard normal for y, sample_limit_c1 for x) are drawn
// once, `reference_size` each, and shared by all grid points.
struct MarginalPoint {
  std::int64_t n = 0;
  double ks_y = 0.0;
  double ks_x = 0.0;
};

struct MarginalReport {
  double a_k = 0.0;
  std::int64_t n_paths = 0;
  std::int64_t reference_size = 0;
  std::vector<MarginalPoint> points;
};

MarginalReport marginal_limits(const KCombConfig& config, std::span<const std::int64_t> n_grid,
                               std::int64_t n_paths, std::int64_t reference_size,
                               std::uint64_t master_seed, Sampler sampler = Sampler::coupled,
                               unsigned threads = 0);

// ---------------------------------------------------------------------------
// Iterated-logarithm functionals along one trajectory. Reported, not gated.
// ---------------------------------------------------------------------------

double lil_target_x();  // 2^{5/4} / 3^{3/4}
inline constexpr double kLilTargetY = 1.0;
inline constexpr double kChungTarget = 1.0;
inline constexpr double kDefaultCheckpointRatio = 1.5;

// Distinct floor(ratio^k) <= n_max, k = 0, 1, ...
std::vector<std::int64_t> geometric_checkpoints(std::int64_t n_max, double ratio);

struct LilRow {
  std::int64_t n = 0;
  double y_stat = 0.0;      // C2(N) / sqrt(2 N log log N)
  double x_stat = 0.0;      // C1(N) / (sqrt(A_K) N^{1/4} (log log N)^{3/4})
  double chung_stat = 0.0;  // sqrt(8 log log N / (pi^2 N)) max_{k<=N} |C2(k)|
};

struct LilReport {
  std::vector<LilRow> rows;
  std::vector<std::int64_t> skipped;  // checkpoints below 16
};

// Needs a checkpoint-mode trajectory (running_max_abs_y filled); throws
// InvalidArgument otherwise.
LilReport lil_statistics(const Trajectory& trajectory, double a_k);

// ---------------------------------------------------------------------------
// Position invariance: same alphas on different levels give the same
// horizontal limit.
// ---------------------------------------------------------------------------

struct InvarianceResult {
  double ks = 0.0;
  double critical = 0.0;
  bool pass = false;
};

// Two-sample KS between x / N^{1/4} endpoint samples of the two configs,
// judged at the two-sample critical value for `level`. Throws NotComparable
// when the multisets of alphas differ.
InvarianceResult position_invariance_test(const KCombConfig& config_a,
                                          const KCombConfig& config_b, std::int64_t n_steps,
                                          std::int64_t paths, std::uint64_t master_seed,
                                          double level = 0.01,
                                          Sampler sampler = Sampler::coupled,
                                          unsigned threads = 0);

}  // namespace kcomb
