#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kcomb/lattice.hpp"
#include "kcomb/rng.hpp"
#include "kcomb/stats.hpp"

namespace kcomb {

// Inverse-CDF geometric variate on {0, 1, 2, ...} with P(k) = alpha (1-alpha)^k:
// k = floor(ln u / ln(1 - alpha)) for u in (0, 1].
// Throws InvalidProbability unless 0 < alpha < 1.
std::int64_t sample_geometric(double alpha, double u);

// A_K = sum_j (1 - alpha_j) / alpha_j, the mean horizontal run length summed
// over lines.
double a_k(const KCombConfig& config);

// D_2 = sum_j xi2[j] (1 - alpha_j) / alpha_j. Throws ShapeMismatch if
// xi2.size() != K.
double d2_expected_occupation(std::span<const std::int64_t> xi2, const KCombConfig& config);

// One horizontal run: `value` is the geometric draw, `consumed` how many of
// those steps fit before the walk ended. truncated == (consumed < value).
struct GeometricRun {
  std::int64_t value = 0;
  std::int64_t consumed = 0;
  bool truncated = false;
};

// Bookkeeping of the two-walk construction after n_steps steps.
//   h, v            horizontal / vertical step counts, h + v == n_steps
//   xi2_per_level   local time of the vertical walk at each line, times 1..v
//   d2              d2_expected_occupation(xi2_per_level)
//   max_error       max_{1<=i<=n} |H_i - D_2(V_i)| (0 when n == 0)
// The per-step series (index i = 0..n) are filled only when
// CoupledOptions::record_series is set; the ledger only with record_ledger.
struct CoupledDecomposition {
  std::int64_t n_steps = 0;
  std::int64_t h = 0;
  std::int64_t v = 0;
  std::vector<std::int64_t> xi2_per_level;
  double d2 = 0.0;
  double max_error = 0.0;
  std::vector<std::vector<GeometricRun>> geom_ledger;

  std::vector<std::int64_t> h_series;
  std::vector<std::int64_t> v_series;
  std::vector<double> d2_series;
  std::vector<double> error_series;
};

struct CoupledOptions {
  bool record_ledger = true;
  bool record_series = false;
};

// The comb walk realized from two independent simple symmetric walks: S2
// supplies every vertical step, S1 every horizontal one, and each arrival at
// line j (including time 0 when 0 is a line) triggers a horizontal run whose
// length is the next geometric(alpha_j) variate of that line's own sequence.
// Exactly n_steps steps are emitted; a run cut off at the end is marked
// truncated in the ledger. Sub-streams: S1 = kHorizontal, S2 = kVertical,
// line j = kGeometricBase + j. Stretches of S2 that cannot reach a line and
// runs of S1 are advanced a word at a time; this never changes the path.
std::pair<Trajectory, CoupledDecomposition> simulate_coupled(const KCombConfig& config,
                                                             std::int64_t n_steps,
                                                             const SeedSpec& seed,
                                                             const RecordMode& mode,
                                                             const CoupledOptions& options = {});

// Endpoint-only fast path used by the ensemble drivers. Same streams and the
// same result as simulate_coupled.
struct CoupledEndpoint {
  Position position;
  std::int64_t h = 0;
  std::int64_t v = 0;
  std::vector<std::int64_t> xi2_per_level;
  double max_error = 0.0;
};
CoupledEndpoint simulate_coupled_endpoint(const KCombConfig& config, std::int64_t n_steps,
                                          const SeedSpec& seed);

struct CouplingGrowthPoint {
  std::int64_t n = 0;
  double mean_max_error = 0.0;          // mean of max_i |H_i - D_2(V_i)|
  std::optional<double> mean_abs_h_vs_local_time;  // mean |H_N - A_K xi2(0, V_N)|, 0 a line
  double mean_abs_v_minus_n = 0.0;      // mean |V_N - N| = mean H_N
};

struct CouplingGrowthReport {
  std::vector<CouplingGrowthPoint> points;
  LogLogFit max_error_fit;
  std::optional<LogLogFit> local_time_fit;
  LogLogFit v_deficit_fit;
};

// Runs paths_per_n coupled paths at every N of the grid and fits
// log(mean) against log N. The grid needs >= 3 increasing points spanning
// at least two decades (InsufficientGrid otherwise). Grid point g, path i
// uses SeedSpec{derive_key(master_seed, g), i}.
CouplingGrowthReport coupling_error_growth(const KCombConfig& config,
                                           std::span<const std::int64_t> n_grid,
                                           std::int64_t paths_per_n, std::uint64_t master_seed,
                                           unsigned threads = 0);

}  // namespace kcomb
