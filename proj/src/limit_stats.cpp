#include "kcomb/limit_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kcomb/coupling.hpp"
#include "kcomb/error.hpp"
#include "kcomb/parallel.hpp"

namespace kcomb {

namespace {

// Stream tags under a master seed for the reference samples.
constexpr std::uint64_t kReferenceY = 0x7265665F79ULL;
constexpr std::uint64_t kReferenceX = 0x7265665F78ULL;
constexpr std::uint64_t kConfigA = 0x6366675F61ULL;
constexpr std::uint64_t kConfigB = 0x6366675F62ULL;

CoordinateSummary summarize(std::vector<double> v) {
  CoordinateSummary s;
  if (v.empty()) return s;
  s.mean = mean(v);
  double abs_sum = 0.0;
  for (double x : v) abs_sum += std::abs(x);
  s.mean_abs = abs_sum / static_cast<double>(v.size());
  s.variance = variance(v);
  std::sort(v.begin(), v.end());
  s.q05 = quantile(v, 0.05);
  s.q25 = quantile(v, 0.25);
  s.q50 = quantile(v, 0.50);
  s.q75 = quantile(v, 0.75);
  s.q95 = quantile(v, 0.95);
  return s;
}

void check_grid(std::span<const std::int64_t> grid, std::size_t min_points, double min_ratio) {
  if (grid.size() < min_points) {
    throw InsufficientGrid("need at least " + std::to_string(min_points) + " grid points");
  }
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (grid[g] <= grid[g - 1]) throw InsufficientGrid("grid must be increasing");
  }
  if (grid.front() < 1 ||
      static_cast<double>(grid.back()) < min_ratio * static_cast<double>(grid.front())) {
    throw InsufficientGrid("grid does not span enough decades");
  }
}

}  // namespace

std::vector<double> sample_limit_c1(double a_k, std::int64_t count, std::uint64_t master_seed) {
  if (!(a_k > 0.0)) throw InvalidScale("A_K must be positive, got " + std::to_string(a_k));
  Rng rng(SeedSpec{master_seed, 0}, substream::kDirect);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t i = 0; i < count; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    out.push_back(std::sqrt(a_k * std::abs(z2)) * z1);
  }
  return out;
}

std::vector<double> sample_standard_normal(std::int64_t count, std::uint64_t master_seed) {
  Rng rng(SeedSpec{master_seed, 0}, substream::kDirect);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(rng.normal());
  return out;
}

EndpointCounts count_endpoints(std::span<const Position> endpoints) {
  EndpointCounts c;
  for (const auto& p : endpoints) ++c.counts[p];
  c.total = static_cast<std::int64_t>(endpoints.size());
  return c;
}

ChiSquareResult chi_square_endpoint(const EndpointCounts& empirical,
                                    const DistributionTable& exact, double min_expected) {
  std::int64_t sum = 0;
  for (const auto& [pos, c] : empirical.counts) sum += c;
  if (sum != empirical.total) {
    throw ShapeMismatch("endpoint counts sum to " + std::to_string(sum) + ", expected " +
                        std::to_string(empirical.total));
  }
  for (const auto& [pos, c] : empirical.counts) {
    if (c > 0 && exact.probability(pos) == 0.0) {
      return {std::numeric_limits<double>::infinity(), 0, 0};
    }
  }

  struct Bin {
    double expected = 0.0;
    double observed = 0.0;
  };
  const auto total = static_cast<double>(empirical.total);
  std::vector<Bin> bins;
  Bin pooled;
  for (const auto& [pos, pr] : exact.entries) {
    const auto it = empirical.counts.find(pos);
    const double obs = it == empirical.counts.end() ? 0.0 : static_cast<double>(it->second);
    const double e = pr * total;
    if (e >= min_expected) {
      bins.push_back({e, obs});
    } else {
      pooled.expected += e;
      pooled.observed += obs;
    }
  }
  if (pooled.expected > 0.0) {
    if (pooled.expected >= min_expected || bins.empty()) {
      bins.push_back(pooled);
    } else {
      auto smallest = std::min_element(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) {
        return a.expected < b.expected;
      });
      smallest->expected += pooled.expected;
      smallest->observed += pooled.observed;
    }
  }

  ChiSquareResult r;
  for (const auto& b : bins) {
    const double d = b.observed - b.expected;
    r.statistic += d * d / b.expected;
  }
  r.bins = static_cast<int>(bins.size());
  r.dof = std::max(r.bins - 1, 0);
  return r;
}

std::vector<double> EnsembleSummary::scaled_x_samples() const {
  const double s = std::pow(static_cast<double>(n_steps), 0.25);
  std::vector<double> v;
  v.reserve(endpoints.size());
  for (const auto& p : endpoints) v.push_back(static_cast<double>(p.x) / s);
  return v;
}

std::vector<double> EnsembleSummary::scaled_y_samples() const {
  const double s = std::sqrt(static_cast<double>(n_steps));
  std::vector<double> v;
  v.reserve(endpoints.size());
  for (const auto& p : endpoints) v.push_back(static_cast<double>(p.y) / s);
  return v;
}

EnsembleSummary run_ensemble(const KCombConfig& config, std::int64_t n_steps,
                             std::int64_t n_paths, std::uint64_t master_seed, Sampler sampler,
                             unsigned threads) {
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
  if (n_paths < 1) throw InvalidArgument("n_paths must be positive");
  EnsembleSummary e{config, n_steps, n_paths, sampler, {}, {}, {}};
  e.endpoints.resize(static_cast<std::size_t>(n_paths));
  parallel_for(e.endpoints.size(), threads, [&](std::size_t i) {
    const SeedSpec seed{master_seed, i};
    e.endpoints[i] = sampler == Sampler::direct
                         ? simulate_direct_endpoint(config, n_steps, seed)
                         : simulate_coupled_endpoint(config, n_steps, seed).position;
  });
  if (n_steps > 0) {
    e.scaled_x = summarize(e.scaled_x_samples());
    e.scaled_y = summarize(e.scaled_y_samples());
  }
  return e;
}

ScalingPair scaling_exponents(const KCombConfig& config, std::span<const std::int64_t> n_grid,
                              std::int64_t paths_per_n, std::uint64_t master_seed,
                              Sampler sampler, unsigned threads) {
  check_grid(n_grid, 4, 1000.0);
  ScalingPair out;
  std::vector<double> ns;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const auto e = run_ensemble(config, n_grid[g], paths_per_n, derive_key(master_seed, g),
                                sampler, threads);
    // Unscaled E|coordinate|; the scaling is what is being measured.
    double sx = 0.0, sy = 0.0;
    for (const auto& p : e.endpoints) {
      sx += static_cast<double>(std::abs(p.x));
      sy += static_cast<double>(std::abs(p.y));
    }
    const auto m = static_cast<double>(e.endpoints.size());
    out.x.mean_abs.push_back(sx / m);
    out.y.mean_abs.push_back(sy / m);
    ns.push_back(static_cast<double>(n_grid[g]));
  }
  out.x.n_grid.assign(n_grid.begin(), n_grid.end());
  out.y.n_grid = out.x.n_grid;
  out.x.fit = fit_loglog(ns, out.x.mean_abs);
  out.y.fit = fit_loglog(ns, out.y.mean_abs);
  return out;
}

ScalingResult scaling_exponent(const KCombConfig& config, std::span<const std::int64_t> n_grid,
                               std::int64_t paths_per_n, Coordinate coordinate,
                               std::uint64_t master_seed, Sampler sampler, unsigned threads) {
  auto pair = scaling_exponents(config, n_grid, paths_per_n, master_seed, sampler, threads);
  return coordinate == Coordinate::x ? std::move(pair.x) : std::move(pair.y);
}

MarginalReport marginal_limits(const KCombConfig& config, std::span<const std::int64_t> n_grid,
                               std::int64_t n_paths, std::int64_t reference_size,
                               std::uint64_t master_seed, Sampler sampler, unsigned threads) {
  if (n_grid.empty()) throw InsufficientGrid("empty grid");
  MarginalReport report;
  report.a_k = a_k(config);
  report.n_paths = n_paths;
  report.reference_size = reference_size;
  const auto ref_y = sample_standard_normal(reference_size, derive_key(master_seed, kReferenceY));
  const auto ref_x =
      sample_limit_c1(report.a_k, reference_size, derive_key(master_seed, kReferenceX));
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const auto e = run_ensemble(config, n_grid[g], n_paths, derive_key(master_seed, g), sampler,
                                threads);
    report.points.push_back({n_grid[g], ks_two_sample(e.scaled_y_samples(), ref_y),
                             ks_two_sample(e.scaled_x_samples(), ref_x)});
  }
  return report;
}

double lil_target_x() { return std::pow(2.0, 1.25) / std::pow(3.0, 0.75); }

std::vector<std::int64_t> geometric_checkpoints(std::int64_t n_max, double ratio) {
  if (!(ratio > 1.0)) throw InvalidArgument("checkpoint ratio must exceed 1");
  std::vector<std::int64_t> out;
  for (double t = 1.0; t <= static_cast<double>(n_max); t *= ratio) {
    const auto n = static_cast<std::int64_t>(std::floor(t));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  if (n_max >= 1 && out.back() != n_max) out.push_back(n_max);
  return out;
}

LilReport lil_statistics(const Trajectory& trajectory, double a_k) {
  if (trajectory.mode.kind != RecordKind::checkpoints ||
      trajectory.running_max_abs_y.size() != trajectory.positions.size()) {
    throw InvalidArgument("lil_statistics needs a checkpoint-mode trajectory");
  }
  if (!(a_k > 0.0)) throw InvalidScale("A_K must be positive");
  LilReport report;
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    const std::int64_t n = trajectory.steps[i];
    if (n < 16) {
      report.skipped.push_back(n);
      continue;
    }
    const auto dn = static_cast<double>(n);
    const double lln = std::log(std::log(dn));
    const auto& p = trajectory.positions[i];
    LilRow row;
    row.n = n;
    row.y_stat = static_cast<double>(p.y) / std::sqrt(2.0 * dn * lln);
    row.x_stat = static_cast<double>(p.x) /
                 (std::sqrt(a_k) * std::pow(dn, 0.25) * std::pow(lln, 0.75));
    row.chung_stat = std::sqrt(8.0 * lln / (std::numbers::pi * std::numbers::pi * dn)) *
                     static_cast<double>(trajectory.running_max_abs_y[i]);
    report.rows.push_back(row);
  }
  return report;
}

InvarianceResult position_invariance_test(const KCombConfig& config_a,
                                          const KCombConfig& config_b, std::int64_t n_steps,
                                          std::int64_t paths, std::uint64_t master_seed,
                                          double level, Sampler sampler, unsigned threads) {
  const auto alphas = [](const KCombConfig& c) {
    std::vector<double> a;
    for (const auto& l : c.lines()) a.push_back(l.alpha());
    std::sort(a.begin(), a.end());
    return a;
  };
  if (alphas(config_a) != alphas(config_b)) {
    throw NotComparable("configs carry different alpha multisets");
  }
  const auto ea =
      run_ensemble(config_a, n_steps, paths, derive_key(master_seed, kConfigA), sampler, threads);
  const auto eb =
      run_ensemble(config_b, n_steps, paths, derive_key(master_seed, kConfigB), sampler, threads);
  InvarianceResult r;
  r.ks = ks_two_sample(ea.scaled_x_samples(), eb.scaled_x_samples());
  r.critical = ks_critical_value(ea.endpoints.size(), eb.endpoints.size(), level);
  r.pass = r.ks < r.critical;
  return r;
}

}  // namespace kcomb
