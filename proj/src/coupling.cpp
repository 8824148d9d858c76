#include "kcomb/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "kcomb/error.hpp"
#include "kcomb/parallel.hpp"
#include "recorder.hpp"

namespace kcomb {

std::int64_t sample_geometric(double alpha, double u) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidProbability("geometric alpha=" + std::to_string(alpha) + " not in (0,1)");
  }
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-alpha)));
}

double a_k(const KCombConfig& config) {
  double s = 0.0;
  for (const auto& line : config.lines()) s += (1.0 - line.alpha()) / line.alpha();
  return s;
}

double d2_expected_occupation(std::span<const std::int64_t> xi2, const KCombConfig& config) {
  if (xi2.size() != config.k()) {
    throw ShapeMismatch("got " + std::to_string(xi2.size()) + " level counts for K=" +
                        std::to_string(config.k()));
  }
  double s = 0.0;
  for (std::size_t j = 0; j < xi2.size(); ++j) {
    const double a = config.lines()[j].alpha();
    s += static_cast<double>(xi2[j]) * (1.0 - a) / a;
  }
  return s;
}

namespace {

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

// Observer used when nothing but the endpoint is wanted.
struct NullSink {
  static constexpr bool per_step = false;
  static constexpr bool tracks_max = false;
  std::int64_t next_checkpoint() const noexcept { return kUnbounded; }
  void observe(std::int64_t, Position, std::int64_t) noexcept {}
  void on_step(std::int64_t, std::int64_t, double, double) noexcept {}
  void on_run(std::size_t, const GeometricRun&) noexcept {}
};

// Observer filling a Trajectory and, optionally, the decomposition's ledger
// and per-step series.
struct TrajectorySink {
  detail::Recorder rec;
  CoupledDecomposition& dec;
  bool ledger;
  bool series;
  bool per_step;
  bool tracks_max;

  TrajectorySink(Trajectory& traj, CoupledDecomposition& d, const CoupledOptions& opt)
      : rec(traj),
        dec(d),
        ledger(opt.record_ledger),
        series(opt.record_series),
        per_step(rec.full() || opt.record_series),
        tracks_max(rec.tracks_max()) {}

  std::int64_t next_checkpoint() const noexcept { return rec.next_checkpoint(); }
  void observe(std::int64_t i, Position pos, std::int64_t max_abs_y) {
    rec.observe(i, pos, max_abs_y);
  }
  void on_step(std::int64_t h, std::int64_t v, double d2, double err) {
    if (!series) return;
    dec.h_series.push_back(h);
    dec.v_series.push_back(v);
    dec.d2_series.push_back(d2);
    dec.error_series.push_back(err);
  }
  void on_run(std::size_t level, const GeometricRun& run) {
    if (ledger) dec.geom_ledger[level].push_back(run);
  }
};

struct WalkState {
  Position pos;
  std::int64_t i = 0;
  std::int64_t h = 0;
  std::int64_t v = 0;
  std::vector<std::int64_t> xi2;
  double d2 = 0.0;
  double max_error = 0.0;
  std::int64_t max_abs_y = 0;
};

// The construction itself. `Sink` decides how finely the walk must be
// resolved: per_step forces single steps, otherwise chunks stop at the next
// checkpoint and, when the running max of |y| is tracked, before |y| could
// exceed it.
template <class Sink>
WalkState run_coupled(const KCombConfig& config, std::int64_t n_steps, const SeedSpec& seed,
                      Sink& sink) {
  const std::size_t k = config.k();
  std::vector<double> weight(k), log_q(k);
  std::vector<Rng> geometric;
  geometric.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double a = config.lines()[j].alpha();
    weight[j] = (1.0 - a) / a;
    log_q[j] = std::log1p(-a);
    geometric.emplace_back(seed, substream::kGeometricBase + j);
  }
  BitWalk s1(Rng(seed, substream::kHorizontal));
  BitWalk s2(Rng(seed, substream::kVertical));

  WalkState st;
  st.xi2.assign(k, 0);
  const bool per_step = sink.per_step;
  const bool tracks_max = sink.tracks_max;

  const auto update_error = [&] {
    st.max_error = std::max(st.max_error, std::abs(static_cast<double>(st.h) - st.d2));
  };

  const auto chunk_limit = [&](std::int64_t cap) {
    cap = std::min(cap, n_steps - st.i);
    cap = std::min(cap, sink.next_checkpoint() - st.i);
    return cap;
  };

  // Horizontal run on line j, cut at n_steps.
  const auto horizontal_run = [&](std::size_t j) {
    const double u = geometric[j].uniform_pos();
    const auto g = static_cast<std::int64_t>(std::floor(std::log(u) / log_q[j]));
    const std::int64_t take = std::min(g, n_steps - st.i);
    if (per_step) {
      for (std::int64_t s = 0; s < take; ++s) {
        st.pos.x += s1.step();
        ++st.h;
        ++st.i;
        const double err = std::abs(static_cast<double>(st.h) - st.d2);
        st.max_error = std::max(st.max_error, err);
        sink.on_step(st.h, st.v, st.d2, st.max_error);
        sink.observe(st.i, st.pos, st.max_abs_y);
      }
    } else {
      std::int64_t left = take;
      while (left > 0) {
        const std::int64_t c = std::min(left, chunk_limit(kUnbounded));
        st.pos.x += s1.advance_many(c);
        st.h += c;
        st.i += c;
        left -= c;
        sink.observe(st.i, st.pos, st.max_abs_y);
      }
      update_error();
    }
    sink.on_run(j, GeometricRun{g, take, take < g});
  };

  sink.on_step(0, 0, 0.0, 0.0);
  sink.observe(0, st.pos, 0);
  if (const auto j0 = config.level_index(0)) horizontal_run(*j0);

  while (st.i < n_steps) {
    std::int64_t c = 0;
    if (!per_step) {
      // Largest stretch of S2 that cannot touch a line (or a new |y| max).
      std::int64_t cap = config.distance_to_nearest(st.pos.y) - 1;
      if (tracks_max) cap = std::min(cap, st.max_abs_y - std::abs(st.pos.y));
      cap = std::min<std::int64_t>(cap, s2.available());
      c = chunk_limit(cap);
    }
    if (c >= 2) {
      st.pos.y += s2.advance(static_cast<int>(c));
      st.v += c;
      st.i += c;
      sink.observe(st.i, st.pos, st.max_abs_y);
      continue;
    }
    st.pos.y += s2.step();
    ++st.v;
    ++st.i;
    st.max_abs_y = std::max(st.max_abs_y, std::abs(st.pos.y));
    const auto j = config.level_index(st.pos.y);
    if (j) {
      ++st.xi2[*j];
      st.d2 += weight[*j];
    }
    update_error();
    sink.on_step(st.h, st.v, st.d2, st.max_error);
    sink.observe(st.i, st.pos, st.max_abs_y);
    if (j) horizontal_run(*j);
  }
  return st;
}

}  // namespace

std::pair<Trajectory, CoupledDecomposition> simulate_coupled(const KCombConfig& config,
                                                             std::int64_t n_steps,
                                                             const SeedSpec& seed,
                                                             const RecordMode& mode,
                                                             const CoupledOptions& options) {
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
  Trajectory traj{config, n_steps, seed, mode, {}, {}, {}};
  CoupledDecomposition dec;
  dec.n_steps = n_steps;
  if (options.record_ledger) dec.geom_ledger.resize(config.k());
  if (options.record_series) {
    const auto cap = static_cast<std::size_t>(n_steps) + 1;
    dec.h_series.reserve(cap);
    dec.v_series.reserve(cap);
    dec.d2_series.reserve(cap);
    dec.error_series.reserve(cap);
  }
  TrajectorySink sink(traj, dec, options);
  WalkState st = run_coupled(config, n_steps, seed, sink);
  if (mode.kind == RecordKind::endpoint && traj.positions.empty()) {
    traj.steps.push_back(n_steps);
    traj.positions.push_back(st.pos);
  }
  dec.h = st.h;
  dec.v = st.v;
  dec.xi2_per_level = std::move(st.xi2);
  dec.d2 = st.d2;
  dec.max_error = st.max_error;
  return {std::move(traj), std::move(dec)};
}

CoupledEndpoint simulate_coupled_endpoint(const KCombConfig& config, std::int64_t n_steps,
                                          const SeedSpec& seed) {
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
  NullSink sink;
  WalkState st = run_coupled(config, n_steps, seed, sink);
  return {st.pos, st.h, st.v, std::move(st.xi2), st.max_error};
}

CouplingGrowthReport coupling_error_growth(const KCombConfig& config,
                                           std::span<const std::int64_t> n_grid,
                                           std::int64_t paths_per_n, std::uint64_t master_seed,
                                           unsigned threads) {
  if (n_grid.size() < 3) throw InsufficientGrid("need at least 3 grid points");
  for (std::size_t g = 1; g < n_grid.size(); ++g) {
    if (n_grid[g] <= n_grid[g - 1]) throw InsufficientGrid("grid must be increasing");
  }
  if (n_grid.front() < 1 || n_grid.back() < 100 * n_grid.front()) {
    throw InsufficientGrid("grid must span at least two decades");
  }
  if (paths_per_n < 1) throw InvalidArgument("paths_per_n must be positive");

  const auto zero_level = config.level_index(0);
  const double ak = a_k(config);
  const auto paths = static_cast<std::size_t>(paths_per_n);

  CouplingGrowthReport report;
  std::vector<double> ns, err_means, lt_means, v_means;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::int64_t n = n_grid[g];
    const std::uint64_t grid_key = derive_key(master_seed, g);
    std::vector<CoupledEndpoint> results(paths);
    parallel_for(paths, threads, [&](std::size_t i) {
      results[i] = simulate_coupled_endpoint(config, n, SeedSpec{grid_key, i});
    });
    CouplingGrowthPoint pt;
    pt.n = n;
    double lt_sum = 0.0;
    for (const auto& r : results) {
      pt.mean_max_error += r.max_error;
      pt.mean_abs_v_minus_n += static_cast<double>(std::abs(r.v - n));
      if (zero_level) {
        lt_sum += std::abs(static_cast<double>(r.h) -
                           ak * static_cast<double>(r.xi2_per_level[*zero_level]));
      }
    }
    const auto m = static_cast<double>(paths);
    pt.mean_max_error /= m;
    pt.mean_abs_v_minus_n /= m;
    if (zero_level) pt.mean_abs_h_vs_local_time = lt_sum / m;

    ns.push_back(static_cast<double>(n));
    err_means.push_back(pt.mean_max_error);
    v_means.push_back(pt.mean_abs_v_minus_n);
    if (zero_level) lt_means.push_back(*pt.mean_abs_h_vs_local_time);
    report.points.push_back(pt);
  }
  report.max_error_fit = fit_loglog(ns, err_means);
  report.v_deficit_fit = fit_loglog(ns, v_means);
  if (zero_level) report.local_time_fit = fit_loglog(ns, lt_means);
  return report;
}

}  // namespace kcomb
