#include "kcomb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "kcomb/error.hpp"
#include "recorder.hpp"

namespace kcomb {

KCombConfig KCombConfig::from_pairs(std::span<const std::pair<std::int64_t, double>> raw) {
  std::vector<LineSpec> lines;
  lines.reserve(raw.size());
  for (const auto& [m, p] : raw) lines.push_back({m, p});
  return from_lines(std::move(lines));
}

KCombConfig KCombConfig::from_lines(std::vector<LineSpec> lines) {
  if (lines.empty()) throw EmptyConfig("at least one horizontal line is required");
  for (const auto& line : lines) {
    // Written as !(a && b) so that NaN is rejected too.
    if (!(line.p > 0.0 && line.p < 0.5)) {
      throw InvalidProbability("line m=" + std::to_string(line.m) + " has p=" +
                               std::to_string(line.p) + ", need 0 < p < 1/2");
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const LineSpec& a, const LineSpec& b) { return a.m < b.m; });
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].m == lines[i - 1].m) {
      throw DuplicateLevel("level m=" + std::to_string(lines[i].m) + " given twice");
    }
  }
  return KCombConfig(std::move(lines));
}

std::optional<std::size_t> KCombConfig::level_index(std::int64_t y) const noexcept {
  if (y < lines_.front().m || y > lines_.back().m) return std::nullopt;
  const auto it = std::lower_bound(lines_.begin(), lines_.end(), y,
                                   [](const LineSpec& l, std::int64_t v) { return l.m < v; });
  if (it != lines_.end() && it->m == y) return static_cast<std::size_t>(it - lines_.begin());
  return std::nullopt;
}

std::int64_t KCombConfig::distance_to_nearest(std::int64_t y) const noexcept {
  if (y <= lines_.front().m) return lines_.front().m - y;
  if (y >= lines_.back().m) return y - lines_.back().m;
  const auto it = std::lower_bound(lines_.begin(), lines_.end(), y,
                                   [](const LineSpec& l, std::int64_t v) { return l.m < v; });
  return std::min(it->m - y, y - std::prev(it)->m);
}

RecordMode RecordMode::at(std::vector<std::int64_t> steps) {
  for (auto s : steps) {
    if (s < 0) throw InvalidArgument("checkpoint step indices must be nonnegative");
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return {RecordKind::checkpoints, std::move(steps)};
}

Position step_direct(Position pos, const KCombConfig& config, double u) noexcept {
  const auto j = config.level_index(pos.y);
  if (!j) {
    pos.y += u < 0.5 ? 1 : -1;
    return pos;
  }
  const double p = config.lines()[*j].p;
  if (u < p) {
    ++pos.y;
  } else if (u < 2.0 * p) {
    --pos.y;
  } else if (u < 0.5 + p) {
    ++pos.x;
  } else {
    --pos.x;
  }
  return pos;
}

Trajectory simulate_direct(const KCombConfig& config, std::int64_t n_steps, const SeedSpec& seed,
                           const RecordMode& mode) {
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
  Trajectory traj{config, n_steps, seed, mode, {}, {}, {}};
  detail::Recorder rec(traj);
  Rng rng(seed, substream::kDirect);
  Position pos{0, 0};
  std::int64_t max_abs_y = 0;
  rec.observe(0, pos, max_abs_y);
  for (std::int64_t i = 1; i <= n_steps; ++i) {
    pos = step_direct(pos, config, rng.uniform());
    max_abs_y = std::max(max_abs_y, std::abs(pos.y));
    rec.observe(i, pos, max_abs_y);
  }
  return traj;
}

Position simulate_direct_endpoint(const KCombConfig& config, std::int64_t n_steps,
                                  const SeedSpec& seed) {
  Rng rng(seed, substream::kDirect);
  Position pos{0, 0};
  for (std::int64_t i = 0; i < n_steps; ++i) pos = step_direct(pos, config, rng.uniform());
  return pos;
}

double DistributionTable::total_mass() const {
  double s = 0.0;
  for (const auto& [pos, pr] : entries) s += pr;
  return s;
}

DistributionTable exact_distribution(const KCombConfig& config, std::int64_t n_steps) {
  if (n_steps < 0) throw InvalidArgument("n_steps must be nonnegative");
  if (n_steps > kMaxExactSteps) {
    throw TooLargeForExact("n_steps=" + std::to_string(n_steps) + " exceeds " +
                           std::to_string(kMaxExactSteps));
  }
  const std::int64_t n = n_steps;
  const std::int64_t width = 2 * n + 3;  // one cell of padding on each side
  const auto idx = [&](std::int64_t x, std::int64_t y) {
    return static_cast<std::size_t>((x + n + 1) * width + (y + n + 1));
  };
  std::vector<double> cur(static_cast<std::size_t>(width * width), 0.0);
  std::vector<double> nxt(cur.size(), 0.0);
  cur[idx(0, 0)] = 1.0;

  for (std::int64_t s = 0; s < n; ++s) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::int64_t x = -s; x <= s; ++x) {
      const std::int64_t r = s - std::abs(x);
      for (std::int64_t y = -r; y <= r; ++y) {
        const double mass = cur[idx(x, y)];
        if (mass == 0.0) continue;
        if (const auto j = config.level_index(y)) {
          const double p = config.lines()[*j].p;
          const double q = 0.5 - p;
          nxt[idx(x, y + 1)] += mass * p;
          nxt[idx(x, y - 1)] += mass * p;
          nxt[idx(x + 1, y)] += mass * q;
          nxt[idx(x - 1, y)] += mass * q;
        } else {
          nxt[idx(x, y + 1)] += mass * 0.5;
          nxt[idx(x, y - 1)] += mass * 0.5;
        }
      }
    }
    cur.swap(nxt);
  }

  DistributionTable table{n_steps, {}};
  for (std::int64_t x = -n; x <= n; ++x) {
    const std::int64_t r = n - std::abs(x);
    for (std::int64_t y = -r; y <= r; ++y) {
      const double mass = cur[idx(x, y)];
      if (mass > 0.0) table.entries.emplace(Position{x, y}, mass);
    }
  }
  return table;
}

}  // namespace kcomb
