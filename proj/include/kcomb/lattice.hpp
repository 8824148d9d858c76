#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kcomb/rng.hpp"

namespace kcomb {

// One horizontal line y = m on which horizontal moves are allowed. From a
// point on the line the walk moves up or down with probability p each and
// left or right with probability 1/2 - p each.
struct LineSpec {
  std::int64_t m = 0;
  double p = 0.25;

  double alpha() const noexcept { return 2.0 * p; }

  friend bool operator==(const LineSpec&, const LineSpec&) = default;
};

// A validated K-comb lattice: K >= 1 distinct lines sorted by level.
class KCombConfig {
 public:
  // Validates and sorts. Throws EmptyConfig, DuplicateLevel or
  // InvalidProbability.
  static KCombConfig from_pairs(std::span<const std::pair<std::int64_t, double>> raw);
  static KCombConfig from_lines(std::vector<LineSpec> lines);

  std::span<const LineSpec> lines() const noexcept { return lines_; }
  std::size_t k() const noexcept { return lines_.size(); }

  // Index of the line at level y, if any.
  std::optional<std::size_t> level_index(std::int64_t y) const noexcept;

  // min_j |y - m_j|.
  std::int64_t distance_to_nearest(std::int64_t y) const noexcept;

  bool contains_level(std::int64_t y) const noexcept { return level_index(y).has_value(); }

  friend bool operator==(const KCombConfig&, const KCombConfig&) = default;

 private:
  explicit KCombConfig(std::vector<LineSpec> lines) : lines_(std::move(lines)) {}
  std::vector<LineSpec> lines_;
};

inline KCombConfig validate_config(std::span<const std::pair<std::int64_t, double>> raw) {
  return KCombConfig::from_pairs(raw);
}

struct Position {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const Position&, const Position&) = default;
};

enum class RecordKind { endpoint, checkpoints, full };

struct RecordMode {
  RecordKind kind = RecordKind::endpoint;
  std::vector<std::int64_t> checkpoints;  // sorted, unique; only for kind == checkpoints

  static RecordMode endpoint() { return {}; }
  static RecordMode full() { return {RecordKind::full, {}}; }
  // Throws InvalidArgument on negative step indices.
  static RecordMode at(std::vector<std::int64_t> steps);
};

// A realized path. `steps[i]` is the step index at which `positions[i]` was
// recorded: {n_steps} for endpoint mode, 0..n_steps for full mode, the
// requested indices (clipped to n_steps) for checkpoint mode.
// `running_max_abs_y[i]` is max_{k <= steps[i]} |y(k)|, kept in checkpoint
// mode only.
struct Trajectory {
  KCombConfig config;
  std::int64_t n_steps = 0;
  SeedSpec seed;
  RecordMode mode;
  std::vector<std::int64_t> steps;
  std::vector<Position> positions;
  std::vector<std::int64_t> running_max_abs_y;

  Position endpoint() const { return positions.back(); }
};

// One transition of the chain, driven by a single uniform u in [0, 1).
// Off the lines: u < 1/2 goes up, otherwise down. On line j the unit
// interval is cut into [p, p, 1/2 - p, 1/2 - p] for up, down, right, left.
Position step_direct(Position pos, const KCombConfig& config, double u) noexcept;

// Iterates step_direct n_steps times from the origin, one uniform per step
// from the kDirect sub-stream of `seed`.
Trajectory simulate_direct(const KCombConfig& config, std::int64_t n_steps, const SeedSpec& seed,
                           const RecordMode& mode);

// Fast endpoint-only variant of simulate_direct (same stream, same result).
Position simulate_direct_endpoint(const KCombConfig& config, std::int64_t n_steps,
                                  const SeedSpec& seed);

inline constexpr std::int64_t kMaxExactSteps = 64;

struct DistributionTable {
  std::int64_t n_steps = 0;
  std::map<Position, double> entries;  // nonzero mass only

  double probability(Position p) const {
    const auto it = entries.find(p);
    return it == entries.end() ? 0.0 : it->second;
  }
  double total_mass() const;
};

// Exact law of C(n_steps) by dynamic programming over the diamond
// |x| + |y| <= n_steps. Throws TooLargeForExact above kMaxExactSteps.
DistributionTable exact_distribution(const KCombConfig& config, std::int64_t n_steps);

}  // namespace kcomb
