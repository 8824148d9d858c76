#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>

#include "kcomb/lattice.hpp"

namespace kcomb::detail {

// Fills Trajectory::steps/positions according to its RecordMode. Callers
// report every step in full mode and at least every checkpoint step
// otherwise; next_checkpoint() tells a chunking sampler where it must stop.
class Recorder {
 public:
  explicit Recorder(Trajectory& traj) : traj_(traj) {
    if (traj_.mode.kind == RecordKind::checkpoints) {
      const auto& cps = traj_.mode.checkpoints;
      end_ = static_cast<std::size_t>(
          std::upper_bound(cps.begin(), cps.end(), traj_.n_steps) - cps.begin());
      traj_.steps.reserve(end_);
      traj_.positions.reserve(end_);
      traj_.running_max_abs_y.reserve(end_);
    } else if (traj_.mode.kind == RecordKind::full) {
      traj_.steps.reserve(static_cast<std::size_t>(traj_.n_steps) + 1);
      traj_.positions.reserve(static_cast<std::size_t>(traj_.n_steps) + 1);
    }
  }

  bool full() const noexcept { return traj_.mode.kind == RecordKind::full; }
  bool tracks_max() const noexcept { return traj_.mode.kind == RecordKind::checkpoints; }

  std::int64_t next_checkpoint() const noexcept {
    switch (traj_.mode.kind) {
      case RecordKind::full:
        return 0;
      case RecordKind::checkpoints:
        return next_ < end_ ? traj_.mode.checkpoints[next_]
                            : std::numeric_limits<std::int64_t>::max();
      case RecordKind::endpoint:
        break;
    }
    return std::numeric_limits<std::int64_t>::max();
  }

  void observe(std::int64_t step, Position pos, std::int64_t max_abs_y) {
    switch (traj_.mode.kind) {
      case RecordKind::full:
        traj_.steps.push_back(step);
        traj_.positions.push_back(pos);
        break;
      case RecordKind::checkpoints:
        if (next_ < end_ && traj_.mode.checkpoints[next_] == step) {
          traj_.steps.push_back(step);
          traj_.positions.push_back(pos);
          traj_.running_max_abs_y.push_back(max_abs_y);
          ++next_;
        }
        break;
      case RecordKind::endpoint:
        break;
    }
    if (step == traj_.n_steps && traj_.mode.kind == RecordKind::endpoint) {
      traj_.steps.push_back(step);
      traj_.positions.push_back(pos);
    }
  }

 private:
  Trajectory& traj_;
  std::size_t next_ = 0;
  std::size_t end_ = 0;
};

}  // namespace kcomb::detail
