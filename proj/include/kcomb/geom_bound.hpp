#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kcomb/rng.hpp"

namespace kcomb {

// Exponential maximal inequality for centered geometric partial sums:
//   P(max_{j<=n} |sum_{i<=j} (G_i - (1-a)/a)| > lambda)
//     <= 2 exp(-lambda^2 a^2 / (4 (1-a) n)),
// claimed for large n and lambda < c n. The constant c is not known; we use
// a configurable cap on lambda / n and flag (never reject) values above it.
struct BoundValue {
  double value = 0.0;
  bool in_range = true;  // lambda <= cap * n
};

// Default cap on lambda / n: 0.1 (1 - a) / a, which keeps the exponent's
// tilt lambda a^2 / (2 n (1 - a)) at or below 0.05 a.
double default_lambda_cap(double alpha);

// Throws InvalidProbability unless 0 < alpha < 1 and InvalidArgument unless
// n >= 1 and lambda > 0. cap <= 0 selects default_lambda_cap(alpha).
BoundValue geometric_max_bound(double alpha, std::int64_t n, double lambda, double cap = 0.0);

// max_{1<=j<=n} |sum_{i<=j} (G_i - (1-a)/a)| for one sequence drawn from rng.
double max_centered_deviation(double alpha, std::int64_t n, Rng& rng);

// Fraction of `reps` independent sequences whose maximal deviation exceeds
// each lambda. Replication r uses SeedSpec{master_seed, r}. Throws
// InvalidArgument when reps < 1000.
std::vector<double> empirical_tail(double alpha, std::int64_t n, std::span<const double> lambdas,
                                   std::int64_t reps, std::uint64_t master_seed,
                                   unsigned threads = 0);

double empirical_tail(double alpha, std::int64_t n, double lambda, std::int64_t reps,
                      std::uint64_t master_seed, unsigned threads = 0);

struct TailCheckPoint {
  double lambda = 0.0;
  double c = 0.0;  // lambda = c sqrt((1-a) n) / a
  double bound = 0.0;
  bool in_range = true;
  double empirical = 0.0;
  double std_error = 0.0;  // binomial, sqrt(p (1-p) / reps)
  bool dominated = false;  // empirical <= bound + 3 std_error
};

struct TailCheckReport {
  double alpha = 0.0;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  std::vector<TailCheckPoint> points;
  // Centered partial sum at j = n, averaged over replications, and the
  // reference standard error sqrt((1-a) / a^2 * n / reps).
  double final_sum_mean = 0.0;
  double final_sum_reference_se = 0.0;
};

// Compares bound and empirical tail at lambda = c sqrt((1-a) n) / a for each c.
TailCheckReport tail_check(double alpha, std::int64_t n, std::span<const double> cs,
                           std::int64_t reps, std::uint64_t master_seed, unsigned threads = 0);

}  // namespace kcomb
