#include "kcomb/geom_bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kcomb/error.hpp"
#include "kcomb/parallel.hpp"

namespace kcomb {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidProbability("alpha=" + std::to_string(alpha) + " not in (0,1)");
  }
}

struct Deviation {
  double max_abs = 0.0;
  double final_sum = 0.0;
};

Deviation centered_walk(double alpha, std::int64_t n, Rng& rng) {
  const double log_q = std::log1p(-alpha);
  const double mu = (1.0 - alpha) / alpha;
  // Integer part and centering kept apart so the running sum stays exact.
  std::int64_t total = 0;
  double max_abs = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) {
    total += static_cast<std::int64_t>(std::floor(std::log(rng.uniform_pos()) / log_q));
    const double s = static_cast<double>(total) - mu * static_cast<double>(j);
    max_abs = std::max(max_abs, std::abs(s));
  }
  return {max_abs, static_cast<double>(total) - mu * static_cast<double>(n)};
}

std::vector<Deviation> replicate(double alpha, std::int64_t n, std::int64_t reps,
                                 std::uint64_t master_seed, unsigned threads) {
  check_alpha(alpha);
  if (n < 1) throw InvalidArgument("n must be positive");
  if (reps < 1000) throw InvalidArgument("empirical_tail needs reps >= 1000");
  std::vector<Deviation> out(static_cast<std::size_t>(reps));
  parallel_for(out.size(), threads, [&](std::size_t r) {
    Rng rng(SeedSpec{master_seed, r}, substream::kGeometricBase);
    out[r] = centered_walk(alpha, n, rng);
  });
  return out;
}

std::vector<double> exceedance(const std::vector<Deviation>& devs,
                               std::span<const double> lambdas) {
  std::vector<double> tails;
  tails.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const auto hits = std::count_if(devs.begin(), devs.end(),
                                    [&](const Deviation& d) { return d.max_abs > lambda; });
    tails.push_back(static_cast<double>(hits) / static_cast<double>(devs.size()));
  }
  return tails;
}

}  // namespace

double default_lambda_cap(double alpha) { return 0.1 * (1.0 - alpha) / alpha; }

BoundValue geometric_max_bound(double alpha, std::int64_t n, double lambda, double cap) {
  check_alpha(alpha);
  if (n < 1) throw InvalidArgument("n must be positive");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (cap <= 0.0) cap = default_lambda_cap(alpha);
  const double value =
      2.0 * std::exp(-lambda * lambda * alpha * alpha /
                     (4.0 * (1.0 - alpha) * static_cast<double>(n)));
  return {value, lambda <= cap * static_cast<double>(n)};
}

double max_centered_deviation(double alpha, std::int64_t n, Rng& rng) {
  check_alpha(alpha);
  return centered_walk(alpha, n, rng).max_abs;
}

std::vector<double> empirical_tail(double alpha, std::int64_t n, std::span<const double> lambdas,
                                   std::int64_t reps, std::uint64_t master_seed,
                                   unsigned threads) {
  return exceedance(replicate(alpha, n, reps, master_seed, threads), lambdas);
}

double empirical_tail(double alpha, std::int64_t n, double lambda, std::int64_t reps,
                      std::uint64_t master_seed, unsigned threads) {
  return empirical_tail(alpha, n, std::span<const double>(&lambda, 1), reps, master_seed,
                        threads)
      .front();
}

TailCheckReport tail_check(double alpha, std::int64_t n, std::span<const double> cs,
                           std::int64_t reps, std::uint64_t master_seed, unsigned threads) {
  const auto devs = replicate(alpha, n, reps, master_seed, threads);
  TailCheckReport report;
  report.alpha = alpha;
  report.n = n;
  report.reps = reps;
  const double scale = std::sqrt((1.0 - alpha) * static_cast<double>(n)) / alpha;
  std::vector<double> lambdas;
  for (double c : cs) lambdas.push_back(c * scale);
  const auto tails = exceedance(devs, lambdas);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    TailCheckPoint pt;
    pt.c = cs[i];
    pt.lambda = lambdas[i];
    const auto b = geometric_max_bound(alpha, n, pt.lambda);
    pt.bound = b.value;
    pt.in_range = b.in_range;
    pt.empirical = tails[i];
    pt.std_error = std::sqrt(pt.empirical * (1.0 - pt.empirical) / static_cast<double>(reps));
    pt.dominated = pt.empirical <= pt.bound + 3.0 * pt.std_error;
    report.points.push_back(pt);
  }
  double sum = 0.0;
  for (const auto& d : devs) sum += d.final_sum;
  report.final_sum_mean = sum / static_cast<double>(reps);
  report.final_sum_reference_se =
      std::sqrt((1.0 - alpha) / (alpha * alpha) * static_cast<double>(n) /
                static_cast<double>(reps));
  return report;
}

}  // namespace kcomb
