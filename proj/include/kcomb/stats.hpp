#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kcomb {

// Least-squares line through (ln x_i, ln y_i).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // 0 when only two points
};

// Throws InsufficientGrid with fewer than two points, ShapeMismatch on
// unequal lengths and InvalidArgument on nonpositive values.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased
double median(std::vector<double> v);
// Linear interpolation between order statistics (type 7).
double quantile(std::vector<double> v, double q);

// sup_t |F_a(t) - F_b(t)| for the empirical CDFs of a and b. Throws
// InvalidArgument when either sample is empty.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic two-sample critical value c(level) sqrt((n + m) / (n m)) with
// c(level) = sqrt(-ln(level / 2) / 2).
double ks_critical_value(std::size_t n, std::size_t m, double level);

// Quantile of the chi-square distribution with `dof` degrees of freedom.
double chi_square_quantile(double dof, double prob);

}  // namespace kcomb
