#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lncd {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

// Monte Carlo estimate of one scalar quantity.
struct DelayEstimate {
  double mean = 0.0;
  double variance = 0.0;    // unbiased sample variance
  double half_width = 0.0;  // 95% normal-approximation half-width
  std::uint64_t trials = 0;

  double standard_error() const;
  double half_width_at(double z) const { return z * standard_error(); }
};

DelayEstimate summarize(std::span<const std::uint32_t> samples);
DelayEstimate summarize(std::span<const double> samples);

struct PmfPoint {
  std::uint64_t t = 0;
  double probability = 0.0;
};

// Normalized histogram, sorted by t.
std::vector<PmfPoint> histogram(std::span<const std::uint32_t> samples);

double pmf_mean(std::span<const PmfPoint> pmf);
double pmf_variance(std::span<const PmfPoint> pmf);

// Two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|.
double ks_statistic(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

// Asymptotic two-sample critical value c(alpha) * sqrt((m + n) / (m n)).
double ks_critical_value(double alpha, std::uint64_t m, std::uint64_t n);

}  // namespace lncd
