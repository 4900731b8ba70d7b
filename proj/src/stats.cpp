#include "lncd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lncd {

double DelayEstimate::standard_error() const {
  return trials > 0 ? std::sqrt(variance / static_cast<double>(trials)) : 0.0;
}

namespace {

template <class T>
DelayEstimate summarize_impl(std::span<const T> samples) {
  DelayEstimate est;
  est.trials = samples.size();
  if (samples.empty()) return est;
  double sum = 0.0;
  for (const T x : samples) sum += static_cast<double>(x);
  est.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (const T x : samples) {
      const double d = static_cast<double>(x) - est.mean;
      ss += d * d;
    }
    est.variance = ss / static_cast<double>(samples.size() - 1);
  }
  est.half_width = est.half_width_at(kZ95);
  return est;
}

}  // namespace

DelayEstimate summarize(std::span<const std::uint32_t> samples) { return summarize_impl(samples); }
DelayEstimate summarize(std::span<const double> samples) { return summarize_impl(samples); }

std::vector<PmfPoint> histogram(std::span<const std::uint32_t> samples) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto x : samples) ++counts[x];
  std::vector<PmfPoint> pmf;
  pmf.reserve(counts.size());
  const double total = static_cast<double>(samples.size());
  for (const auto& [t, c] : counts) pmf.push_back({t, static_cast<double>(c) / total});
  return pmf;
}

double pmf_mean(std::span<const PmfPoint> pmf) {
  double m = 0.0;
  for (const auto& pt : pmf) m += static_cast<double>(pt.t) * pt.probability;
  return m;
}

double pmf_variance(std::span<const PmfPoint> pmf) {
  const double m = pmf_mean(pmf);
  double v = 0.0;
  for (const auto& pt : pmf) {
    const double d = static_cast<double>(pt.t) - m;
    v += d * d * pt.probability;
  }
  return v;
}

double ks_statistic(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::vector<std::uint32_t> sa(a.begin(), a.end());
  std::vector<std::uint32_t> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Ties are consumed together so the statistic is evaluated only at points
  // where both empirical CDFs are right-continuous.
  while (i < sa.size() && j < sb.size()) {
    const std::uint32_t x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(double alpha, std::uint64_t m, std::uint64_t n) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  return c * std::sqrt((dm + dn) / (dm * dn));
}

}  // namespace lncd
