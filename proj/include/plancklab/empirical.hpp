// Empirical distributions, Kolmogorov-Smirnov distances and reference CDFs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plancklab/parallel.hpp"

namespace plancklab {

struct SeedProvenance {
  std::uint64_t seed = 0;
  std::string generator;  // e.g. kGeneratorId
  std::string label;      // human-readable source, used in plot legends
};

class EmpiricalDistribution {
 public:
  EmpiricalDistribution(std::vector<double> samples, SeedProvenance provenance)
      : samples_(std::move(samples)), provenance_(std::move(provenance)) {
    if (samples_.empty())
      throw std::invalid_argument("EmpiricalDistribution: need at least one sample");
    std::sort(samples_.begin(), samples_.end());
  }

  std::size_t size() const { return samples_.size(); }
  const std::vector<double>& samples() const { return samples_; }
  const SeedProvenance& provenance() const { return provenance_; }
  double min() const { return samples_.front(); }
  double max() const { return samples_.back(); }

  // Right-continuous empirical CDF: fraction of samples <= t.
  double ecdf(double t) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
  }

  double mean() const { return pairwise_mean(samples_); }

  double variance() const {
    const double mu = mean();
    std::vector<double> sq(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const double d = samples_[i] - mu;
      sq[i] = d * d;
    }
    return pairwise_mean(sq);
  }

  double raw_moment(int order) const {
    if (order < 1) throw std::invalid_argument("raw_moment: order must be >= 1");
    std::vector<double> pw(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i)
      pw[i] = std::pow(samples_[i], order);
    return pairwise_mean(pw);
  }

 private:
  std::vector<double> samples_;
  SeedProvenance provenance_;
};

// Two-sample KS statistic: sup over the merged sample points of the CDF gap.
inline double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2) {
  const auto& a = d1.samples();
  const auto& b = d2.samples();
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double ks = 0.0;
  while (i < a.size() && j < b.size()) {
    const double va = a[i];
    const double vb = b[j];
    if (va <= vb)
      while (i < a.size() && a[i] == va) ++i;
    if (vb <= va)
      while (j < b.size() && b[j] == vb) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  ks = std::max(ks, std::abs(1.0 - static_cast<double>(j) / n2));
  ks = std::max(ks, std::abs(static_cast<double>(i) / n1 - 1.0));
  return ks;
}

// One-sample KS statistic against a reference CDF.
inline double ks_vs_cdf(const EmpiricalDistribution& d,
                        const std::function<double(double)>& cdf) {
  const auto& s = d.samples();
  const double n = static_cast<double>(s.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return ks;
}

// KS against the degenerate law concentrated at `location`.
inline double ks_vs_point_mass(const EmpiricalDistribution& d, double location) {
  const auto& s = d.samples();
  const double n = static_cast<double>(s.size());
  const auto below =
      static_cast<double>(std::lower_bound(s.begin(), s.end(), location) - s.begin());
  const auto at_or_below =
      static_cast<double>(std::upper_bound(s.begin(), s.end(), location) - s.begin());
  return std::max(below / n, 1.0 - at_or_below / n);
}

namespace detail {

// Regularized lower incomplete gamma P(a, x); series branch.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int k = 0; k < 500; ++k) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x); Lentz continued fraction.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Regularized lower incomplete gamma P(shape, x).
inline double gamma_p(double shape, double x) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma_p: shape must be > 0");
  if (x < 0.0) throw std::invalid_argument("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  return x < shape + 1.0 ? detail::gamma_p_series(shape, x)
                         : 1.0 - detail::gamma_q_cf(shape, x);
}

// Gamma(shape, scale) CDF. chi^2(d)/c is Gamma(shape d/2, scale 2/c).
inline double gamma_cdf(double shape, double scale, double t) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma_cdf: shape and scale must be > 0");
  if (t < 0.0) throw std::invalid_argument("gamma_cdf: t must be >= 0");
  return gamma_p(shape, t / scale);
}

inline double normal_cdf(double mean, double sigma, double t) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_cdf: sigma must be > 0");
  return 0.5 * std::erfc(-(t - mean) / (sigma * 1.4142135623730950488));
}

}  // namespace plancklab
