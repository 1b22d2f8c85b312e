// Bourgain de-randomisation diagnostics.
//
// Around a centre x the eigenfunction is viewed through the Planck window
// F_x(y) = f(x + (R/sqrt(E)) y) on [-1/2, 1/2]^2. Frequencies are grouped
// into circle arcs; each kept arc k carries the normalised coefficient
//
//     b_k(x) = mu_f(I_k)^{-1/2} sum_{xi in arc} a_xi e(<xi, x>),
//
// and the surrogate phi_x(y) = sum_k mu_f(I_k)^{1/2} b_k(x) e(<R zeta_k, y>)
// replaces every arc by a single plane wave at the arc midpoint. Over random
// centres x the b_k behave like i.i.d. complex Gaussians when the spectral
// correlations (A1) and flatness (A2) hypotheses hold; gaussianity_report
// measures how far a concrete eigenfunction is from that ideal.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "plancklab/eigenfunction.hpp"
#include "plancklab/empirical.hpp"
#include "plancklab/measure.hpp"
#include "plancklab/parallel.hpp"
#include "plancklab/rng.hpp"

namespace plancklab {

struct DerandomizationConfig {
  int K = 16;
  double delta = 1.0 / 256.0;  // default K^{-2}
  double R = 2.0;
  double grid_step = 0.05;

  // Informational: a threshold below the uniform arc mass keeps arcs the
  // asymptotic argument would discard.
  bool delta_below_uniform_level() const { return delta < 1.0 / (2.0 * K); }

  void validate() const {
    if (K < 1) throw std::invalid_argument("DerandomizationConfig: K must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("DerandomizationConfig: delta must lie in (0,1)");
    if (!(R > 1.0)) throw std::invalid_argument("DerandomizationConfig: R must be > 1");
    if (!(grid_step > 0.0) || grid_step > 1.0 / (10.0 * R))
      throw std::invalid_argument(
          "DerandomizationConfig: grid_step must satisfy 0 < step <= 1/(10R)");
  }
};

// F_x(y) = f(x + (R/sqrt(E)) y), coordinates reduced mod 1. The centre is
// reduced before the offset is added, so integer centre shifts are exact.
inline double window(const CoefficientVector& coeffs, double x1, double x2, double R,
                     double y1, double y2) {
  const double scale = R / std::sqrt(static_cast<double>(coeffs.set.energy));
  double p1 = (x1 - std::floor(x1)) + scale * y1;
  double p2 = (x2 - std::floor(x2)) + scale * y2;
  p1 -= std::floor(p1);
  p2 -= std::floor(p2);
  return evaluate(coeffs, p1, p2);
}

// Normalised arc sums, aligned with partition.kept.
inline std::vector<std::complex<double>> b_coefficients(const CoefficientVector& coeffs,
                                                        double x1, double x2,
                                                        const ArcPartition& partition) {
  if (partition.kept.empty())
    throw std::invalid_argument("b_coefficients: empty kept-arc set");
  std::vector<std::complex<double>> b;
  b.reserve(partition.kept.size());
  for (const auto& arc : partition.kept) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& xi : arc.frequencies) {
      const std::size_t idx = detail::index_of(coeffs.set, xi);
      const double phase =
          kTwoPi * (static_cast<double>(xi.x) * x1 + static_cast<double>(xi.y) * x2);
      acc += coeffs.a[idx] * std::complex<double>{std::cos(phase), std::sin(phase)};
    }
    b.push_back(acc / std::sqrt(arc.mass));
  }
  return b;
}

namespace detail {

inline double phi_from_b(const ArcPartition& partition,
                         const std::vector<std::complex<double>>& b, double R, double y1,
                         double y2) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < partition.kept.size(); ++k) {
    const auto& arc = partition.kept[k];
    const double t = kTwoPi * arc.midpoint_angle;
    const double phase = kTwoPi * R * (std::cos(t) * y1 + std::sin(t) * y2);
    acc += std::sqrt(arc.mass) * b[k] * std::complex<double>{std::cos(phase), std::sin(phase)};
  }
  if (std::abs(acc.imag()) > 1e-9)
    throw std::logic_error("phi_eval: imaginary residue exceeds tolerance");
  return acc.real();
}

}  // namespace detail

inline double phi_eval(const CoefficientVector& coeffs, double x1, double x2,
                       const ArcPartition& partition, double R, double y1, double y2) {
  return detail::phi_from_b(partition, b_coefficients(coeffs, x1, x2, partition), R, y1, y2);
}

struct SupDifferenceReport {
  double grid_max = 0.0;       // lower bound for the true sup
  double gradient_bound = 0.0; // Lipschitz bound 2 pi R (sum|a| + sum m^{1/2}|b|)
  double error_bar = 0.0;      // grid_step * sqrt(2)/2 * gradient_bound
  int grid_points = 0;
};

// Grid maximum of |F_x - phi_x| over [-1/2, 1/2]^2. Both functions are
// band-limited with frequencies <= R in y-units, so the grid max misses the
// true sup by at most error_bar.
inline SupDifferenceReport sup_difference_with_partition(const CoefficientVector& coeffs,
                                                         double x1, double x2,
                                                         const DerandomizationConfig& config,
                                                         const ArcPartition& partition) {
  config.validate();
  const auto b = b_coefficients(coeffs, x1, x2, partition);
  const int half = static_cast<int>(std::ceil(0.5 / config.grid_step));
  double worst = 0.0;
  int count = 0;
  for (int i = -half; i <= half; ++i) {
    const double y1 = std::max(-0.5, std::min(0.5, i * config.grid_step));
    for (int j = -half; j <= half; ++j) {
      const double y2 = std::max(-0.5, std::min(0.5, j * config.grid_step));
      const double diff = window(coeffs, x1, x2, config.R, y1, y2) -
                          detail::phi_from_b(partition, b, config.R, y1, y2);
      worst = std::max(worst, std::abs(diff));
      ++count;
    }
  }
  SupDifferenceReport report;
  report.grid_max = worst;
  double l1a = 0.0;
  for (const auto& c : coeffs.a) l1a += std::abs(c);
  double l1b = 0.0;
  for (std::size_t k = 0; k < partition.kept.size(); ++k)
    l1b += std::sqrt(partition.kept[k].mass) * std::abs(b[k]);
  report.gradient_bound = kTwoPi * config.R * (l1a + l1b);
  report.error_bar = config.grid_step * 0.7071067811865476 * report.gradient_bound;
  report.grid_points = count;
  return report;
}

inline SupDifferenceReport sup_difference(const CoefficientVector& coeffs, double x1,
                                          double x2, const DerandomizationConfig& config) {
  config.validate();
  const SpectralMeasure mu_f = from_coefficients(coeffs);
  const ArcPartition partition = arc_partition(mu_f, coeffs.set, config.K, config.delta);
  if (partition.kept.empty())
    throw std::invalid_argument("sup_difference: no arcs were kept");
  return sup_difference_with_partition(coeffs, x1, x2, config, partition);
}

struct MomentIdentityReport {
  int l = 0;
  int grid_n = 0;
  double integral_estimate = 0.0;
  long long count = 0;
  double relative_gap = 0.0;
};

// int_{T^2} |sum_xi e(<xi,x>)|^{2l} dx equals the zero-sum 2l-tuple count.
// A uniform n x n grid integrates trigonometric polynomials exactly as long
// as no nonzero frequency is a multiple of n; all frequencies here have
// coordinates bounded by 2l * max|xi_i|, so grid_n must exceed that.
inline MomentIdentityReport moment_identity(const LatticePointSet& set, int l, int grid_n,
                                            int l3_cap = 512) {
  if (l < 1 || l > 3) throw std::invalid_argument("moment_identity: l must be in {1,2,3}");
  if (grid_n < 4 || (grid_n & (grid_n - 1)) != 0)
    throw std::invalid_argument("moment_identity: grid_n must be a power of two >= 4");
  std::int64_t maxcoord = 0;
  for (const auto& p : set.points)
    maxcoord = std::max({maxcoord, std::abs(p.x), std::abs(p.y)});
  if (grid_n <= 2 * l * maxcoord)
    throw std::invalid_argument(
        "moment_identity: insufficient grid_n for exactness; need grid_n > 2*l*max|xi_i|");

  const std::size_t n = static_cast<std::size_t>(grid_n);
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t gi) {
    std::vector<double> vals(n);
    const double x1 = static_cast<double>(gi) / grid_n;
    for (std::size_t gj = 0; gj < n; ++gj) {
      const double x2 = static_cast<double>(gj) / grid_n;
      std::complex<double> s{0.0, 0.0};
      for (const auto& p : set.points) {
        const double phase =
            kTwoPi * (static_cast<double>(p.x) * x1 + static_cast<double>(p.y) * x2);
        s += std::complex<double>{std::cos(phase), std::sin(phase)};
      }
      vals[gj] = std::pow(std::norm(s), l);
    }
    rows[gi] = pairwise_mean(vals);
  });

  MomentIdentityReport report;
  report.l = l;
  report.grid_n = grid_n;
  report.integral_estimate = pairwise_mean(rows);
  report.count = count_correlations(set, l, l3_cap).total_count;
  report.relative_gap = std::abs(report.integral_estimate - static_cast<double>(report.count)) /
                        static_cast<double>(report.count);
  return report;
}

struct ArcGaussianity {
  int k = 0;
  double mass = 0.0;
  int n_frequencies = 0;
  double mean_re = 0.0, mean_im = 0.0;
  double second_moment = 0.0;  // E|b_k|^2, exactly 1 in torus average
  double fourth_moment = 0.0;  // E|b_k|^4, 2 for a complex Gaussian
  double ks_real = 0.0, ks_imag = 0.0;  // against N(0, 1/2)
  bool single_frequency = false;
  bool flagged_non_gaussian = false;
};

struct GaussianityReport {
  std::vector<ArcGaussianity> arcs;
  double max_pairwise_correlation = 0.0;  // over distinct non-antipodal arcs
  int n_centers = 0;
};

// Statistics of b_k over uniform random centres.
inline GaussianityReport gaussianity_report(const CoefficientVector& coeffs,
                                            const ArcPartition& partition, int n_centers,
                                            std::uint64_t seed) {
  if (n_centers < 1000)
    throw std::invalid_argument("gaussianity_report: need n_centers >= 1000");
  if (partition.kept.empty())
    throw std::invalid_argument("gaussianity_report: empty kept-arc set");
  const std::size_t n_arcs = partition.kept.size();
  const std::size_t n = static_cast<std::size_t>(n_centers);

  std::vector<std::complex<double>> b_all(n_arcs * n);
  parallel_for(n, [&](std::size_t i) {
    CounterRng rng(seed, i);
    const double x1 = rng.next_unit();
    const double x2 = rng.next_unit();
    const auto b = b_coefficients(coeffs, x1, x2, partition);
    for (std::size_t k = 0; k < n_arcs; ++k) b_all[k * n + i] = b[k];
  });

  GaussianityReport report;
  report.n_centers = n_centers;
  const auto normal_half = [](double t) { return normal_cdf(0.0, std::sqrt(0.5), t); };
  for (std::size_t k = 0; k < n_arcs; ++k) {
    ArcGaussianity arc;
    arc.k = partition.kept[k].k;
    arc.mass = partition.kept[k].mass;
    arc.n_frequencies = static_cast<int>(partition.kept[k].frequencies.size());
    std::vector<double> re(n), im(n), m2(n), m4(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto b = b_all[k * n + i];
      re[i] = b.real();
      im[i] = b.imag();
      m2[i] = std::norm(b);
      m4[i] = m2[i] * m2[i];
    }
    arc.mean_re = pairwise_mean(re);
    arc.mean_im = pairwise_mean(im);
    arc.second_moment = pairwise_mean(m2);
    arc.fourth_moment = pairwise_mean(m4);
    arc.ks_real = ks_vs_cdf(EmpiricalDistribution(re, {seed, kGeneratorId, "Re b_k"}),
                            normal_half);
    arc.ks_imag = ks_vs_cdf(EmpiricalDistribution(im, {seed, kGeneratorId, "Im b_k"}),
                            normal_half);
    arc.single_frequency = arc.n_frequencies == 1;
    // A single plane wave has |b| = 1 identically; more generally a fourth
    // moment far below the complex-Gaussian value 2 marks a degenerate arc.
    arc.flagged_non_gaussian = arc.single_frequency || arc.fourth_moment < 1.5;
    report.arcs.push_back(arc);
  }

  for (std::size_t k = 0; k < n_arcs; ++k) {
    const int antipode_k = partition.kept[k].k > 0 ? partition.kept[k].k - partition.K
                                                   : partition.kept[k].k + partition.K;
    for (std::size_t k2 = k + 1; k2 < n_arcs; ++k2) {
      if (partition.kept[k2].k == antipode_k) continue;
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i)
        acc += b_all[k * n + i] * std::conj(b_all[k2 * n + i]);
      report.max_pairwise_correlation =
          std::max(report.max_pairwise_correlation, std::abs(acc) / static_cast<double>(n));
    }
  }
  return report;
}

}  // namespace plancklab
