// Toral eigenfunctions and the Planck-scale mass functional.
//
// An eigenfunction with eigenvalue 4*pi^2*E is the trigonometric polynomial
//
//     f(x) = sum_{|xi|^2 = E} a_xi e(<x, xi>),      e(t) = exp(2*pi*i*t),
//
// with conjugate-symmetric, l2-normalised coefficients. The ball-averaged
// mass M_f(x, r) = (1/pi r^2) int_{B(x,r)} |f|^2 expands exactly into
//
//     M_f(x, r) = sum_{xi, xi'} a_xi conj(a_xi') e(<xi - xi', x>) D(r |xi - xi'|)
//
// with D the disk kernel; MassEvaluator groups equal difference vectors and
// caches kernel values so sampling many ball centres costs O(#differences)
// per centre. A polar tensor quadrature of |f|^2 is kept alongside as an
// independent oracle.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "plancklab/empirical.hpp"
#include "plancklab/kernel.hpp"
#include "plancklab/lattice.hpp"
#include "plancklab/parallel.hpp"
#include "plancklab/quad.hpp"
#include "plancklab/rng.hpp"

namespace plancklab {

struct CoefficientVector {
  LatticePointSet set;
  std::vector<std::complex<double>> a;  // a[i] belongs to set.points[i]
};

namespace detail {

inline std::size_t index_of(const LatticePointSet& set, const LatticePoint& p) {
  const auto it = std::lower_bound(set.points.begin(), set.points.end(), p);
  if (it == set.points.end() || !(*it == p))
    throw std::invalid_argument("lattice point not in set");
  return static_cast<std::size_t>(it - set.points.begin());
}

}  // namespace detail

// Checks conjugate symmetry a_{-xi} = conj(a_xi) and l2 normalisation.
inline void validate_coefficients(const CoefficientVector& coeffs,
                                  double norm_tol = 1e-10) {
  const auto n = coeffs.set.points.size();
  if (coeffs.a.size() != n)
    throw std::invalid_argument("coefficient vector does not match the frequency set");
  if (n == 0) throw std::invalid_argument("empty frequency set");
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    norm += std::norm(coeffs.a[i]);
    const auto& p = coeffs.set.points[i];
    const std::size_t j = detail::index_of(coeffs.set, {-p.x, -p.y});
    if (std::abs(coeffs.a[j] - std::conj(coeffs.a[i])) > 1e-12)
      throw std::invalid_argument("coefficients violate conjugate symmetry");
  }
  if (std::abs(norm - 1.0) > norm_tol)
    throw std::invalid_argument("coefficients are not l2-normalised: sum |a|^2 = " +
                                std::to_string(norm));
}

enum class CoefficientModel { flat, random_sphere };

// flat: a_xi = 1/sqrt(N). random_sphere: independent standard complex
// Gaussians on one representative per antipodal pair, extended by
// conjugation and normalised; deterministic per seed.
inline CoefficientVector generate_coefficients(const LatticePointSet& set,
                                               CoefficientModel model,
                                               std::uint64_t seed = 0) {
  const int n = set.multiplicity();
  if (n == 0) throw std::invalid_argument("generate_coefficients: empty frequency set");
  if (n % 2 != 0)
    throw std::invalid_argument("generate_coefficients: frequency set not negation-closed");

  CoefficientVector coeffs;
  coeffs.set = set;
  coeffs.a.assign(static_cast<std::size_t>(n), {0.0, 0.0});
  if (model == CoefficientModel::flat) {
    const double v = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& c : coeffs.a) c = {v, 0.0};
    return coeffs;
  }

  // Representatives in sorted order: the lexicographically larger point of
  // each antipodal pair, so the pair index is stable across runs.
  std::uint64_t pair_index = 0;
  double norm = 0.0;
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const auto& p = set.points[i];
    const LatticePoint neg{-p.x, -p.y};
    if (neg < p) continue;  // handled from the representative side
    CounterRng rng(seed, pair_index++);
    double g0, g1;
    rng.next_gauss_pair(g0, g1);
    const std::complex<double> z{g0, g1};
    coeffs.a[i] = z;
    coeffs.a[detail::index_of(set, neg)] = std::conj(z);
    norm += 2.0 * std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (auto& c : coeffs.a) c *= inv;
  return coeffs;
}

struct FlatnessReport {
  double max_ratio = 0.0;  // N * max |a_xi|^2
  bool pass = false;
};

// A2 flatness check: no coefficient may carry more than u(N)/N of the mass.
inline FlatnessReport check_flatness(const CoefficientVector& coeffs, double u_of_N) {
  validate_coefficients(coeffs);
  double worst = 0.0;
  for (const auto& c : coeffs.a) worst = std::max(worst, std::norm(c));
  FlatnessReport r;
  r.max_ratio = worst * static_cast<double>(coeffs.set.multiplicity());
  r.pass = r.max_ratio <= u_of_N * (1.0 + 1e-12);
  return r;
}

// Pointwise evaluation of f. The imaginary part must vanish by conjugate
// symmetry; a residue above 1e-9 * N signals a broken coefficient vector.
inline double evaluate(const CoefficientVector& coeffs, double x1, double x2) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const auto& p = coeffs.set.points[i];
    const double phase = kTwoPi * (static_cast<double>(p.x) * x1 + static_cast<double>(p.y) * x2);
    acc += coeffs.a[i] * std::complex<double>{std::cos(phase), std::sin(phase)};
  }
  if (std::abs(acc.imag()) > 1e-9 * static_cast<double>(coeffs.set.multiplicity()))
    throw std::logic_error("evaluate: imaginary residue exceeds tolerance");
  return acc.real();
}

// Closed-form ball-mass evaluator for a fixed radius r.
class MassEvaluator {
 public:
  MassEvaluator(const CoefficientVector& coeffs, double r) : radius_(r) {
    if (!(r > 0.0)) throw std::invalid_argument("MassEvaluator: r must be > 0");
    validate_coefficients(coeffs);

    // Group a_xi * conj(a_xi') by the difference xi - xi'. Since
    // C_{-d} = conj(C_d) always holds, only one representative per +-d pair
    // is kept and contributes twice its real part.
    std::map<std::pair<std::int64_t, std::int64_t>, std::complex<double>> groups;
    const auto& pts = coeffs.set.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const std::int64_t dx = pts[i].x - pts[j].x;
        const std::int64_t dy = pts[i].y - pts[j].y;
        if (dx < 0 || (dx == 0 && dy <= 0)) continue;  // keep the positive half
        groups[{dx, dy}] += coeffs.a[i] * std::conj(coeffs.a[j]);
      }
    }
    double diag = 0.0;
    for (const auto& c : coeffs.a) diag += std::norm(c);
    diagonal_ = diag;  // D(0) = 1

    std::map<std::int64_t, double> kernel_cache;
    terms_.reserve(groups.size());
    for (const auto& [d, c] : groups) {
      const std::int64_t len2 = d.first * d.first + d.second * d.second;
      auto it = kernel_cache.find(len2);
      if (it == kernel_cache.end()) {
        const double k = disk_kernel(r * std::sqrt(static_cast<double>(len2)));
        it = kernel_cache.emplace(len2, k).first;
      }
      terms_.push_back({static_cast<double>(d.first), static_cast<double>(d.second),
                        2.0 * c.real() * it->second, -2.0 * c.imag() * it->second});
    }
  }

  double radius() const { return radius_; }

  double operator()(double x1, double x2) const {
    double m = diagonal_;
    for (const auto& t : terms_) {
      const double phase = kTwoPi * (t.dx * x1 + t.dy * x2);
      m += t.cos_coeff * std::cos(phase) + t.sin_coeff * std::sin(phase);
    }
    if (m < 0.0) {
      if (m < -1e-9) throw std::logic_error("mass_closed_form: negative mass beyond tolerance");
      m = 0.0;
    }
    return m;
  }

 private:
  struct Term {
    double dx, dy;
    double cos_coeff;  // 2 Re(C_d) * D(r|d|)
    double sin_coeff;  // -2 Im(C_d) * D(r|d|)
  };
  double radius_ = 0.0;
  double diagonal_ = 0.0;
  std::vector<Term> terms_;
};

inline double mass_closed_form(const CoefficientVector& coeffs, double x1, double x2,
                               double r) {
  return MassEvaluator(coeffs, r)(x1, x2);
}

// Polar tensor quadrature of the normalised disk average of `integrand`
// around (x1, x2): Gauss-Legendre in the radius, trapezoid in the angle.
// Exact weight normalisation: a constant integrand averages to itself.
template <class F>
double disk_average_quadrature(F&& integrand, double x1, double x2, double r,
                               int n_radial, int n_angular) {
  if (n_radial < 8 || n_angular < 8)
    throw std::invalid_argument("disk_average_quadrature: need n_radial, n_angular >= 8");
  const GaussLegendre gl = gauss_legendre(n_radial);
  double total = 0.0;
  for (int i = 0; i < n_radial; ++i) {
    const double rho = 0.5 * (gl.nodes[i] + 1.0);  // [0, 1]
    const double wr = 0.5 * gl.weights[i] * rho;
    double ring = 0.0;
    for (int j = 0; j < n_angular; ++j) {
      const double phi = kTwoPi * j / n_angular;
      ring += integrand(x1 + r * rho * std::cos(phi), x2 + r * rho * std::sin(phi));
    }
    total += wr * ring;
  }
  return total * 2.0 / n_angular;
}

// Quadrature oracle for M_f(x, r). Doubling the node counts moves the result
// by < 1e-8 at the defaults as long as r*sqrt(E) stays at desk scale.
inline double mass_quadrature(const CoefficientVector& coeffs, double x1, double x2,
                              double r, int n_radial = 64, int n_angular = 256) {
  validate_coefficients(coeffs);
  return disk_average_quadrature(
      [&](double y1, double y2) {
        const double v = evaluate(coeffs, y1, y2);
        return v * v;
      },
      x1, x2, r, n_radial, n_angular);
}

struct MassSample {
  double x1 = 0.0, x2 = 0.0;
  double r = 0.0;
  double value = 0.0;
};

// Monte Carlo over uniform ball centres at Planck radius r = R/sqrt(E).
// Centre i comes from CounterRng(seed, i), so the rows are schedule-free.
inline std::vector<MassSample> sample_mass_detailed(const CoefficientVector& coeffs,
                                                    double R, int n_centers,
                                                    std::uint64_t seed) {
  if (!(R > 1.0)) throw std::invalid_argument("sample_mass: R must be > 1");
  if (n_centers < 1) throw std::invalid_argument("sample_mass: n_centers must be >= 1");
  const double r = R / std::sqrt(static_cast<double>(coeffs.set.energy));
  const MassEvaluator eval(coeffs, r);
  std::vector<MassSample> rows(static_cast<std::size_t>(n_centers));
  parallel_for(rows.size(), [&](std::size_t i) {
    CounterRng rng(seed, i);
    const double x1 = rng.next_unit();
    const double x2 = rng.next_unit();
    rows[i] = {x1, x2, r, eval(x1, x2)};
  });
  return rows;
}

inline EmpiricalDistribution sample_mass(const CoefficientVector& coeffs, double R,
                                         int n_centers, std::uint64_t seed) {
  const auto rows = sample_mass_detailed(coeffs, R, n_centers, seed);
  std::vector<double> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].value;
  return EmpiricalDistribution(
      std::move(values),
      {seed, kGeneratorId,
       "mass E=" + std::to_string(coeffs.set.energy) + " R=" + std::to_string(R)});
}

// order 2: mean of (M - 1)^2 (centred at the exact torus mean);
// order 3: raw third moment, mean of M^3.
inline double mass_moment(const EmpiricalDistribution& dist, int order) {
  const auto& s = dist.samples();
  if (s.empty()) throw std::invalid_argument("mass_moment: empty distribution");
  if (order == 2) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = s[i] - 1.0;
      v[i] = d * d;
    }
    return pairwise_mean(v);
  }
  if (order == 3) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s[i] * s[i] * s[i];
    return pairwise_mean(v);
  }
  throw std::invalid_argument("mass_moment: order must be 2 or 3");
}

}  // namespace plancklab
