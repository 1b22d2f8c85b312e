// Stationary Gaussian fields with spectral measure on the unit circle.
//
// For a purely atomic symmetric measure the field is the random trigonometric
// sum F(x) = sum_j X_j e(<u_j, x>) with conjugate-paired complex Gaussian
// amplitudes, E|X_j|^2 = sigma_j (components carry variance sigma_j/2). The
// ball-averaged mass reduces exactly to a kernel quadratic form:
//
//     (1/pi R^2) int_{B(R)} |F|^2 = sum_{j,j'} X_j conj(X_j') D(R |u_j - u_j'|),
//
// which equals re^T K re + im^T K im for the real symmetric kernel matrix K.
// Continuous spectral parts are approximated by equal-mass quantile atoms;
// mixtures combine independent atomic and continuous amplitude sets with
// weights sqrt(alpha), sqrt(beta).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plancklab/empirical.hpp"
#include "plancklab/kernel.hpp"
#include "plancklab/measure.hpp"
#include "plancklab/parallel.hpp"
#include "plancklab/quad.hpp"
#include "plancklab/rng.hpp"

namespace plancklab {

struct AtomicFieldSample {
  std::vector<double> angles;                    // sorted, antipode-paired
  std::vector<double> masses;                    // sigma_j
  std::vector<std::complex<double>> amplitudes;  // conj-paired: X at theta+1/2 is conj(X)
};

namespace detail {

// Representative/partner indexing of a symmetric sorted atom list. Each
// antipodal pair has exactly one member with angle < 1/2.
struct PairLayout {
  std::vector<std::size_t> representatives;  // angles < 1/2, in angle order
  std::vector<std::size_t> partner;          // partner[i] for every index
};

inline PairLayout pair_layout(const std::vector<MeasureAtom>& atoms) {
  PairLayout layout;
  layout.partner.assign(atoms.size(), atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].angle >= 0.5) continue;
    const double target = atoms[i].angle + 0.5;
    std::size_t match = atoms.size();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (std::abs(atoms[j].angle - target) <= 1e-9) {
        match = j;
        break;
      }
    }
    if (match == atoms.size())
      throw std::invalid_argument("atom list is not antipode-paired");
    layout.representatives.push_back(i);
    layout.partner[i] = match;
    layout.partner[match] = i;
  }
  if (2 * layout.representatives.size() != atoms.size())
    throw std::invalid_argument("atom list is not antipode-paired");
  return layout;
}

// Chord length between two circle points given by angles in [0, 1).
inline double chord(double theta1, double theta2) {
  return 2.0 * std::abs(std::sin(3.141592653589793238462643383279 * (theta1 - theta2)));
}

}  // namespace detail

// One realisation of F_{mu_A}: per antipodal pair, X = A + iB with A, B
// independent N(0, sigma/2); the partner amplitude is conj(X).
inline AtomicFieldSample sample_atomic_field(const SpectralMeasure& mu_A,
                                             std::uint64_t seed) {
  if (!mu_A.is_purely_atomic())
    throw std::invalid_argument("sample_atomic_field: measure must be purely atomic");
  const auto& atoms = mu_A.atoms();
  const auto layout = detail::pair_layout(atoms);

  AtomicFieldSample s;
  s.angles.reserve(atoms.size());
  s.masses.reserve(atoms.size());
  for (const auto& a : atoms) {
    s.angles.push_back(a.angle);
    s.masses.push_back(a.mass);
  }
  s.amplitudes.assign(atoms.size(), {0.0, 0.0});
  CounterRng rng(seed, 0);
  for (const std::size_t i : layout.representatives) {
    double g0, g1;
    rng.next_gauss_pair(g0, g1);
    const double std_comp = std::sqrt(0.5 * atoms[i].mass);
    const std::complex<double> x{std_comp * g0, std_comp * g1};
    s.amplitudes[i] = x;
    s.amplitudes[layout.partner[i]] = std::conj(x);
  }
  return s;
}

// Field value at a point; real by conjugate pairing.
inline double field_eval(const AtomicFieldSample& s, double x1, double x2) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < s.angles.size(); ++j) {
    const double a = kTwoPi * s.angles[j];
    const double phase = kTwoPi * (std::cos(a) * x1 + std::sin(a) * x2);
    acc += s.amplitudes[j] * std::complex<double>{std::cos(phase), std::sin(phase)};
  }
  if (std::abs(acc.imag()) > 1e-9)
    throw std::logic_error("field_eval: imaginary residue exceeds tolerance");
  return acc.real();
}

// m equal-mass atoms at the quantile angles of a continuous measure,
// computed per half-circle and mirrored so the output is exactly symmetric.
inline SpectralMeasure discretize_continuous(const SpectralMeasure& mu_B, int m) {
  if (!mu_B.is_purely_continuous())
    throw std::invalid_argument("discretize_continuous: measure must be continuous");
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("discretize_continuous: m must be even and >= 2");

  // Pieces restricted to [0, 1/2) hold exactly half the mass by symmetry.
  std::vector<DensityPiece> half;
  for (const auto& p : mu_B.density_pieces())
    if (p.begin < 0.5) half.push_back({p.begin, std::min(p.end, 0.5), p.height});

  const int pairs = m / 2;
  std::vector<MeasureAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < pairs; ++i) {
    const double target = (i + 0.5) / static_cast<double>(m);  // mass within the half
    double cum = 0.0;
    double q = 0.0;
    bool found = false;
    for (const auto& p : half) {
      const double piece_mass = p.height * (p.end - p.begin);
      if (cum + piece_mass >= target) {
        q = p.begin + (target - cum) / p.height;
        found = true;
        break;
      }
      cum += piece_mass;
    }
    if (!found) q = half.back().end;  // rounding at the very top quantile
    atoms.push_back({q, 1.0 / m});
    atoms.push_back({q + 0.5, 1.0 / m});
  }
  return SpectralMeasure::purely_atomic(std::move(atoms));
}

// Covariance E[F(x)F(y)] = int e(<x-y, lambda>) dmu(lambda) at v = x - y.
// Atom sum is exact; the continuous part is integrated per piece with a
// Gauss-Legendre rule sized to the oscillation count.
inline double covariance(const SpectralMeasure& mu, double v1, double v2) {
  mu.validate();
  if (mu.is_empty()) throw std::invalid_argument("covariance: empty measure");
  double acc = 0.0;
  for (const auto& a : mu.atoms()) {
    const double t = kTwoPi * a.angle;
    acc += mu.atomic_weight() * a.mass *
           std::cos(kTwoPi * (v1 * std::cos(t) + v2 * std::sin(t)));
  }
  if (mu.continuous_weight() > 0.0) {
    const double speed = std::sqrt(v1 * v1 + v2 * v2);
    for (const auto& p : mu.density_pieces()) {
      const int nodes = std::min(
          20000, 24 + static_cast<int>(std::ceil(20.0 * speed * (p.end - p.begin))));
      acc += mu.continuous_weight() * p.height *
             integrate_gl(
                 [&](double theta) {
                   const double t = kTwoPi * theta;
                   return std::cos(kTwoPi * (v1 * std::cos(t) + v2 * std::sin(t)));
                 },
                 p.begin, p.end, nodes);
    }
  }
  return acc;
}

namespace detail {

// Dense disk-kernel matrix K_{jj'} = D(R * |u_j - u_j'|) for fixed angles.
class BallMassKernel {
 public:
  BallMassKernel(const std::vector<double>& angles, double R)
      : m_(angles.size()), k_(angles.size() * angles.size()) {
    for (std::size_t i = 0; i < m_; ++i) {
      k_[i * m_ + i] = 1.0;
      for (std::size_t j = i + 1; j < m_; ++j) {
        const double v = disk_kernel(R * chord(angles[i], angles[j]));
        k_[i * m_ + j] = v;
        k_[j * m_ + i] = v;
      }
    }
  }

  // re^T K re + im^T K im, the exact ball mass of amplitudes re + i*im.
  double quadratic(const std::vector<double>& re, const std::vector<double>& im) const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &k_[i * m_];
      double sr = 0.0, si = 0.0;
      for (std::size_t j = 0; j < m_; ++j) {
        sr += row[j] * re[j];
        si += row[j] * im[j];
      }
      total += re[i] * sr + im[i] * si;
    }
    return total;
  }

 private:
  std::size_t m_;
  std::vector<double> k_;
};

inline double clamp_mass(double v, const char* what) {
  if (v < 0.0) {
    if (v < -1e-9) throw std::logic_error(std::string(what) + ": negative mass beyond tolerance");
    return 0.0;
  }
  return v;
}

}  // namespace detail

// (1/pi R^2) int_{B(R)} |F|^2 for one realisation.
inline double ball_mass(const AtomicFieldSample& s, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("ball_mass: R must be > 0");
  const std::size_t m = s.angles.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += std::norm(s.amplitudes[i]);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double k = disk_kernel(R * detail::chord(s.angles[i], s.angles[j]));
      total += 2.0 * k *
               (s.amplitudes[i].real() * s.amplitudes[j].real() +
                s.amplitudes[i].imag() * s.amplitudes[j].imag());
    }
  }
  return detail::clamp_mass(total, "ball_mass");
}

struct FieldSpec {
  SpectralMeasure measure;
  int discretization_m = 256;  // atoms approximating the continuous part
  double R = 1.0;

  void validate() const {
    measure.validate();
    if (measure.is_empty()) throw std::invalid_argument("FieldSpec: empty measure");
    if (!(R > 0.0)) throw std::invalid_argument("FieldSpec: R must be > 0");
    if (measure.continuous_weight() > 0.0 &&
        (discretization_m < 2 || discretization_m % 2 != 0))
      throw std::invalid_argument("FieldSpec: discretization_m must be even and >= 2");
  }
};

// n independent ball-mass draws. The combined field is
// sqrt(alpha) F_A + sqrt(beta) F_B with independent amplitude sets drawn from
// separate sub-streams (lane 0 atomic, lane 1 continuous); the kernel matrix
// over the combined atom layout is built once.
inline EmpiricalDistribution sample_ball_mass(const FieldSpec& spec, int n,
                                              std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample_ball_mass: n must be >= 1");
  const LebesgueDecomposition parts = lebesgue_decompose(spec.measure);

  std::vector<double> angles;
  std::vector<double> comp_std;  // per-atom component std dev
  detail::PairLayout layout_a, layout_b;
  std::size_t offset_b = 0;
  if (parts.alpha > 0.0) {
    const auto& atoms = parts.atomic.atoms();
    layout_a = detail::pair_layout(atoms);
    for (const auto& a : atoms) {
      angles.push_back(a.angle);
      comp_std.push_back(std::sqrt(0.5 * parts.alpha * a.mass));
    }
  }
  if (parts.beta > 0.0) {
    const SpectralMeasure approx =
        discretize_continuous(parts.continuous, spec.discretization_m);
    const auto& atoms = approx.atoms();
    layout_b = detail::pair_layout(atoms);
    offset_b = angles.size();
    for (const auto& a : atoms) {
      angles.push_back(a.angle);
      comp_std.push_back(std::sqrt(0.5 * parts.beta * a.mass));
    }
  }

  const detail::BallMassKernel kernel(angles, spec.R);
  std::vector<double> values(static_cast<std::size_t>(n));
  parallel_for(values.size(), [&](std::size_t i) {
    std::vector<double> re(angles.size(), 0.0), im(angles.size(), 0.0);
    const auto draw = [&](const detail::PairLayout& layout, std::size_t offset,
                          std::uint64_t lane) {
      CounterRng rng(seed, i, lane);
      for (const std::size_t rep : layout.representatives) {
        double g0, g1;
        rng.next_gauss_pair(g0, g1);
        const std::size_t a = offset + rep;
        const std::size_t b = offset + layout.partner[rep];
        re[a] = comp_std[a] * g0;
        im[a] = comp_std[a] * g1;
        re[b] = re[a];
        im[b] = -im[a];
      }
    };
    if (!layout_a.partner.empty()) draw(layout_a, 0, 0);
    if (!layout_b.partner.empty()) draw(layout_b, offset_b, 1);
    values[i] = detail::clamp_mass(kernel.quadratic(re, im), "sample_ball_mass");
  });
  return EmpiricalDistribution(std::move(values),
                               {seed, kGeneratorId, "ball-mass R=" + std::to_string(spec.R)});
}

// W(mu_A) = sum over all atoms of |X|^2 with conjugate pairing: each
// antipodal pair contributes 2|X|^2.
inline EmpiricalDistribution sample_w(const SpectralMeasure& mu_A, int n,
                                      std::uint64_t seed) {
  if (!mu_A.is_purely_atomic())
    throw std::invalid_argument("sample_w: measure must be purely atomic");
  if (n < 1) throw std::invalid_argument("sample_w: n must be >= 1");
  const auto& atoms = mu_A.atoms();
  const auto layout = detail::pair_layout(atoms);
  std::vector<double> values(static_cast<std::size_t>(n));
  parallel_for(values.size(), [&](std::size_t i) {
    CounterRng rng(seed, i);
    double w = 0.0;
    for (const std::size_t rep : layout.representatives) {
      double g0, g1;
      rng.next_gauss_pair(g0, g1);
      const double half_var = 0.5 * atoms[rep].mass;
      w += 2.0 * half_var * (g0 * g0 + g1 * g1);
    }
    values[i] = w;
  });
  return EmpiricalDistribution(std::move(values), {seed, kGeneratorId, "W(mu_A)"});
}

struct WMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Closed-form moments of W. Mean is sum(sigma) = 1; each antipodal pair
// contributes Var(2|X|^2) = 4 sigma^2, i.e. Var(W) = 2 * sum over all atoms
// of sigma^2. The formula is gated on the Monte Carlo oracle in the tests.
inline WMoments w_moments(const SpectralMeasure& mu_A) {
  if (!mu_A.is_purely_atomic())
    throw std::invalid_argument("w_moments: measure must be purely atomic");
  double var = 0.0;
  for (const auto& a : mu_A.atoms()) var += 2.0 * a.mass * a.mass;
  return {1.0, var};
}

// Spatial averages of F^2 over B(R) for one realisation of a field with
// non-atomic spectral measure, along increasing R.
inline std::vector<std::pair<double, double>> ergodic_average(
    const FieldSpec& spec, const std::vector<double>& R_list, std::uint64_t seed) {
  spec.validate();
  if (spec.measure.atomic_weight() > 0.0)
    throw std::invalid_argument("ergodic_average: measure must have no atoms");
  if (R_list.empty()) throw std::invalid_argument("ergodic_average: empty R list");
  const SpectralMeasure approx =
      discretize_continuous(spec.measure, spec.discretization_m);
  const AtomicFieldSample sample = sample_atomic_field(approx, seed);
  std::vector<std::pair<double, double>> rows;
  rows.reserve(R_list.size());
  for (const double R : R_list) rows.emplace_back(R, ball_mass(sample, R));
  return rows;
}

}  // namespace plancklab
