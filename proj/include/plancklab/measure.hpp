// Probability measures on the unit circle R/Z.
//
// A SpectralMeasure is an atomic part (weight alpha, atoms summing to 1)
// plus a continuous part (weight beta, density from the uniform /
// piecewise-constant families). Both parts are antipode-symmetric:
// mu(I) = mu(-I) on the circle means an atom at theta is mirrored at
// theta + 1/2 and the density satisfies d(theta) = d(theta + 1/2).
//
// w1_distance computes the circle Wasserstein-1 distance exactly for these
// families via min_c int_0^1 |F_mu(t) - F_nu(t) - c| dt, the offset c being
// the Lebesgue median of the piecewise-affine CDF difference.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plancklab/eigenfunction.hpp"
#include "plancklab/lattice.hpp"

namespace plancklab {

inline constexpr double kAngleMergeTol = 1e-12;

struct MeasureAtom {
  double angle = 0.0;  // in [0, 1); the circle point is e(angle)
  double mass = 0.0;   // within the atomic part, masses sum to 1
};

struct DensityPiece {
  double begin = 0.0;
  double end = 0.0;     // begin < end <= 1
  double height = 0.0;  // constant density on [begin, end)
};

enum class DensityFamily { none, uniform, piecewise_constant };

// Angle of a lattice point on the circle, normalised to [0, 1).
inline double lattice_angle(const LatticePoint& p) {
  double t = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x)) / kTwoPi;
  if (t < 0.0) t += 1.0;
  if (t >= 1.0) t -= 1.0;
  return t;
}

class SpectralMeasure {
 public:
  SpectralMeasure() = default;  // empty measure, both weights zero

  static SpectralMeasure purely_atomic(std::vector<MeasureAtom> atoms) {
    SpectralMeasure m;
    m.atomic_weight_ = 1.0;
    m.atoms_ = std::move(atoms);
    m.canonicalize_atoms();
    m.validate();
    return m;
  }

  static SpectralMeasure uniform() {
    SpectralMeasure m;
    m.continuous_weight_ = 1.0;
    m.family_ = DensityFamily::uniform;
    m.pieces_ = {{0.0, 0.5, 1.0}, {0.5, 1.0, 1.0}};
    m.validate();
    return m;
  }

  static SpectralMeasure piecewise_constant(std::vector<DensityPiece> pieces) {
    SpectralMeasure m;
    m.continuous_weight_ = 1.0;
    m.family_ = DensityFamily::piecewise_constant;
    m.pieces_ = std::move(pieces);
    m.canonicalize_pieces();
    m.validate();
    return m;
  }

  // alpha * atomic_part + beta * continuous_part with alpha + beta = 1.
  static SpectralMeasure mixture(double alpha, const SpectralMeasure& atomic_part,
                                 double beta, const SpectralMeasure& continuous_part) {
    if (std::abs(alpha + beta - 1.0) > 1e-12)
      throw std::invalid_argument("mixture: weights must sum to 1");
    if (alpha < 0.0 || beta < 0.0)
      throw std::invalid_argument("mixture: weights must be nonnegative");
    SpectralMeasure m;
    if (alpha > 0.0) {
      if (!atomic_part.is_purely_atomic())
        throw std::invalid_argument("mixture: first component must be purely atomic");
      m.atoms_ = atomic_part.atoms_;
    }
    if (beta > 0.0) {
      if (!continuous_part.is_purely_continuous())
        throw std::invalid_argument("mixture: second component must be continuous");
      m.family_ = continuous_part.family_;
      m.pieces_ = continuous_part.pieces_;
    }
    m.atomic_weight_ = alpha;
    m.continuous_weight_ = beta;
    m.validate();
    return m;
  }

  // The canonical 4-atom counterexample measure:
  // (1/4)(delta_(1,0) + delta_(0,1) + delta_(-1,0) + delta_(0,-1)).
  static SpectralMeasure cilleruelo() {
    return purely_atomic({{0.0, 0.25}, {0.25, 0.25}, {0.5, 0.25}, {0.75, 0.25}});
  }

  double atomic_weight() const { return atomic_weight_; }
  double continuous_weight() const { return continuous_weight_; }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  DensityFamily density_family() const { return family_; }
  const std::vector<DensityPiece>& density_pieces() const { return pieces_; }

  bool is_empty() const { return atomic_weight_ == 0.0 && continuous_weight_ == 0.0; }
  bool is_purely_atomic() const { return continuous_weight_ == 0.0 && atomic_weight_ > 0.0; }
  bool is_purely_continuous() const {
    return atomic_weight_ == 0.0 && continuous_weight_ > 0.0;
  }

  // CDF of the full measure on [0, 1), right-continuous.
  double cdf(double t) const {
    double f = 0.0;
    for (const auto& a : atoms_)
      if (a.angle <= t) f += atomic_weight_ * a.mass;
    for (const auto& p : pieces_) {
      if (t <= p.begin) continue;
      f += continuous_weight_ * p.height * (std::min(t, p.end) - p.begin);
    }
    return f;
  }

  void validate() const {
    if (is_empty()) {
      if (!atoms_.empty() || !pieces_.empty())
        throw std::invalid_argument("empty measure must have no support");
      return;
    }
    if (std::abs(atomic_weight_ + continuous_weight_ - 1.0) > 1e-12)
      throw std::invalid_argument("measure weights must sum to 1");
    if (atomic_weight_ > 0.0) {
      double sum = 0.0;
      for (const auto& a : atoms_) {
        if (!(a.mass > 0.0)) throw std::invalid_argument("atom masses must be positive");
        if (a.angle < 0.0 || a.angle >= 1.0)
          throw std::invalid_argument("atom angles must lie in [0,1)");
        sum += a.mass;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("atom masses must sum to 1");
      check_atom_symmetry();
    } else if (!atoms_.empty()) {
      throw std::invalid_argument("atoms present with zero atomic weight");
    }
    if (continuous_weight_ > 0.0) {
      if (family_ == DensityFamily::none)
        throw std::invalid_argument("continuous weight without a density family");
      double integral = 0.0;
      for (const auto& p : pieces_) {
        if (!(p.end > p.begin) || p.begin < 0.0 || p.end > 1.0 || p.height < 0.0)
          throw std::invalid_argument("malformed density piece");
        integral += p.height * (p.end - p.begin);
      }
      if (std::abs(integral - 1.0) > 1e-12)
        throw std::invalid_argument("density must integrate to 1");
      check_density_symmetry();
    } else if (!pieces_.empty()) {
      throw std::invalid_argument("density present with zero continuous weight");
    }
  }

 private:
  void canonicalize_atoms() {
    for (auto& a : atoms_) {
      a.angle = a.angle - std::floor(a.angle);
      if (a.angle >= 1.0) a.angle = 0.0;
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const MeasureAtom& l, const MeasureAtom& r) { return l.angle < r.angle; });
    std::vector<MeasureAtom> merged;
    for (const auto& a : atoms_) {
      if (!merged.empty() && a.angle - merged.back().angle <= kAngleMergeTol)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    // Wrap-around merge: an atom at 1 - eps coincides with one at 0.
    if (merged.size() > 1 && (1.0 - merged.back().angle) + merged.front().angle <= kAngleMergeTol) {
      merged.front().mass += merged.back().mass;
      merged.pop_back();
    }
    // Snap antipodal partners to exactly theta + 1/2 so downstream pairing is
    // exact. Genuinely unequal masses are left alone for validation to reject.
    for (auto& a : merged) {
      if (a.angle >= 0.5) continue;
      const double target = a.angle + 0.5;
      for (auto& b : merged) {
        if (std::abs(b.angle - target) <= kAngleMergeTol &&
            std::abs(b.mass - a.mass) <= 1e-12) {
          b.angle = target;
          const double mass = 0.5 * (a.mass + b.mass);
          a.mass = mass;
          b.mass = mass;
          break;
        }
      }
    }
    atoms_ = std::move(merged);
  }

  void canonicalize_pieces() {
    // Split pieces at 1/2 so the antipodal map is a piece-level bijection.
    std::vector<DensityPiece> split;
    for (const auto& p : pieces_) {
      if (p.height == 0.0) continue;
      if (p.begin < 0.5 && p.end > 0.5) {
        split.push_back({p.begin, 0.5, p.height});
        split.push_back({0.5, p.end, p.height});
      } else {
        split.push_back(p);
      }
    }
    std::sort(split.begin(), split.end(),
              [](const DensityPiece& l, const DensityPiece& r) { return l.begin < r.begin; });
    pieces_ = std::move(split);
  }

  void check_atom_symmetry() const {
    for (const auto& a : atoms_) {
      double target = a.angle + 0.5;
      if (target >= 1.0) target -= 1.0;
      bool found = false;
      for (const auto& b : atoms_) {
        if (std::abs(b.angle - target) <= kAngleMergeTol) {
          if (std::abs(b.mass - a.mass) > 1e-12)
            throw std::invalid_argument("antipodal atoms carry unequal masses");
          found = true;
          break;
        }
      }
      if (!found) throw std::invalid_argument("measure is not antipode-symmetric");
    }
  }

  void check_density_symmetry() const {
    for (const auto& p : pieces_) {
      double b0 = p.begin + 0.5, b1 = p.end + 0.5;
      if (b0 >= 1.0) { b0 -= 1.0; b1 -= 1.0; }
      bool found = false;
      for (const auto& q : pieces_) {
        if (std::abs(q.begin - b0) <= 1e-12 && std::abs(q.end - b1) <= 1e-12 &&
            std::abs(q.height - p.height) <= 1e-12) {
          found = true;
          break;
        }
      }
      if (!found) throw std::invalid_argument("density is not antipode-symmetric");
    }
  }

  double atomic_weight_ = 0.0;
  double continuous_weight_ = 0.0;
  std::vector<MeasureAtom> atoms_;
  DensityFamily family_ = DensityFamily::none;
  std::vector<DensityPiece> pieces_;
};

// mu_f = sum |a_xi|^2 delta_{xi/sqrt(E)}: the purely atomic spectral measure
// of an eigenfunction. Zero coefficients contribute no atom.
inline SpectralMeasure from_coefficients(const CoefficientVector& coeffs) {
  validate_coefficients(coeffs);
  std::vector<MeasureAtom> atoms;
  atoms.reserve(coeffs.a.size());
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const double mass = std::norm(coeffs.a[i]);
    if (mass > 0.0) atoms.push_back({lattice_angle(coeffs.set.points[i]), mass});
  }
  if (atoms.empty()) throw std::invalid_argument("from_coefficients: all coefficients vanish");
  return SpectralMeasure::purely_atomic(std::move(atoms));
}

struct LebesgueDecomposition {
  double alpha = 0.0;
  SpectralMeasure atomic;  // empty when alpha = 0
  double beta = 0.0;
  SpectralMeasure continuous;  // empty when beta = 0
};

inline LebesgueDecomposition lebesgue_decompose(const SpectralMeasure& mu) {
  mu.validate();
  LebesgueDecomposition d;
  d.alpha = mu.atomic_weight();
  d.beta = mu.continuous_weight();
  if (d.alpha > 0.0) d.atomic = SpectralMeasure::purely_atomic(mu.atoms());
  if (d.beta > 0.0) {
    d.continuous = mu.density_family() == DensityFamily::uniform
                       ? SpectralMeasure::uniform()
                       : SpectralMeasure::piecewise_constant(mu.density_pieces());
  }
  return d;
}

inline SpectralMeasure recompose(const LebesgueDecomposition& d) {
  if (d.alpha == 0.0) return d.continuous;
  if (d.beta == 0.0) return d.atomic;
  return SpectralMeasure::mixture(d.alpha, d.atomic, d.beta, d.continuous);
}

// ---------------------------------------------------------------------------
// Arc partition (the de-randomisation discretisation of the circle).
// Arcs are I_k = ((k-1)/2K, k/2K] for -K+1 <= k <= K; an arc is kept when
// mu_f(I_k) >= delta. Conjugate symmetry pairs arc k with k +- K.
// ---------------------------------------------------------------------------

struct KeptArc {
  int k = 0;
  double midpoint_angle = 0.0;  // in [0, 1)
  double mass = 0.0;
  std::vector<LatticePoint> frequencies;
};

struct ArcPartition {
  int K = 0;
  double delta = 0.0;
  std::vector<KeptArc> kept;  // ordered by k
  double discarded_mass = 0.0;
};

// Arc index of an angle in [0, 1) under the half-open rule.
inline int arc_index(double angle, int K) {
  const double shifted = angle > 0.5 ? angle - 1.0 : angle;  // (-1/2, 1/2]
  const double t = 2.0 * K * shifted;
  int k = static_cast<int>(std::ceil(t));
  if (k < -K + 1) k = -K + 1;
  if (k > K) k = K;
  return k;
}

inline double arc_midpoint(int k, int K) {
  double mid = (static_cast<double>(k) - 0.5) / (2.0 * K);
  if (mid < 0.0) mid += 1.0;
  return mid;
}

inline ArcPartition arc_partition(const SpectralMeasure& mu_f, const LatticePointSet& set,
                                  int K, double delta) {
  if (K < 1) throw std::invalid_argument("arc_partition: K must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("arc_partition: delta must lie in (0,1)");
  if (!mu_f.is_purely_atomic())
    throw std::invalid_argument("arc_partition: measure must be purely atomic");

  // Match atoms to frequencies by angle.
  std::vector<std::pair<double, LatticePoint>> by_angle;
  by_angle.reserve(set.points.size());
  for (const auto& p : set.points) by_angle.emplace_back(lattice_angle(p), p);
  std::sort(by_angle.begin(), by_angle.end());

  std::map<int, KeptArc> arcs;
  for (const auto& atom : mu_f.atoms()) {
    const int k = arc_index(atom.angle, K);
    auto& arc = arcs[k];
    arc.k = k;
    arc.midpoint_angle = arc_midpoint(k, K);
    arc.mass += atom.mass;
    auto it = std::lower_bound(
        by_angle.begin(), by_angle.end(), atom.angle - 1e-9,
        [](const auto& e, double v) { return e.first < v; });
    bool matched = false;
    for (; it != by_angle.end() && it->first <= atom.angle + 1e-9; ++it) {
      arc.frequencies.push_back(it->second);
      matched = true;
    }
    if (!matched)
      throw std::invalid_argument("arc_partition: atom angle matches no frequency of the set");
  }

  ArcPartition part;
  part.K = K;
  part.delta = delta;
  double kept_mass = 0.0;
  for (auto& [k, arc] : arcs) {
    if (arc.mass >= delta) {
      kept_mass += arc.mass;
      part.kept.push_back(std::move(arc));
    }
  }
  part.discarded_mass = 1.0 - kept_mass;
  return part;
}

// mu_K: kept-arc masses moved to arc midpoints and renormalised.
inline SpectralMeasure discretized_measure(const ArcPartition& part) {
  if (part.kept.empty())
    throw std::invalid_argument("discretized_measure: no arcs were kept");
  double total = 0.0;
  for (const auto& arc : part.kept) total += arc.mass;
  std::vector<MeasureAtom> atoms;
  atoms.reserve(part.kept.size());
  for (const auto& arc : part.kept)
    atoms.push_back({arc.midpoint_angle, arc.mass / total});
  return SpectralMeasure::purely_atomic(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Circle Wasserstein-1 distance, exact for atoms + piecewise-constant parts.
// ---------------------------------------------------------------------------

namespace detail {

struct AffineSegment {
  double length = 0.0;  // t-length
  double g0 = 0.0;      // value at the left end
  double g1 = 0.0;      // value at the right end
};

// Lebesgue median of the value distribution of a piecewise-affine function.
// Flat segments are point masses in value space, so the median may sit
// exactly at a jump; sloped segments spread their length uniformly over the
// value range and can place the median strictly between candidates.
inline double segment_value_median(const std::vector<AffineSegment>& segs) {
  std::vector<double> candidates;
  candidates.reserve(2 * segs.size());
  for (const auto& s : segs) {
    candidates.push_back(std::min(s.g0, s.g1));
    candidates.push_back(std::max(s.g0, s.g1));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const auto measure_below = [&](double c, bool strict) {
    double m = 0.0;
    for (const auto& s : segs) {
      const double lo = std::min(s.g0, s.g1);
      const double hi = std::max(s.g0, s.g1);
      if (hi <= lo) {  // flat segment: point mass at lo
        if (strict ? lo < c : lo <= c) m += s.length;
      } else {
        m += s.length * std::clamp((c - lo) / (hi - lo), 0.0, 1.0);
      }
    }
    return m;
  };

  double total = 0.0;
  for (const auto& s : segs) total += s.length;
  const double target = 0.5 * total;

  double prev_c = candidates.front();
  for (const double c : candidates) {
    const double m_strict = measure_below(c, true);
    const double m_incl = measure_below(c, false);
    if (m_strict < target && target <= m_incl) return c;  // jump covers the target
    if (m_strict >= target) {
      // Crossed by continuous growth strictly inside (prev_c, c).
      const double m_prev = measure_below(prev_c, false);
      const double rate = (m_strict - m_prev) / (c - prev_c);
      return prev_c + (target - m_prev) / rate;
    }
    prev_c = c;
  }
  return candidates.back();
}

inline double segment_abs_integral(const AffineSegment& s, double c) {
  const double u0 = s.g0 - c;
  const double u1 = s.g1 - c;
  if (u0 * u1 >= 0.0) return 0.5 * s.length * (std::abs(u0) + std::abs(u1));
  // Sign change: split at the root of the affine function.
  return 0.5 * s.length * (u0 * u0 + u1 * u1) / std::abs(u1 - u0);
}

}  // namespace detail

// W1 on the circle: min over the rotation offset c of the L1 norm of the CDF
// difference. Exact for the supported measure families.
inline double w1_distance(const SpectralMeasure& mu, const SpectralMeasure& nu) {
  if (mu.is_empty() || nu.is_empty())
    throw std::invalid_argument("w1_distance: empty measure");
  mu.validate();
  nu.validate();

  std::vector<double> breaks{0.0, 1.0};
  for (const auto& a : mu.atoms()) breaks.push_back(a.angle);
  for (const auto& a : nu.atoms()) breaks.push_back(a.angle);
  for (const auto& p : mu.density_pieces()) {
    breaks.push_back(p.begin);
    breaks.push_back(p.end);
  }
  for (const auto& p : nu.density_pieces()) {
    breaks.push_back(p.begin);
    breaks.push_back(p.end);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto density_at = [](const SpectralMeasure& m, double t) {
    for (const auto& p : m.density_pieces())
      if (t >= p.begin && t < p.end) return m.continuous_weight() * p.height;
    return 0.0;
  };

  std::vector<detail::AffineSegment> segs;
  segs.reserve(breaks.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double t0 = breaks[i];
    const double t1 = breaks[i + 1];
    if (t1 <= t0) continue;
    const double g0 = mu.cdf(t0) - nu.cdf(t0);
    const double slope = density_at(mu, t0) - density_at(nu, t0);
    segs.push_back({t1 - t0, g0, g0 + slope * (t1 - t0)});
  }

  const double c = detail::segment_value_median(segs);
  double w1 = 0.0;
  for (const auto& s : segs) w1 += detail::segment_abs_integral(s, c);
  return w1;
}

}  // namespace plancklab
