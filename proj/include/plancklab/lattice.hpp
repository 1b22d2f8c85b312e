// Lattice points on circles and exact spectral-correlation counting.
//
// The frequency set of an eigenvalue E is E(E) = { xi in Z^2 : |xi|^2 = E };
// its size N(E) is the number of representations of E as a sum of two
// squares. count_correlations counts, exactly, the ordered 2l-tuples of
// frequencies with zero vector sum by pairing l-fold sum tables:
//
//     total = sum_s c_l(s) * c_l(-s),   c_l(s) = #{(xi_1..xi_l) : sum = s}.
//
// Everything here is exact integer arithmetic; accumulation uses 128-bit
// integers so N^3-scale counts cannot overflow.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace plancklab {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct LatticePointSet {
  std::int64_t energy = 0;
  std::vector<LatticePoint> points;  // lexicographically sorted, no duplicates

  int multiplicity() const { return static_cast<int>(points.size()); }
};

inline std::int64_t isqrt_floor(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// All integer solutions of x^2 + y^2 = E, in lexicographic order. An empty
// set (N = 0) is a valid result for E with no representation.
inline LatticePointSet enumerate_lattice_points(std::int64_t E) {
  if (E < 1) throw std::invalid_argument("enumerate_lattice_points: E must be >= 1");
  LatticePointSet set;
  set.energy = E;
  const std::int64_t amax = isqrt_floor(E);
  for (std::int64_t a = 0; a <= amax; ++a) {
    const std::int64_t rest = E - a * a;
    const std::int64_t b = isqrt_floor(rest);
    if (b * b != rest) continue;
    set.points.push_back({a, b});
    if (b != 0) set.points.push_back({a, -b});
    if (a != 0) {
      set.points.push_back({-a, b});
      if (b != 0) set.points.push_back({-a, -b});
    }
  }
  std::sort(set.points.begin(), set.points.end());
  set.points.erase(std::unique(set.points.begin(), set.points.end()), set.points.end());
  return set;
}

struct CorrelationReport {
  int l = 0;
  long long total_count = 0;          // ordered 2l-tuples with zero sum
  long long diagonal_main_term = 0;   // (2l)!/(2^l l!) * N^l
  long long residual = 0;             // total_count - diagonal_main_term
  std::optional<double> gamma_exponent;  // log_{N^l} |residual|, when nonzero
};

namespace detail {

// Sum coordinates are bounded by l*sqrt(E) and fit comfortably in 32 bits at
// desk scale (E <= 1e10, l <= 3).
inline std::uint64_t pack_sum(std::int64_t x, std::int64_t y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(x)))
          << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(y)));
}

inline std::uint64_t negate_key(std::uint64_t key) {
  const auto x = static_cast<std::int32_t>(key >> 32);
  const auto y = static_cast<std::int32_t>(key & 0xffffffffULL);
  return pack_sum(-static_cast<std::int64_t>(x), -static_cast<std::int64_t>(y));
}

inline long long checked_narrow(__int128 v, const char* what) {
  if (v > static_cast<__int128>(9223372036854775807LL) || v < 0)
    throw std::overflow_error(std::string(what) + ": count exceeds 64-bit range");
  return static_cast<long long>(v);
}

}  // namespace detail

// Exact count of ordered 2l-tuples over the set with zero vector sum.
// For l = 3 the l-fold sum table takes O(N^3) space; the cap is final --
// approximate or sampled counting is not an acceptable fallback.
inline CorrelationReport count_correlations(const LatticePointSet& set, int l,
                                            int l3_cap = 512) {
  const int n = set.multiplicity();
  if (n < 1) throw std::invalid_argument("count_correlations: empty frequency set");
  if (l < 1 || l > 3) throw std::invalid_argument("count_correlations: l must be in {1,2,3}");
  if (l == 3 && n > l3_cap)
    throw std::invalid_argument("count_correlations: N = " + std::to_string(n) +
                                " exceeds the l=3 cap of " + std::to_string(l3_cap));

  std::unordered_map<std::uint64_t, long long> table;
  table.reserve(static_cast<std::size_t>(n) * 2);
  for (const auto& p : set.points) ++table[detail::pack_sum(p.x, p.y)];
  for (int fold = 2; fold <= l; ++fold) {
    std::unordered_map<std::uint64_t, long long> next;
    next.reserve(table.size() * static_cast<std::size_t>(n));
    for (const auto& [key, cnt] : table) {
      const auto x = static_cast<std::int64_t>(static_cast<std::int32_t>(key >> 32));
      const auto y = static_cast<std::int64_t>(static_cast<std::int32_t>(key & 0xffffffffULL));
      for (const auto& p : set.points) next[detail::pack_sum(x + p.x, y + p.y)] += cnt;
    }
    table = std::move(next);
  }

  __int128 total = 0;
  for (const auto& [key, cnt] : table) {
    const auto it = table.find(detail::negate_key(key));
    if (it != table.end()) total += static_cast<__int128>(cnt) * it->second;
  }

  static constexpr long long kDiagonalFactor[3] = {1, 3, 15};  // (2l)!/(2^l l!)
  __int128 diag = kDiagonalFactor[l - 1];
  for (int i = 0; i < l; ++i) diag *= n;

  CorrelationReport report;
  report.l = l;
  report.total_count = detail::checked_narrow(total, "count_correlations");
  report.diagonal_main_term = detail::checked_narrow(diag, "count_correlations");
  report.residual = report.total_count - report.diagonal_main_term;
  if (report.residual != 0) {
    report.gamma_exponent = std::log(static_cast<double>(std::abs(report.residual))) /
                            (l * std::log(static_cast<double>(n)));
  }
  return report;
}

// Oracle: plain exhaustive enumeration of all N^{2l} ordered tuples. Kept
// deliberately independent of the sum-table pairing above.
inline long long brute_force_correlations(const LatticePointSet& set, int l) {
  const int n = set.multiplicity();
  if (n < 1) throw std::invalid_argument("brute_force_correlations: empty frequency set");
  if (l < 1) throw std::invalid_argument("brute_force_correlations: l must be >= 1");
  __int128 work = 1;
  for (int i = 0; i < 2 * l; ++i) {
    work *= n;
    if (work > 1000000000) {
      throw std::invalid_argument(
          "brute_force_correlations: N^{2l} exceeds the 1e9 enumeration guard");
    }
  }
  long long count = 0;
  const int depth_max = 2 * l;
  std::function<void(int, std::int64_t, std::int64_t)> rec =
      [&](int depth, std::int64_t sx, std::int64_t sy) {
        if (depth == depth_max - 1) {
          for (const auto& p : set.points)
            if (sx + p.x == 0 && sy + p.y == 0) ++count;
          return;
        }
        for (const auto& p : set.points) rec(depth + 1, sx + p.x, sy + p.y);
      };
  rec(0, 0, 0);
  return count;
}

struct A1LineReport {
  int l = 0;
  long long total_count = 0;
  long long diagonal_main_term = 0;
  long long residual = 0;
  double threshold = 0.0;  // c * N^{gamma * l}
  double minimal_c = 0.0;  // |residual| / N^{gamma * l}
  bool pass = false;
};

struct A1Report {
  double gamma = 0.0;
  double c = 0.0;
  int l_max = 0;
  std::vector<A1LineReport> lines;
  bool all_pass = true;
};

// Audits the spectral-correlation assumption for a given eigenvalue: for each
// 2 <= 2l <= 2*l_max the residual against the diagonal main term must stay
// below c * N^{gamma*l}. The constant c is an explicit input; the report also
// records the minimal c that would make each l pass.
inline A1Report audit_a1(const LatticePointSet& set, double gamma, int l_max, double c,
                         int l3_cap = 512) {
  if (set.multiplicity() < 2) throw std::invalid_argument("audit_a1: need N >= 2");
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("audit_a1: gamma must lie in (0, 1/2)");
  if (l_max < 1 || l_max > 3) throw std::invalid_argument("audit_a1: l_max must be in [1,3]");
  if (!(c > 0.0)) throw std::invalid_argument("audit_a1: c must be > 0");

  A1Report report;
  report.gamma = gamma;
  report.c = c;
  report.l_max = l_max;
  const double n = static_cast<double>(set.multiplicity());
  for (int l = 1; l <= l_max; ++l) {
    const CorrelationReport cr = count_correlations(set, l, l3_cap);
    A1LineReport line;
    line.l = l;
    line.total_count = cr.total_count;
    line.diagonal_main_term = cr.diagonal_main_term;
    line.residual = cr.residual;
    const double scale = std::pow(n, gamma * l);
    line.threshold = c * scale;
    line.minimal_c = static_cast<double>(std::abs(cr.residual)) / scale;
    line.pass = static_cast<double>(std::abs(cr.residual)) <= line.threshold * (1.0 + 1e-12);
    report.all_pass = report.all_pass && line.pass;
    report.lines.push_back(line);
  }
  return report;
}

}  // namespace plancklab
