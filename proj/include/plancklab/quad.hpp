// Gauss-Legendre nodes and small quadrature helpers.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace plancklab {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

// Newton iteration on the Legendre recurrence; standard construction.
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendre q;
  q.nodes.assign(n, 0.0);
  q.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(3.141592653589793238462643383279 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    q.nodes[i] = -z;
    q.nodes[n - 1 - i] = z;
    q.weights[i] = q.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return q;
}

// Integrates f over [a, b] with an n-node Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const GaussLegendre q = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double rad = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += q.weights[i] * f(mid + rad * q.nodes[i]);
  return s * rad;
}

}  // namespace plancklab
