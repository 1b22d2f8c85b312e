#include <catch2/catch.hpp>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "plancklab/eigenfunction.hpp"
#include "plancklab/lattice.hpp"
#include "plancklab/parallel.hpp"

using namespace plancklab;

namespace {

// Extended-precision direct summation oracle for f(x).
long double evaluate_longdouble(const CoefficientVector& coeffs, double x1, double x2) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const auto& p = coeffs.set.points[i];
    const long double phase =
        2.0L * 3.14159265358979323846264338327950288L *
        (static_cast<long double>(p.x) * x1 + static_cast<long double>(p.y) * x2);
    acc += static_cast<long double>(coeffs.a[i].real()) * std::cos(phase) -
           static_cast<long double>(coeffs.a[i].imag()) * std::sin(phase);
  }
  return acc;
}

}  // namespace

TEST_CASE("flat coefficients are 1/sqrt(N) and exactly normalised") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(2), CoefficientModel::flat);
  for (const auto& c : coeffs.a) REQUIRE(c == std::complex<double>{0.5, 0.0});
  double norm = 0.0;
  for (const auto& c : coeffs.a) norm += std::norm(c);
  REQUIRE(norm == 1.0);
  REQUIRE_NOTHROW(validate_coefficients(coeffs));
}

TEST_CASE("random sphere coefficients are valid and seed-deterministic") {
  const auto set = enumerate_lattice_points(65);
  const auto a = generate_coefficients(set, CoefficientModel::random_sphere, 99);
  const auto b = generate_coefficients(set, CoefficientModel::random_sphere, 99);
  REQUIRE(a.a == b.a);
  const auto c = generate_coefficients(set, CoefficientModel::random_sphere, 100);
  REQUIRE(a.a != c.a);
  REQUIRE_NOTHROW(validate_coefficients(a));
}

TEST_CASE("generate rejects an empty set") {
  REQUIRE_THROWS_AS(
      generate_coefficients(enumerate_lattice_points(3), CoefficientModel::flat),
      std::invalid_argument);
}

TEST_CASE("flatness: flat model has max ratio one") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const FlatnessReport r = check_flatness(coeffs, 1.0);
  REQUIRE(r.max_ratio == Approx(1.0).margin(1e-12));
  REQUIRE(r.pass);
}

TEST_CASE("flatness: a single antipodal pair concentrates N/2 of the mass") {
  const auto set = enumerate_lattice_points(25);
  CoefficientVector coeffs;
  coeffs.set = set;
  coeffs.a.assign(set.points.size(), {0.0, 0.0});
  const auto& p = set.points[0];
  coeffs.a[0] = {1.0 / std::sqrt(2.0), 0.0};
  coeffs.a[detail::index_of(set, {-p.x, -p.y})] = {1.0 / std::sqrt(2.0), 0.0};
  const FlatnessReport r = check_flatness(coeffs, 5.9);
  REQUIRE(r.max_ratio == Approx(6.0));  // N/2 = 6
  REQUIRE_FALSE(r.pass);
  REQUIRE(check_flatness(coeffs, 6.0).pass);
}

TEST_CASE("flatness: random sphere at N=32 passes u=(log N)^2 almost surely") {
  const auto set = enumerate_lattice_points(1105);
  const double u = std::pow(std::log(32.0), 2.0);
  int passes = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto coeffs = generate_coefficients(set, CoefficientModel::random_sphere, seed);
    if (check_flatness(coeffs, u).pass) ++passes;
  }
  REQUIRE(passes >= 990);
}

TEST_CASE("evaluate: flat f(0) = sqrt(N)") {
  for (const std::int64_t E : {2, 25}) {
    const auto coeffs =
        generate_coefficients(enumerate_lattice_points(E), CoefficientModel::flat);
    REQUIRE(evaluate(coeffs, 0.0, 0.0) ==
            Approx(std::sqrt(static_cast<double>(coeffs.set.multiplicity()))).margin(1e-12));
  }
}

TEST_CASE("evaluate: flat E=2 at the half-period point") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(2), CoefficientModel::flat);
  // All four phases are integers there, so f = 4 * (1/2) = 2.
  REQUIRE(evaluate(coeffs, 0.5, 0.5) == Approx(2.0).margin(1e-12));
  REQUIRE(evaluate(coeffs, 0.5, 0.5) ==
          Approx(static_cast<double>(evaluate_longdouble(coeffs, 0.5, 0.5))).margin(1e-12));
}

TEST_CASE("evaluate matches the extended-precision oracle at random points") {
  const auto coeffs = generate_coefficients(enumerate_lattice_points(325),
                                            CoefficientModel::random_sphere, 5);
  CounterRng rng(17, 0);
  for (int i = 0; i < 50; ++i) {
    const double x1 = rng.next_unit();
    const double x2 = rng.next_unit();
    REQUIRE(evaluate(coeffs, x1, x2) ==
            Approx(static_cast<double>(evaluate_longdouble(coeffs, x1, x2))).margin(1e-10));
  }
}

TEST_CASE("grid mean of f^2 is 1 (Parseval)") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const int n = 256;
  std::vector<double> rows(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> vals(n);
    for (int j = 0; j < n; ++j) {
      const double v = evaluate(coeffs, static_cast<double>(i) / n, static_cast<double>(j) / n);
      vals[j] = v * v;
    }
    rows[i] = pairwise_mean(vals);
  }
  REQUIRE(pairwise_mean(rows) == Approx(1.0).margin(0.01));  // in fact exact on the grid
  REQUIRE(pairwise_mean(rows) == Approx(1.0).margin(1e-10));
}

TEST_CASE("mass closed form approaches 1 as r grows") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  REQUIRE(mass_closed_form(coeffs, 0.3, 0.7, 1e3) == Approx(1.0).margin(1e-3));
  REQUIRE(std::abs(mass_closed_form(coeffs, 0.3, 0.7, 1e5) - 1.0) <
          std::abs(mass_closed_form(coeffs, 0.3, 0.7, 1e3) - 1.0));
}

TEST_CASE("constant integrand averages to exactly 1 in the disk quadrature") {
  const double v =
      disk_average_quadrature([](double, double) { return 1.0; }, 0.2, 0.9, 0.37, 32, 64);
  REQUIRE(v == Approx(1.0).margin(1e-14));
}

TEST_CASE("closed form and quadrature agree to 1e-6 relative") {
  CounterRng rng(31, 0);
  const std::int64_t energies[] = {2, 25, 65, 325, 1105};
  for (int c = 0; c < 20; ++c) {
    const std::int64_t E = energies[c % 5];
    const auto coeffs = generate_coefficients(enumerate_lattice_points(E),
                                              CoefficientModel::random_sphere, 100 + c);
    const double x1 = rng.next_unit();
    const double x2 = rng.next_unit();
    const double r = (1.0 + 9.0 * rng.next_unit()) / std::sqrt(static_cast<double>(E));
    const double closed = mass_closed_form(coeffs, x1, x2, r);
    const double quad = mass_quadrature(coeffs, x1, x2, r);
    REQUIRE(std::abs(closed - quad) <= 1e-6 * std::abs(quad) + 1e-12);
  }
}

TEST_CASE("quadrature refinement is monotone on a smooth case") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const double r = 2.0 / 5.0;
  const double q1 = mass_quadrature(coeffs, 0.21, 0.59, r, 16, 64);
  const double q2 = mass_quadrature(coeffs, 0.21, 0.59, r, 32, 128);
  const double q4 = mass_quadrature(coeffs, 0.21, 0.59, r, 64, 256);
  REQUIRE(std::abs(q2 - q4) <= std::abs(q1 - q2) + 1e-15);
  REQUIRE(std::abs(mass_quadrature(coeffs, 0.21, 0.59, r, 64, 256) -
                   mass_quadrature(coeffs, 0.21, 0.59, r, 128, 512)) < 1e-8);
}

TEST_CASE("torus mean of the closed-form mass is 1 to 1e-9") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const double r = 2.0 / 5.0;
  const MassEvaluator eval(coeffs, r);
  const int n = 128;
  std::vector<double> rows(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> vals(n);
    for (int j = 0; j < n; ++j)
      vals[j] = eval(static_cast<double>(i) / n, static_cast<double>(j) / n);
    rows[i] = pairwise_mean(vals);
  }
  REQUIRE(pairwise_mean(rows) == Approx(1.0).margin(1e-9));
}

TEST_CASE("sample_mass: nonnegative samples, mean near 1, reproducible") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const EmpiricalDistribution dist = sample_mass(coeffs, 2.0, 2000, 7);
  for (const double v : dist.samples()) REQUIRE(v >= 0.0);
  const double sigma = std::sqrt(dist.variance());
  REQUIRE(std::abs(dist.mean() - 1.0) <= 3.0 * sigma / std::sqrt(2000.0));

  const EmpiricalDistribution again = sample_mass(coeffs, 2.0, 2000, 7);
  REQUIRE(dist.samples() == again.samples());
  const EmpiricalDistribution single1 = sample_mass(coeffs, 2.0, 1, 11);
  const EmpiricalDistribution single2 = sample_mass(coeffs, 2.0, 1, 11);
  REQUIRE(single1.samples() == single2.samples());
  REQUIRE(sample_mass(coeffs, 2.0, 1, 12).samples() != single1.samples());
}

TEST_CASE("sample_mass is schedule-independent") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(65), CoefficientModel::flat);
  set_worker_count(1);
  const auto serial = sample_mass(coeffs, 3.0, 501, 3).samples();
  set_worker_count(4);
  const auto threaded = sample_mass(coeffs, 3.0, 501, 3).samples();
  set_worker_count(1);
  REQUIRE(serial == threaded);
}

TEST_CASE("sample_mass validates R and n") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  REQUIRE_THROWS_AS(sample_mass(coeffs, 0.5, 10, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(sample_mass(coeffs, 2.0, 0, 1), std::invalid_argument);
}

TEST_CASE("mass moments of constant samples") {
  const EmpiricalDistribution dist(std::vector<double>(100, 1.0), {0, "none", "const"});
  REQUIRE(mass_moment(dist, 2) == 0.0);
  REQUIRE(mass_moment(dist, 3) == 1.0);
  REQUIRE_THROWS_AS(mass_moment(dist, 4), std::invalid_argument);
}

TEST_CASE("third moment stays bounded for flat coefficients") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(325), CoefficientModel::flat);
  const EmpiricalDistribution dist = sample_mass(coeffs, 5.0, 2000, 21);
  REQUIRE(mass_moment(dist, 3) <= 20.0);
}
