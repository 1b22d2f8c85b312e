#include <catch2/catch.hpp>

#include <cmath>

#include "oracles.hpp"
#include "plancklab/eigenfunction.hpp"
#include "plancklab/field.hpp"
#include "plancklab/lattice.hpp"
#include "plancklab/measure.hpp"

using namespace plancklab;

TEST_CASE("from_coefficients flat E=2 gives four atoms of mass 1/4 on the diagonals") {
  const auto set = enumerate_lattice_points(2);
  const auto coeffs = generate_coefficients(set, CoefficientModel::flat);
  const SpectralMeasure mu = from_coefficients(coeffs);
  REQUIRE(mu.is_purely_atomic());
  REQUIRE(mu.atoms().size() == 4);
  const double expected_angles[] = {0.125, 0.375, 0.625, 0.875};
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(mu.atoms()[i].angle == Approx(expected_angles[i]).margin(1e-12));
    REQUIRE(mu.atoms()[i].mass == Approx(0.25).margin(1e-12));
  }
}

TEST_CASE("from_coefficients flat E=25 gives 12 atoms of mass 1/12") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const SpectralMeasure mu = from_coefficients(coeffs);
  REQUIRE(mu.atoms().size() == 12);
  for (const auto& a : mu.atoms()) REQUIRE(a.mass == Approx(1.0 / 12.0).margin(1e-12));
}

TEST_CASE("from_coefficients validates normalisation and symmetry") {
  const auto set = enumerate_lattice_points(2);
  CoefficientVector bad;
  bad.set = set;
  bad.a.assign(4, {0.7, 0.0});  // norm != 1
  REQUIRE_THROWS_AS(from_coefficients(bad), std::invalid_argument);
  CoefficientVector asym;
  asym.set = set;
  asym.a = {{0.5, 0.1}, {0.5, 0.1}, {0.5, 0.1}, {0.5, 0.1}};  // not conj-symmetric
  REQUIRE_THROWS_AS(from_coefficients(asym), std::invalid_argument);
}

TEST_CASE("random coefficient measures always satisfy the invariants") {
  for (const std::uint64_t seed : {1u, 7u, 42u}) {
    const auto coeffs = generate_coefficients(enumerate_lattice_points(65),
                                              CoefficientModel::random_sphere, seed);
    REQUIRE_NOTHROW(from_coefficients(coeffs).validate());
  }
}

TEST_CASE("lebesgue decomposition of the three canonical cases") {
  const SpectralMeasure atomic = SpectralMeasure::cilleruelo();
  const auto d1 = lebesgue_decompose(atomic);
  REQUIRE(d1.alpha == 1.0);
  REQUIRE(d1.beta == 0.0);
  REQUIRE(d1.atomic.atoms().size() == 4);
  REQUIRE(d1.continuous.is_empty());
  const double expected_angles[] = {0.0, 0.25, 0.5, 0.75};
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(d1.atomic.atoms()[i].angle == Approx(expected_angles[i]).margin(1e-12));
    REQUIRE(d1.atomic.atoms()[i].mass == Approx(0.25));
  }

  const auto d2 = lebesgue_decompose(SpectralMeasure::uniform());
  REQUIRE(d2.alpha == 0.0);
  REQUIRE(d2.beta == 1.0);
  REQUIRE(d2.atomic.is_empty());

  const SpectralMeasure mixed = SpectralMeasure::mixture(
      0.5, SpectralMeasure::cilleruelo(), 0.5, SpectralMeasure::uniform());
  const auto d3 = lebesgue_decompose(mixed);
  REQUIRE(d3.alpha == Approx(0.5));
  REQUIRE(d3.beta == Approx(0.5));
}

TEST_CASE("decompose/recompose round trip is w1-null") {
  const SpectralMeasure mixed = SpectralMeasure::mixture(
      0.4, SpectralMeasure::cilleruelo(), 0.6, SpectralMeasure::uniform());
  const SpectralMeasure back = recompose(lebesgue_decompose(mixed));
  REQUIRE(w1_distance(mixed, back) <= 1e-12);
}

TEST_CASE("arc partition of flat E=2 at K=2 keeps four arcs of mass 1/4") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(2), CoefficientModel::flat);
  const SpectralMeasure mu = from_coefficients(coeffs);
  const ArcPartition part = arc_partition(mu, coeffs.set, 2, 0.25);
  REQUIRE(part.kept.size() == 4);
  for (const auto& arc : part.kept) {
    REQUIRE(arc.mass == Approx(0.25).margin(1e-12));
    REQUIRE(arc.frequencies.size() == 1);
    // Frequencies sit exactly at the arc midpoints here.
    REQUIRE(arc.midpoint_angle ==
            Approx(lattice_angle(arc.frequencies[0])).margin(1e-12));
  }
  REQUIRE(part.discarded_mass == Approx(0.0).margin(1e-12));
}

TEST_CASE("arc partition discards everything when delta exceeds all arc masses") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(2), CoefficientModel::flat);
  const ArcPartition part = arc_partition(from_coefficients(coeffs), coeffs.set, 2, 0.3);
  REQUIRE(part.kept.empty());
  REQUIRE(part.discarded_mass == Approx(1.0));
  REQUIRE_THROWS_AS(discretized_measure(part), std::invalid_argument);
}

TEST_CASE("arc partition mass balance and antipodal pairing, flat E=25 K=8") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const ArcPartition part = arc_partition(from_coefficients(coeffs), coeffs.set, 8, 0.01);
  double kept = 0.0;
  int freq_count = 0;
  for (const auto& arc : part.kept) {
    kept += arc.mass;
    freq_count += static_cast<int>(arc.frequencies.size());
    // Antipodal arc is kept with the same mass.
    const int antipode = arc.k > 0 ? arc.k - 8 : arc.k + 8;
    bool found = false;
    for (const auto& other : part.kept) {
      if (other.k == antipode) {
        REQUIRE(other.mass == Approx(arc.mass).margin(1e-12));
        found = true;
      }
    }
    REQUIRE(found);
  }
  REQUIRE(kept + part.discarded_mass == Approx(1.0).margin(1e-12));
  REQUIRE(freq_count == 12);
}

TEST_CASE("arc index respects the half-open boundary rule") {
  // A boundary angle k/2K belongs to arc k, not k+1.
  REQUIRE(arc_index(0.0, 4) == 0);
  REQUIRE(arc_index(0.125, 4) == 1);          // = 1/8 = k/2K with k=1
  REQUIRE(arc_index(0.125 + 1e-12, 4) == 2);  // just inside the next arc
  REQUIRE(arc_index(0.5, 4) == 4);
  REQUIRE(arc_index(0.5 + 1e-12, 4) == -3);
}

TEST_CASE("discretized measure of a single kept antipodal pair") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(2), CoefficientModel::flat);
  // K=1: two arcs, each holding one antipodal pair of frequencies.
  const ArcPartition part = arc_partition(from_coefficients(coeffs), coeffs.set, 1, 0.4);
  REQUIRE(part.kept.size() == 2);
  const SpectralMeasure mu_K = discretized_measure(part);
  REQUIRE(mu_K.atoms().size() == 2);
  for (const auto& a : mu_K.atoms()) REQUIRE(a.mass == Approx(0.5));
  REQUIRE_NOTHROW(mu_K.validate());
}

TEST_CASE("discretized measure total mass is 1 and passes invariants") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  for (const int K : {4, 8, 16}) {
    const ArcPartition part =
        arc_partition(from_coefficients(coeffs), coeffs.set, K, 0.01);
    const SpectralMeasure mu_K = discretized_measure(part);
    double total = 0.0;
    for (const auto& a : mu_K.atoms()) total += a.mass;
    REQUIRE(total == Approx(1.0).margin(1e-12));
    REQUIRE_NOTHROW(mu_K.validate());
  }
}

TEST_CASE("w1 distance of a measure with itself is zero") {
  REQUIRE(w1_distance(SpectralMeasure::cilleruelo(), SpectralMeasure::cilleruelo()) ==
          Approx(0.0).margin(1e-15));
  REQUIRE(w1_distance(SpectralMeasure::uniform(), SpectralMeasure::uniform()) ==
          Approx(0.0).margin(1e-15));
}

TEST_CASE("w1 between rotated antipodal pairs equals the rotation") {
  for (const double h : {0.01, 0.1, 0.25}) {
    const SpectralMeasure a = SpectralMeasure::purely_atomic({{0.0, 0.5}, {0.5, 0.5}});
    const SpectralMeasure b = SpectralMeasure::purely_atomic({{h, 0.5}, {0.5 + h, 0.5}});
    REQUIRE(w1_distance(a, b) == Approx(h).margin(1e-12));
    REQUIRE(w1_distance(b, a) == Approx(h).margin(1e-12));
  }
}

TEST_CASE("w1 agrees with the dense grid oracle") {
  const SpectralMeasure a = SpectralMeasure::purely_atomic(
      {{0.05, 0.3}, {0.55, 0.3}, {0.21, 0.2}, {0.71, 0.2}});
  const SpectralMeasure b = SpectralMeasure::cilleruelo();
  const double grid = oracles::w1_grid_oracle(a, b, 1 << 18);
  REQUIRE(w1_distance(a, b) == Approx(grid).margin(1e-4));

  const SpectralMeasure c = SpectralMeasure::uniform();
  REQUIRE(w1_distance(a, c) == Approx(oracles::w1_grid_oracle(a, c, 1 << 18)).margin(1e-4));
}

TEST_CASE("w1 between uniform and its quantile discretisation is 1/(4m)") {
  for (const int m : {4, 8, 16, 32}) {
    const SpectralMeasure disc = discretize_continuous(SpectralMeasure::uniform(), m);
    REQUIRE(w1_distance(disc, SpectralMeasure::uniform()) ==
            Approx(1.0 / (4.0 * m)).margin(1e-12));
  }
}

TEST_CASE("discretised measure converges to mu_f at rate 1/(4K) plus discarded mass") {
  const auto coeffs =
      generate_coefficients(enumerate_lattice_points(25), CoefficientModel::flat);
  const SpectralMeasure mu_f = from_coefficients(coeffs);
  double first = 0.0, last = 0.0;
  for (const int K : {8, 16, 32, 64}) {
    const ArcPartition part = arc_partition(mu_f, coeffs.set, K, 1e-4);
    const SpectralMeasure mu_K = discretized_measure(part);
    const double d = w1_distance(mu_K, mu_f);
    REQUIRE(d <= 1.0 / (4.0 * K) + part.discarded_mass + 1e-12);
    if (K == 8) first = d;
    if (K == 64) last = d;
  }
  REQUIRE(last < first);  // O(1/K) decay across a factor of 8
}

TEST_CASE("mixture construction validates weights and parts") {
  REQUIRE_THROWS_AS(SpectralMeasure::mixture(0.5, SpectralMeasure::cilleruelo(), 0.4,
                                             SpectralMeasure::uniform()),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(SpectralMeasure::mixture(0.5, SpectralMeasure::uniform(), 0.5,
                                             SpectralMeasure::uniform()),
                    std::invalid_argument);
}

TEST_CASE("asymmetric atomic measures are rejected") {
  REQUIRE_THROWS_AS(SpectralMeasure::purely_atomic({{0.1, 0.5}, {0.3, 0.5}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(SpectralMeasure::purely_atomic({{0.1, 0.6}, {0.6, 0.4}}),
                    std::invalid_argument);
}

TEST_CASE("atoms at coincident angles are merged on construction") {
  const SpectralMeasure mu = SpectralMeasure::purely_atomic(
      {{0.2, 0.25}, {0.2 + 1e-14, 0.25}, {0.7, 0.25}, {0.7 + 1e-14, 0.25}});
  REQUIRE(mu.atoms().size() == 2);
  REQUIRE(mu.atoms()[0].mass == Approx(0.5));
}
