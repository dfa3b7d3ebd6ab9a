#include <gtest/gtest.h>

#include <random>

#include "spherepoly/measure.hpp"

using namespace spherepoly;

namespace {

MeasureSpec constant_weight(std::size_t d, double s) {
  MeasureSpec spec;
  spec.d = d;
  spec.weight.scale = s;
  spec.weight.g = SparsePolynomial::constant(d, 1.0);
  return spec;
}

std::vector<Atom> random_atoms(std::size_t d, int count, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::vector<Atom> atoms;
  for (int k = 0; k < count; ++k) {
    Point p(d);
    double r = 0.0;
    for (auto& c : p) {
      c = cplx(n(rng), n(rng));
      r += std::norm(c);
    }
    for (auto& c : p) c /= std::sqrt(r);
    atoms.emplace_back(p, 1.0 / count);
  }
  return atoms;
}

Point random_interior(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(d);
  double r = 0.0;
  for (auto& c : p) {
    c = cplx(n(rng), n(rng));
    r += std::norm(c);
  }
  const double radius = std::pow(u(rng), 1.0 / (2.0 * d)) * 0.999999;
  for (auto& c : p) c *= radius / std::sqrt(r);
  return p;
}

}  // namespace

TEST(Measure, TotalMassExamples) {
  EXPECT_NEAR(total_mass(preset("counterexample")), 1.0, 1e-15);
  EXPECT_NEAR(total_mass(constant_weight(2, 1.0)), 1.0, 1e-15);
  MeasureSpec half = constant_weight(2, 0.5);
  half.atoms.emplace_back(Point{1.0, 0.0}, 0.5);
  EXPECT_NEAR(total_mass(half), 1.0, 1e-15);
}

TEST(Measure, NormalizeExamples) {
  MeasureSpec spec;
  spec.d = 2;
  spec.weight.g = SparsePolynomial(2, {{MultiIndex{1, 0}, 1.0}});
  EXPECT_NEAR(normalize(spec).weight.scale, 2.0, 1e-15);

  const MeasureSpec once = normalize(preset("stable-demo"));
  const MeasureSpec twice = normalize(once);
  EXPECT_NEAR(twice.weight.scale, once.weight.scale, 1e-15);
  EXPECT_NEAR(total_mass(twice), 1.0, 1e-12);

  EXPECT_NEAR(normalize(constant_weight(2, 4.0)).weight.scale, 1.0, 1e-15);
  EXPECT_THROW(normalize(constant_weight(2, 0.0)), std::domain_error);
}

TEST(Measure, NormalizeScalesAtoms) {
  MeasureSpec spec = constant_weight(2, 1.0);
  spec.atoms.emplace_back(Point{0.0, 1.0}, 3.0);
  const MeasureSpec n = normalize(spec);
  EXPECT_NEAR(n.weight.scale, 0.25, 1e-15);
  EXPECT_NEAR(n.atoms[0].mass(), 0.75, 1e-15);
  EXPECT_NEAR(total_mass(n), 1.0, 1e-12);
}

TEST(Measure, NonSquaredExponentMassByQuadrature) {
  MeasureSpec spec;
  spec.d = 2;
  spec.weight.exponent = 4.0;
  spec.weight.g = SparsePolynomial(2, {{MultiIndex{1, 0}, 1.0}});
  // integral of |z1|^4 = 2! / 3! = 1/3
  EXPECT_NEAR(total_mass(spec), 1.0 / 3.0, 1e-12);
}

TEST(Measure, AtomValidationAndProjection) {
  EXPECT_THROW(Atom(Point{1.1, 0.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(Atom(Point{1.0, 0.0}, 0.0), std::invalid_argument);
  const Atom a(Point{1.0 + 4e-13, 0.0}, 1.0);
  EXPECT_EQ(std::abs(a.point()[0]), 1.0);
  MeasureSpec spec = constant_weight(2, 0.5);
  spec.atoms.emplace_back(Point{1.0, 0.0}, 0.25);
  spec.atoms.emplace_back(Point{1.0, 0.0}, 0.25);
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Measure, HerglotzExamples) {
  std::mt19937_64 rng(7);
  const auto atoms = random_atoms(2, 3, rng);
  EXPECT_NEAR(std::abs(herglotz_F(atoms, Point{0.0, 0.0}) - 1.0), 0.0, 1e-15);

  const std::vector<Atom> one{Atom(Point{1.0, 0.0}, 1.0)};
  for (double r : {0.9, 0.99, 0.999}) {
    const cplx F = herglotz_F(one, Point{r, 0.0});
    EXPECT_NEAR(F.real(), (1 + r) / (1 - r), 1e-9 * (1 + r) / (1 - r));
  }
  EXPECT_NEAR(std::abs(herglotz_F(one, Point{0.0, 0.5}) - 1.0), 0.0, 1e-15);
  EXPECT_THROW(herglotz_F(one, Point{1.0, 0.0}), std::domain_error);
  const std::vector<Atom> light{Atom(Point{1.0, 0.0}, 0.5)};
  EXPECT_THROW(herglotz_F(light, Point{0.0, 0.0}), std::invalid_argument);
}

TEST(Measure, SchurExamples) {
  const std::vector<Atom> one{Atom(Point{1.0, 0.0}, 1.0)};
  EXPECT_EQ(schur_G(one, Point{0.0, 0.0}), cplx(0.0));
  double prev = 0.0;
  for (double r : {0.5, 0.9, 0.99, 0.9999}) {
    const double g = std::abs(schur_G(one, Point{r, 0.0}) - 1.0);
    if (prev > 0.0) {
      EXPECT_LT(g, prev);
    }
    prev = g;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Measure, HerglotzPositiveAndSchurBounded) {
  std::mt19937_64 rng(11);
  for (std::size_t d : {1u, 2u, 3u}) {
    const auto atoms = random_atoms(d, 4, rng);
    for (int k = 0; k < 1000; ++k) {
      const Point z = random_interior(d, rng);
      EXPECT_GT(herglotz_F(atoms, z).real(), -1e-14);
      const cplx G = schur_G(atoms, z);
      EXPECT_LE(std::abs(G), norm(z) + 1e-12);
      EXPECT_LT(std::abs(G), 1.0);
    }
  }
}

TEST(Measure, PresetsAreProbabilityMeasures) {
  for (const std::string& name : preset_names()) EXPECT_NEAR(total_mass(preset(name)), 1.0, 1e-12) << name;
  EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Measure, SparsePolynomialMergesTerms) {
  SparsePolynomial p(2);
  p.add(MultiIndex{1, 0}, 1.0);
  p.add(MultiIndex{1, 0}, 2.0);
  p.add(MultiIndex{0, 0}, 1.0);
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.terms()[0].first, (MultiIndex{0, 0}));
  EXPECT_EQ(p(Point{0.5, 0.0}), cplx(2.5));
  EXPECT_EQ(p.at_origin(), cplx(1.0));
  EXPECT_EQ(p.degree(), 1u);
}
