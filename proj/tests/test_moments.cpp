#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spherepoly/moments.hpp"

using namespace spherepoly;

namespace {

/// (d-1)! times iterated one-dimensional Beta integrals over the simplex.
double simplex_oracle(const MultiIndex& a) {
  const std::size_t d = a.dim();
  double v = std::tgamma(static_cast<double>(d));
  for (std::size_t k = 0; k + 1 < d; ++k) {
    unsigned rest = 0;
    for (std::size_t j = k + 1; j < d; ++j) rest += a[j];
    v *= oracle::beta_integral(a[k], rest + static_cast<unsigned>(d - k - 2));
  }
  return v;
}

}  // namespace

TEST(Moments, SigmaMonomialExamples) {
  EXPECT_NEAR(sigma_monomial_moment(MultiIndex{1, 0}), 0.5, 1e-16);
  for (unsigned n = 0; n <= 12; ++n) EXPECT_NEAR(sigma_monomial_moment(MultiIndex{0, n}), 1.0 / (n + 1), 1e-16);
  for (std::size_t d = 1; d <= 5; ++d) EXPECT_EQ(sigma_monomial_moment(MultiIndex(d)), 1.0);
}

TEST(Moments, SigmaMonomialMatchesSimplexIntegrals) {
  for (std::size_t d = 2; d <= 4; ++d) {
    for (std::uint64_t r = 0; r < 30; ++r) {
      const MultiIndex a = shortlex_unrank(r, d);
      EXPECT_NEAR(sigma_monomial_moment(a), simplex_oracle(a), 1e-10 * sigma_monomial_moment(a)) << a.to_string();
    }
  }
}

TEST(Moments, SigmaMonomialLargeDegreeStaysFinite) {
  const double m = sigma_monomial_moment(MultiIndex{10, 10, 10, 10});
  EXPECT_GT(m, 0.0);
  EXPECT_TRUE(std::isfinite(m));
}

TEST(Moments, MomentExamples) {
  const MeasureSpec cx = preset("counterexample");
  EXPECT_NEAR(std::abs(moment(cx, MultiIndex{1, 0}, MultiIndex{1, 0}) - 2.0 / 3.0), 0.0, 1e-15);
  EXPECT_EQ(moment(cx, MultiIndex{1, 0}, MultiIndex{0, 1}), cplx(0.0));
  MeasureSpec atom;
  atom.d = 2;
  atom.weight.scale = 0.0;
  atom.weight.g = SparsePolynomial::constant(2, 1.0);
  atom.atoms.emplace_back(Point{1.0, 0.0}, 1.0);
  for (unsigned j = 0; j < 4; ++j)
    for (unsigned k = 0; k < 4; ++k) EXPECT_EQ(moment(atom, MultiIndex{j, 0}, MultiIndex{k, 0}), cplx(1.0));
}

TEST(Moments, KernelWindowExamples) {
  const MomentKernel sigma = kernel_window(preset("lebesgue"), 2);
  EXPECT_TRUE(sigma.entries.isApprox(Eigen::Vector3cd(1.0, 0.5, 0.5).asDiagonal().toDenseMatrix(), 1e-15));
  const MomentKernel cx = kernel_window(preset("counterexample"), 2);
  EXPECT_NEAR((cx.entries - Eigen::Vector3cd(1.0, 2.0 / 3.0, 1.0 / 3.0).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  for (const std::string& name : fixtures::test_presets()) {
    const MomentKernel K = kernel_window(preset(name), 0);
    EXPECT_NEAR(std::abs(K(0, 0) - 1.0), 0.0, 1e-14) << name;
  }
  EXPECT_TRUE(kernel_window(preset("stable-demo"), 27).nontrivial());
}

TEST(Moments, KernelsAreHermitianAndPassMeasureCondition) {
  for (const std::string& name : fixtures::test_presets()) {
    const MeasureSpec spec = preset(name);
    const MomentKernel K = kernel_window(spec, 27);
    EXPECT_LE((K.entries - K.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-13) << name;
    EXPECT_LE(check_measure_condition(K, spec, 27), 1e-11) << name;
    EXPECT_LE(check_measure_condition(K), 1e-11) << name;
  }
}

TEST(Moments, MonomialWeightsGiveDiagonalKernels) {
  for (const char* name : {"lebesgue", "counterexample"}) {
    const MomentKernel K = kernel_window(preset(name), 27);
    CMatrix off = K.entries;
    off.diagonal().setZero();
    EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0) << name;
  }
  const MomentKernel sigma = kernel_window(preset("lebesgue", 3), 19);
  for (std::size_t r = 0; r <= 19; ++r) EXPECT_EQ(sigma(r, r).real(), sigma_monomial_moment(shortlex_unrank(r, 3)));
}

TEST(Moments, NormalizedKernelFailsMeasureCondition) {
  const MomentKernel Kt = normalized(kernel_window(preset("stable-demo"), 27));
  const cplx s = Kt(1, 1) + Kt(2, 2);
  EXPECT_NEAR(std::abs(Kt(0, 0) - s), 1.0, 1e-15);
  EXPECT_GE(check_measure_condition(Kt), 0.1);

  MomentKernel diag{2, 2, CMatrix::Identity(3, 3), Provenance::exact};
  EXPECT_NEAR(check_measure_condition(diag), 1.0, 1e-15);

  // In one variable the normalized kernel of a rotation-invariant measure is still a moment kernel.
  const MomentKernel circle = normalized(kernel_window(preset("lebesgue", 1), 10));
  EXPECT_LE(check_measure_condition(circle), 1e-15);
}

TEST(Moments, QuadratureMomentExamples) {
  const MeasureSpec sigma = preset("lebesgue");
  const QuadratureResolution fine{64, 64};
  EXPECT_NEAR(std::abs(quadrature_moment(sigma, MultiIndex{1, 0}, MultiIndex{1, 0}, fine) - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(quadrature_moment(sigma, MultiIndex{2, 0}, MultiIndex{1, 1}, fine)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(quadrature_moment(preset("counterexample"), MultiIndex{0, 1}, MultiIndex{0, 1}) - 1.0 / 3.0), 0.0, 1e-8);
}

TEST(Moments, QuadratureKernelMatchesExact) {
  for (const char* name : {"lebesgue", "counterexample", "stable-demo", "half-atom"}) {
    const MeasureSpec spec = preset(name);
    const MomentKernel exact = kernel_window(spec, 27);
    const MomentKernel quad = quadrature_kernel(spec, 27, default_resolution(2));
    EXPECT_EQ(quad.provenance, Provenance::quadrature);
    EXPECT_LE((exact.entries - quad.entries).cwiseAbs().maxCoeff(), 1e-8) << name;
  }
  // Dimension three, default resolution, ranks through level 2.
  MeasureSpec spec;
  spec.d = 3;
  spec.weight.g = SparsePolynomial(3, {{MultiIndex{0, 0, 0}, 1.0}, {MultiIndex{0, 1, 0}, cplx(0.2, 0.1)}, {MultiIndex{0, 0, 1}, -0.3}});
  const MomentKernel e3 = kernel_window(spec, 9);
  const MomentKernel q3 = quadrature_kernel(spec, 9, default_resolution(3));
  EXPECT_LE((e3.entries - q3.entries).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Moments, NonSquaredExponentGoesThroughQuadrature) {
  MeasureSpec spec;
  spec.d = 2;
  spec.weight.exponent = 3.0;
  spec.weight.g = SparsePolynomial(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 0}, 0.25}});
  const MomentKernel K = kernel_window(spec, 5);
  EXPECT_EQ(K.provenance, Provenance::quadrature);
  EXPECT_NEAR(std::abs(K(0, 1) - moment(spec, MultiIndex{0, 0}, MultiIndex{1, 0})), 0.0, 1e-12);
}

TEST(Moments, EntropyExamples) {
  const EntropyResult cx = entropy(preset("counterexample"));
  EXPECT_EQ(cx.method, Provenance::exact);
  EXPECT_NEAR(cx.log_integral, std::log(2.0) - 1.0, 1e-12);
  EntropyOptions quad;
  quad.force_quadrature = true;
  const EntropyResult cxq = entropy(preset("counterexample"), quad);
  EXPECT_EQ(cxq.method, Provenance::quadrature);
  EXPECT_NEAR(cxq.log_integral, std::log(2.0) - 1.0, 1e-8);

  EXPECT_EQ(entropy(preset("lebesgue")).log_integral, 0.0);
  EXPECT_NEAR(entropy(preset("lebesgue"), quad).log_integral, 0.0, 1e-14);

  const double oracle = oracle::circle_mean([](cplx z) { return std::log(0.8 * std::norm(1.0 - z / 2.0)); }, 4096);
  EXPECT_NEAR(oracle, std::log(0.8), 1e-12);
  EXPECT_NEAR(entropy(preset("circle-calibration")).log_integral, std::log(0.8), 1e-8);
}

TEST(Moments, EntropyOfMonomialWeightsInHigherDimension) {
  // E[log |z1|^2] = -(1 + 1/2) on the sphere in C^3.
  MeasureSpec spec;
  spec.d = 3;
  spec.weight.g = SparsePolynomial(3, {{MultiIndex{1, 0, 0}, 1.0}});
  EXPECT_NEAR(entropy(spec).log_integral, -1.5, 1e-14);
  EntropyOptions quad;
  quad.force_quadrature = true;
  EXPECT_NEAR(entropy(spec, quad).log_integral, -1.5, 1e-6);
}

TEST(Moments, EntropyBelowLogMass) {
  for (const std::string& name : fixtures::test_presets()) {
    const MeasureSpec spec = preset(name);
    MeasureSpec ac = spec;
    ac.atoms.clear();
    EXPECT_LE(entropy(spec).log_integral, std::log(total_mass(ac)) + 1e-10) << name;
  }
}

TEST(Moments, EntropyOfZeroWeightIsNegativeInfinity) {
  MeasureSpec spec = preset("half-atom");
  spec.weight.scale = 0.0;
  const EntropyResult e = entropy(spec);
  EXPECT_TRUE(e.neg_infinity);
  EXPECT_EQ(e.exp_value(), 0.0);
}

TEST(Moments, QuadratureKernelIsDeterministic) {
  const MeasureSpec spec = preset("stable-demo");
  const MomentKernel a = quadrature_kernel(spec, 14, default_resolution(2));
  const MomentKernel b = quadrature_kernel(spec, 14, default_resolution(2));
  EXPECT_TRUE((a.entries.array() == b.entries.array()).all());
}
