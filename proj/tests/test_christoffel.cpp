#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spherepoly/christoffel.hpp"
#include "spherepoly/verify.hpp"

using namespace spherepoly;

namespace {

OrthonormalSystem system_for(const std::string& name, std::size_t N) { return gram_schmidt(fixtures::kernel(name, N), N); }

std::vector<Point> probe_points(std::size_t d) {
  std::vector<Point> pts{Point(d, 0.0), interior_test_point(d)};
  Point p(d, 0.0);
  p[0] = cplx(-0.2, 0.35);
  if (d > 1) p[1] = cplx(0.4, -0.1);
  pts.push_back(p);
  return pts;
}

}  // namespace

TEST(Christoffel, CdKernelExamples) {
  const OrthonormalSystem sigma = system_for("lebesgue", 5);
  const Point o(2, 0.0);
  EXPECT_NEAR(std::abs(cd_kernel(sigma, 0, o, o) - 1.0), 0.0, 1e-15);
  const Point z{0.5, 0.0};
  // levels 0 and 1: 1 + 2 |z1|^2 + 2 |z2|^2
  EXPECT_NEAR(std::abs(cd_kernel(sigma, 1, z, z) - 1.5), 0.0, 1e-14);
}

TEST(Christoffel, CdKernelIsHermitian) {
  const OrthonormalSystem sys = system_for("stable-demo", 20);
  const std::vector<Point> pts = probe_points(2);
  for (const Point& z : pts)
    for (const Point& w : pts) EXPECT_NEAR(std::abs(cd_kernel(sys, 4, z, w) - std::conj(cd_kernel(sys, 4, w, z))), 0.0, 1e-12);
}

TEST(Christoffel, LambdaExamples) {
  const Point o(2, 0.0);
  const OrthonormalSystem cx = system_for("counterexample", 27);
  for (unsigned n = 0; n <= 6; ++n) EXPECT_NEAR(lambda_n(cx, n, o), 1.0, 1e-12);
  const OrthonormalSystem sigma = system_for("lebesgue", 27);
  EXPECT_EQ(lambda_n(sigma, 0, o), 1.0);
  const OrthonormalSystem half = system_for("half-atom", 27);
  for (unsigned m = 1; m <= 6; ++m) EXPECT_LE(lambda_n(half, m, o), 0.5 * (1.0 + 1.0 / (m + 1)) + 1e-10) << m;
  EXPECT_THROW(lambda_n(sigma, 7, o), std::out_of_range);
}

TEST(Christoffel, TwoPathsAgree) {
  for (const std::string& name : fixtures::test_presets()) {
    const MomentKernel K = fixtures::kernel(name, 20);
    const OrthonormalSystem sys = gram_schmidt(K, 20);
    for (const Point& z : probe_points(K.d))
      for (std::size_t r = 0; r <= 20; ++r) {
        const double a = lambda_at_rank(sys, r, z);
        EXPECT_NEAR(a, lambda_via_inverse_at_rank(K, r, z), 1e-10 * a) << name << " " << r;
      }
  }
}

TEST(Christoffel, TwoPathsAgreeWithComplexMoments) {
  MeasureSpec spec;
  spec.d = 2;
  spec.weight.g = SparsePolynomial(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 0}, cplx(0.2, 0.3)}, {MultiIndex{0, 1}, cplx(-0.1, 0.25)}});
  const MomentKernel K = kernel_window(normalize(spec), 20);
  const OrthonormalSystem sys = gram_schmidt(K, 20);
  for (const Point& z : probe_points(2))
    for (unsigned n = 0; n <= 4; ++n) {
      const double a = lambda_n(sys, n, z);
      EXPECT_NEAR(a, lambda_n_via_inverse(K, n, z), 1e-10 * a);
    }
}

TEST(Christoffel, KktOracleOnSmallWindows) {
  std::vector<MomentKernel> kernels;
  for (const std::string& name : fixtures::test_presets()) kernels.push_back(fixtures::kernel(name, 5));
  MeasureSpec spec;
  spec.d = 2;
  spec.weight.g = SparsePolynomial(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 0}, cplx(0.2, 0.3)}, {MultiIndex{0, 1}, cplx(-0.1, 0.25)}});
  kernels.push_back(kernel_window(normalize(spec), 5));
  for (const MomentKernel& K : kernels) {
    const OrthonormalSystem sys = gram_schmidt(K, 5);
    for (const Point& z : probe_points(K.d))
      for (std::size_t r = 0; r <= 5; ++r) {
        const std::vector<cplx> v = monomial_vector(z, r);
        const double ref = oracle::kkt_christoffel(K.window(0, r), Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(r + 1)));
        EXPECT_NEAR(lambda_at_rank(sys, r, z), ref, 1e-9);
        EXPECT_NEAR(lambda_via_inverse_at_rank(K, r, z), ref, 1e-9);
      }
  }
}

TEST(Christoffel, MinimizerIsExtremal) {
  for (const std::string& name : fixtures::test_presets()) {
    const MomentKernel K = fixtures::kernel(name, 20);
    const OrthonormalSystem sys = gram_schmidt(K, 20);
    for (const Point& z : probe_points(K.d)) {
      const BallPolynomial P = minimizer_at_rank(sys, 20, z);
      EXPECT_NEAR(std::abs(P(z) - 1.0), 0.0, 1e-10) << name;
      const double lam = lambda_at_rank(sys, 20, z);
      EXPECT_NEAR(norm_squared(K, P), lam, 1e-10 * lam) << name;
    }
  }
}

TEST(Christoffel, NonIncreasingInLevel) {
  for (const std::string& name : fixtures::test_presets()) {
    const OrthonormalSystem sys = system_for(name, 27);
    for (const Point& z : probe_points(sys.d())) {
      const ChristoffelSequence seq = christoffel_sequence(sys, z);
      for (std::size_t n = 1; n < seq.values.size(); ++n) EXPECT_LE(seq.values[n], seq.values[n - 1] + 1e-12) << name << " " << n;
    }
  }
}

TEST(Christoffel, TailBracketExamples) {
  const Point o(2, 0.0);
  const TailBracket cx = lambda_tail_bracket(preset("counterexample"), o, 6);
  EXPECT_NEAR(cx.upper, 1.0, 1e-12);
  EXPECT_NEAR(cx.lower, 2.0 / std::exp(1.0), 1e-8);
  const TailBracket sigma = lambda_tail_bracket(preset("lebesgue"), o, 6);
  EXPECT_NEAR(sigma.width(), 0.0, 1e-9);
  const TailBracket off = lambda_tail_bracket(preset("lebesgue"), interior_test_point(2), 3);
  EXPECT_EQ(off.lower, 0.0);
  EXPECT_GT(off.upper, 0.0);
}

TEST(Christoffel, AtomsOnlyRaiseLambda) {
  MeasureSpec ac = preset("half-atom");
  ac.atoms.clear();
  const MomentKernel Kmu = fixtures::kernel("half-atom", 20);
  const MomentKernel Kac = kernel_window(ac, 20);
  const OrthonormalSystem mu = gram_schmidt(Kmu, 20), half = gram_schmidt(Kac, 20);
  for (const Point& z : probe_points(2))
    for (std::size_t r = 0; r <= 20; ++r) EXPECT_GE(lambda_at_rank(mu, r, z), lambda_at_rank(half, r, z) - 1e-12);
  for (std::size_t r = 0; r <= 20; ++r) EXPECT_NEAR(lambda_at_rank(half, r, Point(2, 0.0)), 0.5, 1e-12);
}
