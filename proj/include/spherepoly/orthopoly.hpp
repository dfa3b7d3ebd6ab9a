#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spherepoly/kernelfact.hpp"
#include "spherepoly/linalg.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/multiindex.hpp"
#include "spherepoly/sphere_integrals.hpp"

namespace spherepoly {

/// Polynomial on C^d with dense coefficients indexed by shortlex rank.
struct BallPolynomial {
  std::size_t d = 1;
  std::vector<cplx> coeffs;

  BallPolynomial() = default;
  BallPolynomial(std::size_t dim, std::vector<cplx> c) : d(dim), coeffs(std::move(c)) {}
  BallPolynomial(std::size_t dim, const CVector& c) : d(dim), coeffs(c.data(), c.data() + c.size()) {}

  static BallPolynomial constant(std::size_t dim, cplx c) { return {dim, std::vector<cplx>{c}}; }

  /// Highest rank carrying a coefficient of modulus above 1e-14; -1 for zero.
  long multi_degree() const {
    for (std::size_t r = coeffs.size(); r-- > 0;)
      if (std::abs(coeffs[r]) > 1e-14) return static_cast<long>(r);
    return -1;
  }

  cplx leading() const {
    const long r = multi_degree();
    return r < 0 ? cplx(0.0) : coeffs[static_cast<std::size_t>(r)];
  }

  cplx operator()(const Point& z) const { return evaluate(z); }

  cplx evaluate(const Point& z) const {
    if (z.size() != d) throw std::invalid_argument("BallPolynomial: point dimension mismatch");
    if (coeffs.empty()) return 0.0;
    const std::vector<cplx> v = monomial_vector(z, coeffs.size() - 1);
    cplx s = 0.0;
    for (std::size_t r = 0; r < coeffs.size(); ++r) s += coeffs[r] * v[r];
    return s;
  }

  /// Coefficients padded with zeros to ranks 0..N.
  CVector padded(std::size_t N) const {
    CVector c = CVector::Zero(static_cast<Eigen::Index>(N + 1));
    for (std::size_t r = 0; r < coeffs.size() && r <= N; ++r) c(static_cast<Eigen::Index>(r)) = coeffs[r];
    return c;
  }
};

inline cplx evaluate(const BallPolynomial& p, const Point& z) { return p.evaluate(z); }

/// sum c_b z^b  ->  sum c_b z^{succ(b)}: every coefficient moves up one rank.
inline BallPolynomial shift_succ(const BallPolynomial& p) {
  if (p.coeffs.empty()) return p;
  std::vector<cplx> c(p.coeffs.size() + 1, 0.0);
  std::copy(p.coeffs.begin(), p.coeffs.end(), c.begin() + 1);
  return {p.d, std::move(c)};
}

/// Integral of |p|^2 dmu. With K(a, b) = integral of z^a conj(z)^b this is
/// the quadratic form c^T K conj(c).
inline double norm_squared(const MomentKernel& K, const BallPolynomial& p) {
  if (p.coeffs.size() > K.size()) throw std::out_of_range("norm_squared: polynomial beyond kernel window");
  const CVector c = p.padded(K.N);
  return (c.transpose() * K.entries * c.conjugate())(0, 0).real();
}

/// Orthonormal (phi), monic (Phi) and sharp (phiSharp) polynomials for ranks 0..N.
struct OrthonormalSystem {
  MomentKernel K;
  std::size_t N = 0;
  std::vector<BallPolynomial> phi;
  std::vector<BallPolynomial> Phi;
  std::vector<BallPolynomial> phiSharp;
  CMatrix F;  ///< upper factor of K[0..N]

  std::size_t d() const { return K.d; }

  /// Leading coefficient a_{r,r} of phi_r.
  double leading_coefficient(std::size_t r) const { return phi.at(r).coeffs.at(r).real(); }
};

/// phiSharp_r has the conjugated first column of G^{-1} as coefficients,
/// where K[0..r] = G^* G with G lower triangular.
inline std::vector<BallPolynomial> sharp_polys(const MomentKernel& K, std::size_t N) {
  if (N > K.N) throw std::out_of_range("sharp_polys: N beyond kernel window");
  std::vector<BallPolynomial> out;
  for (std::size_t r = 0; r <= N; ++r) out.emplace_back(K.d, CVector(cholesky_window(K, 0, r).Psharp.conjugate()));
  return out;
}

/// With K[0..N] = F^* F, the columns c of F^{-1} satisfy c^* K c = 1, so the
/// polynomials with coefficients conj(c) are orthonormal in L^2(mu). The
/// leading windows share the leading blocks of F, so one factorization serves
/// all ranks. Leading coefficients and phiSharp(0) are real and positive.
inline OrthonormalSystem gram_schmidt(const MomentKernel& K, std::size_t N) {
  if (N > K.N) throw std::out_of_range("gram_schmidt: N beyond kernel window");
  OrthonormalSystem sys;
  sys.K = K;
  sys.N = N;
  sys.F = upper_cholesky(K.window(0, N));
  const Eigen::Index n = static_cast<Eigen::Index>(N + 1);
  const CMatrix Finv = sys.F.triangularView<Eigen::Upper>().solve(CMatrix::Identity(n, n));
  for (std::size_t r = 0; r <= N; ++r) {
    const CVector col = Finv.col(static_cast<Eigen::Index>(r)).head(static_cast<Eigen::Index>(r + 1)).conjugate();
    sys.phi.emplace_back(K.d, col);
    sys.Phi.emplace_back(K.d, CVector(col / col(static_cast<Eigen::Index>(r))));
  }
  sys.phiSharp = sharp_polys(K, N);
  return sys;
}


/// Max-norm residuals of the two coupled recurrences at rank r = rank(a) >= 1,
/// with gamma = gamma_{0,r}, d = sqrt(1 - |gamma|^2) and S the orthonormal
/// window polynomial of K[1..r] (conjugated last column of its inverse upper
/// factor) shifted one rank up:
///   phi_r      = (S - conj(gamma) phiSharp_{r-1}) / d
///   phiSharp_r = (phiSharp_{r-1} - gamma S) / d
/// In one variable this is the classical recursion with gamma_{0,r} = alpha_{r-1}.
inline std::pair<double, double> recurrence_residual(const OrthonormalSystem& sys, const VerblunskyTable& table, const MultiIndex& a) {
  const std::size_t r = static_cast<std::size_t>(shortlex_rank(a));
  if (r == 0) throw std::invalid_argument("recurrence_residual: rank must be >= 1");
  if (r > sys.N || r > table.N) throw std::out_of_range("recurrence_residual: rank beyond system");
  const CholeskyWindow w = cholesky_window(sys.K, 1, r);
  const Eigen::Index n = static_cast<Eigen::Index>(r + 1);
  CVector S = CVector::Zero(n);
  S.tail(n - 1) = w.P.conjugate();
  const CVector prev = sys.phiSharp[r - 1].padded(r);
  const cplx g = table(0, r);
  const double dd = table.d(0, r);
  const CVector phi_pred = (S - std::conj(g) * prev) / dd;
  const CVector sharp_pred = (prev - g * S) / dd;
  const double r1 = (sys.phi[r].padded(r) - phi_pred).cwiseAbs().maxCoeff();
  const double r2 = (sys.phiSharp[r].padded(r) - sharp_pred).cwiseAbs().maxCoeff();
  return {r1, r2};
}

/// Gram matrix [integral of phi_m conj(phi_n) dmu].
inline CMatrix gram_matrix(const OrthonormalSystem& sys) {
  const Eigen::Index n = static_cast<Eigen::Index>(sys.N + 1);
  CMatrix C = CMatrix::Zero(n, n);
  for (std::size_t r = 0; r <= sys.N; ++r) C.col(static_cast<Eigen::Index>(r)) = sys.phi[r].padded(sys.N);
  return C.transpose() * sys.K.window(0, sys.N) * C.conjugate();
}

}  // namespace spherepoly
