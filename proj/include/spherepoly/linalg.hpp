#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherepoly {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Raised when a Schur-complement pivot falls below tolerance. `rank` is the
/// shortlex position (absolute, not window-local) of the failing pivot.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(std::size_t rank)
      : std::runtime_error("kernel not positive definite at shortlex rank " + std::to_string(rank)), rank_(rank) {}
  std::size_t rank() const { return rank_; }

 private:
  std::size_t rank_;
};

/// Relative pivot tolerance: a pivot <= kPivotTolerance * max diagonal is rejected.
inline constexpr double kPivotTolerance = 1e-12;

namespace detail {

inline double max_diagonal(const CMatrix& A) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < A.rows(); ++k) m = std::max(m, A(k, k).real());
  return m;
}

/// Index of the first leading window whose factorization fails, found by
/// re-factoring growing windows. Only used on the failure path.
inline Eigen::Index first_bad_pivot(const CMatrix& A) {
  const double floor = kPivotTolerance * max_diagonal(A);
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    Eigen::LLT<CMatrix> llt(A.topLeftCorner(k + 1, k + 1));
    if (llt.info() != Eigen::Success) return k;
    const double piv = std::norm(llt.matrixLLT()(k, k));
    if (!(piv > floor)) return k;
  }
  return A.rows();
}

inline CMatrix reversed(const CMatrix& A) { return A.reverse(); }

}  // namespace detail

/// Upper-triangular F with A = F^* F and positive real diagonal.
/// `offset` is added to the failing position when reporting.
inline CMatrix upper_cholesky(const CMatrix& A, std::size_t offset = 0) {
  if (A.rows() != A.cols()) throw std::invalid_argument("upper_cholesky: matrix not square");
  const double floor = kPivotTolerance * detail::max_diagonal(A);
  Eigen::LLT<CMatrix> llt(A);
  bool ok = llt.info() == Eigen::Success && detail::max_diagonal(A) > 0.0;
  CMatrix F;
  if (ok) {
    F = llt.matrixU();
    for (Eigen::Index k = 0; k < F.rows(); ++k) {
      if (!(std::norm(F(k, k)) > floor)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) throw NotPositiveDefinite(offset + static_cast<std::size_t>(detail::first_bad_pivot(A)));
  return F;
}

/// Lower-triangular G with A = G^* G and positive real diagonal, obtained from
/// the upper factor of the order-reversed matrix.
inline CMatrix lower_cholesky(const CMatrix& A, std::size_t offset = 0) {
  const Eigen::Index n = A.rows();
  try {
    return detail::reversed(upper_cholesky(detail::reversed(A)));
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(offset + static_cast<std::size_t>(n - 1) - e.rank());
  }
}

/// Last column of F^{-1} for upper-triangular F.
inline CVector last_column_of_inverse(const CMatrix& F) {
  const Eigen::Index n = F.rows();
  CVector e = CVector::Zero(n);
  e(n - 1) = 1.0;
  return F.triangularView<Eigen::Upper>().solve(e);
}

/// First column of G^{-1} for lower-triangular G.
inline CVector first_column_of_inverse(const CMatrix& G) {
  const Eigen::Index n = G.rows();
  CVector e = CVector::Zero(n);
  e(0) = 1.0;
  return G.triangularView<Eigen::Lower>().solve(e);
}

/// log det A from a triangular factor: sum of 2 log |F_kk|.
inline double log_det_from_factor(const CMatrix& F) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < F.rows(); ++k) s += 2.0 * std::log(std::abs(F(k, k)));
  return s;
}

/// Quad-precision scalar and the minimal complex arithmetic used by the
/// pivot computation below.
using quad = boost::multiprecision::cpp_bin_float_quad;

struct QuadComplex {
  quad re = 0, im = 0;
  QuadComplex() = default;
  QuadComplex(quad r, quad i) : re(std::move(r)), im(std::move(i)) {}
  explicit QuadComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}
  QuadComplex conj() const { return {re, -im}; }
  quad norm() const { return re * re + im * im; }
  QuadComplex operator+(const QuadComplex& o) const { return {re + o.re, im + o.im}; }
  QuadComplex operator-(const QuadComplex& o) const { return {re - o.re, im - o.im}; }
  QuadComplex operator*(const QuadComplex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  QuadComplex operator*(const quad& s) const { return {re * s, im * s}; }
  QuadComplex operator/(const quad& s) const { return {re / s, im / s}; }
};

/// Pivots (Schur complements) of the LDL^* factorization of the window
/// A[i..j], in quad precision. pivots[k] = det A[i..i+k] / det A[i..i+k-1].
/// Rejects pivots below tolerance relative to the largest diagonal of A.
inline std::vector<quad> ldl_pivots(const CMatrix& A, std::size_t i, std::size_t j) {
  if (j < i || static_cast<Eigen::Index>(j) >= A.rows()) throw std::out_of_range("ldl_pivots: bad window");
  const std::size_t n = j - i + 1;
  double dmax = 0.0;
  for (std::size_t k = i; k <= j; ++k) dmax = std::max(dmax, A(k, k).real());
  const quad floor = quad(kPivotTolerance) * quad(dmax);
  std::vector<std::vector<QuadComplex>> L(n, std::vector<QuadComplex>(n));
  std::vector<quad> D(n);
  for (std::size_t k = 0; k < n; ++k) {
    quad dk = A(i + k, i + k).real();
    for (std::size_t m = 0; m < k; ++m) dk -= L[k][m].norm() * D[m];
    if (!(dk > floor)) throw NotPositiveDefinite(i + k);
    D[k] = dk;
    for (std::size_t r = k + 1; r < n; ++r) {
      QuadComplex s(A(i + r, i + k));
      for (std::size_t m = 0; m < k; ++m) s = s - L[r][m] * L[k][m].conj() * D[m];
      L[r][k] = s / dk;
    }
  }
  return D;
}

}  // namespace spherepoly
