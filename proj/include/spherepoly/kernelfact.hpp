#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "spherepoly/linalg.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/multiindex.hpp"

namespace spherepoly {

/// Both triangular factorizations of the window K[i..j] with the columns of
/// the inverses that carry the polynomial coefficients.
struct CholeskyWindow {
  std::size_t i = 0, j = 0;
  CMatrix F;       ///< upper, K[i..j] = F^* F
  CMatrix G;       ///< lower, K[i..j] = G^* G
  CVector P;       ///< last column of F^{-1}
  CVector Psharp;  ///< first column of G^{-1}
};

inline void check_window(const MomentKernel& K, std::size_t i, std::size_t j) {
  if (i > j || j > K.N) throw std::out_of_range("window out of range");
}

inline CholeskyWindow cholesky_window(const MomentKernel& K, std::size_t i, std::size_t j) {
  check_window(K, i, j);
  CholeskyWindow w;
  w.i = i;
  w.j = j;
  const CMatrix A = K.window(i, j);
  w.F = upper_cholesky(A, i);
  w.G = lower_cholesky(A, i);
  w.P = last_column_of_inverse(w.F);
  w.Psharp = first_column_of_inverse(w.G);
  return w;
}

/// |gamma_{i,j}| from the four-window determinant ratio
///   1 - |gamma|^2 = det K[i..j] det K[i+1..j-1] / (det K[i..j-1] det K[i+1..j]),
/// evaluated as a ratio of two quad-precision Schur pivots so that small
/// coefficients keep their relative accuracy.
inline double verblunsky_modulus(const MomentKernel& K, std::size_t i, std::size_t j) {
  check_window(K, i, j);
  if (i >= j) throw std::invalid_argument("verblunsky_modulus: need i < j");
  const quad outer = ldl_pivots(K.entries, i, j).back();
  const quad inner = ldl_pivots(K.entries, i + 1, j).back();
  const quad one_minus = quad(1) - outer / inner;
  const double g2 = std::clamp(one_minus.convert_to<double>(), 0.0, 1.0);
  return std::sqrt(g2);
}

/// All moduli |gamma_{i,j}|, 0 <= i < j <= K.N. Row i reuses the pivots of the
/// single window K[i..N]: the pivot at position j is det K[i..j] / det K[i..j-1].
inline Eigen::MatrixXd verblunsky_modulus_table(const MomentKernel& K) {
  const std::size_t n = K.N + 1;
  std::vector<std::vector<quad>> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = ldl_pivots(K.entries, i, K.N);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const quad one_minus = quad(1) - piv[i][j - i] / piv[i + 1][j - i - 1];
      out(i, j) = std::sqrt(std::clamp(one_minus.convert_to<double>(), 0.0, 1.0));
    }
  }
  return out;
}

namespace detail {

/// gamma_{i,j} for all j in (i, J], computed on the normalized kernel Kt.
/// With F the upper factor of Kt[i+1..J], the projection of column j onto
/// positions i+1..j-1 has coordinates given by the leading part of column
/// j - i - 1 of F, and the residual norm squared is that column's diagonal entry squared.
inline std::vector<cplx> verblunsky_row(const CMatrix& Kt, std::size_t i, std::size_t J) {
  std::vector<cplx> row(J - i + 1, 0.0);
  if (J == i) return row;
  row[1] = Kt(i, i + 1);
  if (J == i + 1) return row;
  const Eigen::Index m = static_cast<Eigen::Index>(J - i);
  const CMatrix mid = Kt.block(i + 1, i + 1, m, m);
  const CMatrix F = upper_cholesky(mid, i + 1);
  // x = F^{-*} Kt[i+1..J, i]
  const CVector x = F.adjoint().triangularView<Eigen::Lower>().solve(Kt.block(i + 1, i, m, 1));
  double xx = 0.0;
  cplx xy;
  for (std::size_t j = i + 2; j <= J; ++j) {
    const Eigen::Index k = static_cast<Eigen::Index>(j - i - 1);  // mid window has k entries
    xx += std::norm(x(k - 1));
    xy = x.head(k).dot(F.col(k).head(k));  // conjugates the first argument
    const double ex = 1.0 - xx;
    const double ey = std::norm(F(k, k));
    if (!(ex > 0.0) || !(ey > 0.0)) throw NotPositiveDefinite(j);
    row[j - i] = (Kt(i, j) - xy) / std::sqrt(ex * ey);
  }
  return row;
}

}  // namespace detail

/// gamma_{i,j}: correlation of the residuals of positions i and j after
/// projecting both onto positions i+1..j-1, in the inner product given by the
/// normalized kernel. Adjacent windows give the normalized entry itself.
inline cplx verblunsky(const MomentKernel& K, std::size_t i, std::size_t j) {
  check_window(K, i, j);
  if (i >= j) throw std::invalid_argument("verblunsky: need i < j");
  const CMatrix Kt = normalized(K).entries;
  return detail::verblunsky_row(Kt, i, j).back();
}

/// gamma_{i,j} and defects sqrt(1 - |gamma_{i,j}|^2) for 0 <= i <= j <= N,
/// with gamma_{i,i} = 0.
struct VerblunskyTable {
  std::size_t N = 0;
  CMatrix gamma;           ///< upper triangle used; diagonal zero
  Eigen::MatrixXd defect;  ///< upper triangle used; diagonal one

  cplx operator()(std::size_t i, std::size_t j) const {
    if (i > j) throw std::invalid_argument("VerblunskyTable: need i <= j");
    return gamma(i, j);
  }
  double d(std::size_t i, std::size_t j) const { return defect(i, j); }

  void set(std::size_t i, std::size_t j, cplx g) {
    gamma(i, j) = g;
    const double a = std::abs(g);
    defect(i, j) = std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
  }

  static VerblunskyTable zeros(std::size_t N) {
    VerblunskyTable t;
    t.N = N;
    const Eigen::Index n = static_cast<Eigen::Index>(N + 1);
    t.gamma = CMatrix::Zero(n, n);
    t.defect = Eigen::MatrixXd::Ones(n, n);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t j = i + 1; j <= N; ++j) m = std::max(m, std::abs(gamma(i, j)));
    return m;
  }
};

inline VerblunskyTable verblunsky_table(const MomentKernel& K, std::size_t N) {
  if (N > K.N) throw std::out_of_range("verblunsky_table: N beyond kernel window");
  upper_cholesky(K.entries.topLeftCorner(N + 1, N + 1));  // reports the first failing rank
  const CMatrix Kt = normalized(K).entries;
  VerblunskyTable t = VerblunskyTable::zeros(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::vector<cplx> row = detail::verblunsky_row(Kt, i, N);
    for (std::size_t j = i + 1; j <= N; ++j) t.set(i, j, row[j - i]);
  }
  return t;
}

inline VerblunskyTable verblunsky_table(const MomentKernel& K) { return verblunsky_table(K, K.N); }

/// Relative deviation of det K[0..r] from prod K(b, b) * prod_{i<j<=r} d_{i,j}^2,
/// r = rank(a). Both sides are compared through their logarithms.
inline double determinant_identity_residual(const MomentKernel& K, const VerblunskyTable& table, const MultiIndex& a) {
  const std::size_t r = static_cast<std::size_t>(shortlex_rank(a));
  if (r > table.N || r > K.N) throw std::out_of_range("determinant_identity_residual: rank beyond table");
  const double logdet = log_det_from_factor(upper_cholesky(K.window(0, r)));
  double logprod = 0.0;
  for (std::size_t b = 0; b <= r; ++b) logprod += std::log(K(b, b).real());
  for (std::size_t j = 1; j <= r; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double g = std::abs(table(i, j));
      logprod += std::log1p(-g * g);
    }
  return std::abs(std::expm1(logprod - logdet));
}

/// Inverse map: the Hermitian kernel with the given diagonal whose
/// coefficient table is `table`, filled outward by window width.
inline MomentKernel reconstruct_kernel(const std::vector<double>& diag, const VerblunskyTable& table, std::size_t N, std::size_t d = 1) {
  if (diag.size() < N + 1) throw std::invalid_argument("reconstruct_kernel: diagonal too short");
  if (N > table.N) throw std::invalid_argument("reconstruct_kernel: table too small");
  for (std::size_t k = 0; k <= N; ++k)
    if (!(diag[k] > 0.0)) throw std::invalid_argument("reconstruct_kernel: diagonal entries must be positive");
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = i + 1; j <= N; ++j)
      if (!(std::abs(table(i, j)) < 1.0)) throw std::invalid_argument("reconstruct_kernel: |gamma| must be < 1");

  const Eigen::Index n = static_cast<Eigen::Index>(N + 1);
  CMatrix Kt = CMatrix::Identity(n, n);
  for (std::size_t w = 1; w <= N; ++w) {
    for (std::size_t i = 0; i + w <= N; ++i) {
      const std::size_t j = i + w;
      cplx value;
      if (w == 1) {
        value = table(i, j);
      } else {
        const Eigen::Index m = static_cast<Eigen::Index>(w - 1);
        const CMatrix F = upper_cholesky(Kt.block(i + 1, i + 1, m, m), i + 1);
        const auto Fs = F.adjoint().triangularView<Eigen::Lower>();
        const CVector x = Fs.solve(Kt.block(i + 1, i, m, 1));
        const CVector y = Fs.solve(Kt.block(i + 1, j, m, 1));
        const double ex = 1.0 - x.squaredNorm(), ey = 1.0 - y.squaredNorm();
        value = x.dot(y) + table(i, j) * std::sqrt(std::max(0.0, ex) * std::max(0.0, ey));
      }
      Kt(i, j) = value;
      Kt(j, i) = std::conj(value);
    }
  }
  MomentKernel K{d, N, CMatrix(n, n), Provenance::exact};
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) K.entries(r, c) = Kt(r, c) * std::sqrt(diag[r] * diag[c]);
  for (Eigen::Index r = 0; r < n; ++r) K.entries(r, r) = diag[r];
  return K;
}

}  // namespace spherepoly
