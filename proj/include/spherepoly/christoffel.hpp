#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spherepoly/linalg.hpp"
#include "spherepoly/measure.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/multiindex.hpp"
#include "spherepoly/orthopoly.hpp"

namespace spherepoly {

/// Rank of the last multi-index of length n, checked against the system.
inline std::size_t level_rank(const OrthonormalSystem& sys, unsigned n) {
  const std::size_t r = static_cast<std::size_t>(level_last_rank(sys.d(), n));
  if (r > sys.N) throw std::out_of_range("level beyond orthonormal system");
  return r;
}

/// phi_0(z), ..., phi_r(z).
inline std::vector<cplx> phi_values(const OrthonormalSystem& sys, std::size_t r, const Point& z) {
  const std::vector<cplx> v = monomial_vector(z, r);
  std::vector<cplx> out(r + 1, 0.0);
  for (std::size_t k = 0; k <= r; ++k)
    for (std::size_t b = 0; b <= k; ++b) out[k] += sys.phi[k].coeffs[b] * v[b];
  return out;
}

/// Christoffel-Darboux kernel summed over ranks 0..r.
inline cplx cd_kernel_at_rank(const OrthonormalSystem& sys, std::size_t r, const Point& z, const Point& w) {
  const std::vector<cplx> pz = phi_values(sys, r, z), pw = phi_values(sys, r, w);
  cplx s = 0.0;
  for (std::size_t k = 0; k <= r; ++k) s += pz[k] * std::conj(pw[k]);
  return s;
}

/// sum over alpha <= alpha(n) of phi_alpha(z) conj(phi_alpha(w)).
inline cplx cd_kernel(const OrthonormalSystem& sys, unsigned n, const Point& z, const Point& w) {
  return cd_kernel_at_rank(sys, level_rank(sys, n), z, w);
}

/// 1 / sum_{k <= r} |phi_k(z)|^2.
inline double lambda_at_rank(const OrthonormalSystem& sys, std::size_t r, const Point& z) {
  if (r > sys.N) throw std::out_of_range("lambda_at_rank: rank beyond system");
  const std::vector<cplx> pz = phi_values(sys, r, z);
  double s = 0.0;
  for (const cplx& c : pz) s += std::norm(c);
  return 1.0 / s;
}

inline double lambda_n(const OrthonormalSystem& sys, unsigned n, const Point& z) { return lambda_at_rank(sys, level_rank(sys, n), z); }

/// 1 / (v^* K^{-1} v) with v = (z^b) over ranks 0..r, computed as the squared
/// norm of F^{-*} v through the upper factor of K[0..r].
inline double lambda_via_inverse_at_rank(const MomentKernel& K, std::size_t r, const Point& z) {
  if (r > K.N) throw std::out_of_range("lambda_via_inverse: rank beyond kernel window");
  const CMatrix F = upper_cholesky(K.window(0, r));
  const std::vector<cplx> v = monomial_vector(z, r);
  const CVector y = F.adjoint().triangularView<Eigen::Lower>().solve(Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(r + 1)));
  return 1.0 / y.squaredNorm();
}

inline double lambda_n_via_inverse(const MomentKernel& K, unsigned n, const Point& z) {
  const std::size_t r = static_cast<std::size_t>(level_last_rank(K.d, n));
  return lambda_via_inverse_at_rank(K, r, z);
}

/// P = sum_k lambda conj(phi_k(z)) phi_k over ranks 0..r: the extremal
/// polynomial with P(z) = 1.
inline BallPolynomial minimizer_at_rank(const OrthonormalSystem& sys, std::size_t r, const Point& z) {
  const std::vector<cplx> pz = phi_values(sys, r, z);
  double s = 0.0;
  for (const cplx& c : pz) s += std::norm(c);
  const double lam = 1.0 / s;
  std::vector<cplx> coeffs(r + 1, 0.0);
  for (std::size_t k = 0; k <= r; ++k)
    for (std::size_t b = 0; b <= k; ++b) coeffs[b] += lam * std::conj(pz[k]) * sys.phi[k].coeffs[b];
  return {sys.d(), std::move(coeffs)};
}

inline BallPolynomial minimizer(const OrthonormalSystem& sys, unsigned n, const Point& z) {
  return minimizer_at_rank(sys, level_rank(sys, n), z);
}

/// lambda_0(z), lambda_1(z), ... for every level whose last rank fits in the system.
struct ChristoffelSequence {
  Point z;
  std::vector<double> values;
  std::vector<BallPolynomial> minimizers;
};

inline ChristoffelSequence christoffel_sequence(const OrthonormalSystem& sys, const Point& z, bool with_minimizers = false) {
  ChristoffelSequence seq;
  seq.z = z;
  for (unsigned n = 0; level_last_rank(sys.d(), n) <= sys.N; ++n) {
    seq.values.push_back(lambda_n(sys, n, z));
    if (with_minimizers) seq.minimizers.push_back(minimizer(sys, n, z));
  }
  return seq;
}

/// lambda_infinity(z) lies in [lower, upper]. The lower edge is exp(entropy)
/// at the origin and 0 elsewhere or when the entropy is -infinity.
struct TailBracket {
  double upper = 0.0;
  double lower = 0.0;
  double width() const { return upper - lower; }
};

inline bool is_origin(const Point& z) {
  for (const cplx& c : z)
    if (c != cplx(0.0)) return false;
  return true;
}

inline TailBracket lambda_tail_bracket(const OrthonormalSystem& sys, const EntropyResult& ent, const Point& z, unsigned N) {
  TailBracket b;
  b.upper = lambda_n(sys, N, z);
  b.lower = is_origin(z) ? ent.exp_value() : 0.0;
  return b;
}

/// Bracket for the probability-normalized spec at level N.
inline TailBracket lambda_tail_bracket(const MeasureSpec& spec, const Point& z, unsigned N) {
  const MeasureSpec s = normalize(spec);
  const std::size_t r = static_cast<std::size_t>(level_last_rank(s.d, N));
  const OrthonormalSystem sys = gram_schmidt(kernel_window(s, r), r);
  return lambda_tail_bracket(sys, entropy(s), z, N);
}

}  // namespace spherepoly
