#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spherepoly/linalg.hpp"
#include "spherepoly/measure.hpp"
#include "spherepoly/multiindex.hpp"
#include "spherepoly/sphere_integrals.hpp"

namespace spherepoly {

enum class Provenance { exact, quadrature };

inline const char* to_string(Provenance p) { return p == Provenance::exact ? "exact" : "quadrature"; }

/// Dense window [K(alpha, beta)] over shortlex ranks 0..N.
struct MomentKernel {
  std::size_t d = 0;
  std::size_t N = 0;
  CMatrix entries;
  Provenance provenance = Provenance::exact;

  std::size_t size() const { return N + 1; }
  cplx operator()(std::size_t m, std::size_t n) const { return entries(m, n); }

  /// Sub-window over ranks i..j.
  CMatrix window(std::size_t i, std::size_t j) const {
    return entries.block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - i + 1),
                         static_cast<Eigen::Index>(j - i + 1));
  }

  double max_abs() const { return entries.cwiseAbs().maxCoeff(); }

  /// True when every leading principal window passes the pivot test.
  bool nontrivial() const {
    try {
      upper_cholesky(entries);
      return true;
    } catch (const NotPositiveDefinite&) {
      return false;
    }
  }
};

inline cplx atom_moment(const std::vector<Atom>& atoms, const MultiIndex& a, const MultiIndex& b) {
  cplx s = 0.0;
  for (const Atom& at : atoms) s += at.mass() * monomial(a, at.point()) * std::conj(monomial(b, at.point()));
  return s;
}

/// Sphere rule nodes with weight w folded in, plus monomial columns
/// sqrt(weight) z^beta for ranks 0..N, accumulated chunk by chunk.
inline CMatrix quadrature_weight_kernel(const MeasureSpec& spec, std::size_t N, QuadratureResolution res) {
  const SphereRule rule = sphere_rule(spec.d, res);
  const Eigen::Index n = static_cast<Eigen::Index>(N + 1);
  CMatrix K = CMatrix::Zero(n, n);
  if (!spec.has_weight()) return K;
  constexpr std::size_t chunk = 4096;
  CMatrix A(static_cast<Eigen::Index>(chunk), n);
  for (std::size_t start = 0; start < rule.size(); start += chunk) {
    const std::size_t stop = std::min(rule.size(), start + chunk);
    A.setZero();
    for (std::size_t k = start; k < stop; ++k) {
      const double w = rule.weights[k] * spec.weight(rule.nodes[k]);
      const double r = std::sqrt(std::max(w, 0.0));
      const std::vector<cplx> v = monomial_vector(rule.nodes[k], N);
      for (Eigen::Index c = 0; c < n; ++c) A(static_cast<Eigen::Index>(k - start), c) = r * v[static_cast<std::size_t>(c)];
    }
    K.noalias() += A.transpose() * A.conjugate();
  }
  return K;
}

/// Quadrature approximation of K(a, b) (weight part by the product rule,
/// atoms summed exactly).
inline cplx quadrature_moment(const MeasureSpec& spec, const MultiIndex& a, const MultiIndex& b, QuadratureResolution res) {
  const SphereRule rule = sphere_rule(spec.d, res);
  cplx s = 0.0;
  if (spec.has_weight())
    for (std::size_t k = 0; k < rule.size(); ++k)
      s += rule.weights[k] * spec.weight(rule.nodes[k]) * monomial(a, rule.nodes[k]) * std::conj(monomial(b, rule.nodes[k]));
  return s + atom_moment(spec.atoms, a, b);
}

inline cplx quadrature_moment(const MeasureSpec& spec, const MultiIndex& a, const MultiIndex& b) {
  return quadrature_moment(spec, a, b, default_resolution(spec.d));
}

/// K(a, b) = integral of z^a conj(z)^b dmu. Exact for exponent 2; other
/// exponents go through quadrature at the default resolution.
inline cplx moment(const MeasureSpec& spec, const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != spec.d || b.dim() != spec.d) throw std::invalid_argument("moment: dimension mismatch");
  if (!spec.exact_moments()) return quadrature_moment(spec, a, b);
  return exact_weight_moment(spec.weight, a, b) + atom_moment(spec.atoms, a, b);
}

/// Kernel over ranks 0..N computed by quadrature.
inline MomentKernel quadrature_kernel(const MeasureSpec& spec, std::size_t N, QuadratureResolution res) {
  MomentKernel K{spec.d, N, quadrature_weight_kernel(spec, N, res), Provenance::quadrature};
  const std::vector<MultiIndex> idx = shortlex_range(spec.d, N);
  for (std::size_t m = 0; m <= N; ++m)
    for (std::size_t n = 0; n <= N; ++n) K.entries(m, n) += atom_moment(spec.atoms, idx[m], idx[n]);
  // Symmetrize the rounding of the two triangles.
  const CMatrix herm = 0.5 * (K.entries + K.entries.adjoint());
  K.entries = herm;
  return K;
}

/// Kernel window over ranks 0..N. Exact for exponent 2, quadrature otherwise.
inline MomentKernel kernel_window(const MeasureSpec& spec, std::size_t N) {
  spec.validate();
  if (!spec.exact_moments()) return quadrature_kernel(spec, N, default_resolution(spec.d));
  const std::vector<MultiIndex> idx = shortlex_range(spec.d, N);
  MomentKernel K{spec.d, N, CMatrix(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N + 1)), Provenance::exact};
  for (std::size_t m = 0; m <= N; ++m) {
    K.entries(m, m) = moment(spec, idx[m], idx[m]).real();
    for (std::size_t n = m + 1; n <= N; ++n) {
      K.entries(m, n) = moment(spec, idx[m], idx[n]);
      K.entries(n, m) = std::conj(K.entries(m, n));
    }
  }
  return K;
}

/// K~(m, n) = K(m, n) / sqrt(K(m, m) K(n, n)).
inline MomentKernel normalized(const MomentKernel& K) {
  MomentKernel out = K;
  const Eigen::Index n = K.entries.rows();
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      out.entries(r, c) = K.entries(r, c) / std::sqrt(K.entries(r, r).real() * K.entries(c, c).real());
  for (Eigen::Index r = 0; r < n; ++r) out.entries(r, r) = 1.0;
  return out;
}

/// max over ranks m, n <= N of |K(m, n) - sum_j K(m + e_j, n + e_j)|, with the
/// shifted moments taken from the measure spec.
inline double check_measure_condition(const MomentKernel& K, const MeasureSpec& spec, std::size_t N) {
  if (N > K.N) throw std::out_of_range("check_measure_condition: N beyond kernel window");
  const std::vector<MultiIndex> idx = shortlex_range(K.d, N);
  double worst = 0.0;
  for (std::size_t m = 0; m <= N; ++m) {
    for (std::size_t n = 0; n <= N; ++n) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < K.d; ++j) {
        const MultiIndex e = MultiIndex::unit(K.d, j);
        s += moment(spec, idx[m] + e, idx[n] + e);
      }
      worst = std::max(worst, std::abs(K(m, n) - s));
    }
  }
  return worst;
}

/// Same residual using only entries of K itself: pairs whose shifted ranks
/// fall outside the window are skipped.
inline double check_measure_condition(const MomentKernel& K) {
  const std::vector<MultiIndex> idx = shortlex_range(K.d, K.N);
  double worst = 0.0;
  for (std::size_t m = 0; m <= K.N; ++m) {
    for (std::size_t n = 0; n <= K.N; ++n) {
      cplx s = 0.0;
      bool inside = true;
      for (std::size_t j = 0; j < K.d && inside; ++j) {
        const MultiIndex e = MultiIndex::unit(K.d, j);
        const std::uint64_t rm = shortlex_rank(idx[m] + e), rn = shortlex_rank(idx[n] + e);
        if (rm > K.N || rn > K.N) {
          inside = false;
        } else {
          s += K(rm, rn);
        }
      }
      if (inside) worst = std::max(worst, std::abs(K(m, n) - s));
    }
  }
  return worst;
}

/// Value of the integral of log w dsigma, or a flag when it is -infinity
/// (or below the per-node floor somewhere on the grid).
struct EntropyResult {
  double log_integral = 0.0;
  bool neg_infinity = false;
  Provenance method = Provenance::exact;
  std::size_t nodes = 0;

  /// exp of the integral; 0 when the integral is -infinity.
  double exp_value() const { return neg_infinity ? 0.0 : std::exp(log_integral); }
};

struct EntropyOptions {
  bool force_quadrature = false;
  std::optional<QuadratureResolution> resolution;
};

/// Lower clip for log w at a single node.
inline constexpr double kLogFloor = -1e6;

/// sum_{k=1}^{n} 1/k
inline double harmonic_number(std::size_t n) {
  double h = 0.0;
  for (std::size_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

/// Entropy grid: the log singularity at the simplex faces needs a finer
/// radial rule than the moments do in three dimensions.
inline QuadratureResolution default_entropy_resolution(std::size_t d) {
  QuadratureResolution res = default_resolution(d);
  if (d == 3) res.radial = 48;
  return res;
}

/// Integral of log(s |g|^p) against sigma.
///
/// When g = c z^a the integrand depends only on the moduli profile and the
/// integral is log s + p log|c| + (p/2) sum_j a_j E[log x_j], where
/// x is uniform on the simplex and E[log x_j] = -H_{d-1}. Otherwise the
/// product rule with a double-exponential radial rule is used.
inline EntropyResult entropy(const MeasureSpec& spec, const EntropyOptions& opt = {}) {
  EntropyResult r;
  if (!spec.has_weight()) {
    r.neg_infinity = true;
    r.log_integral = -std::numeric_limits<double>::infinity();
    return r;
  }
  const WeightSpec& w = spec.weight;
  MultiIndex a;
  cplx c;
  if (!opt.force_quadrature && w.g.as_monomial(a, c)) {
    const double p = w.exponent;
    r.log_integral = std::log(w.scale) + p * std::log(std::abs(c)) - 0.5 * p * static_cast<double>(a.length()) * harmonic_number(spec.d - 1);
    r.method = Provenance::exact;
    return r;
  }
  QuadratureResolution res = opt.resolution.value_or(default_entropy_resolution(spec.d));
  if (spec.d > 1 && res.radial < 3) res.radial = 3;
  const SphereRule rule = sphere_rule(spec.d, res, RadialRule::tanh_sinh);
  double s = 0.0, wsum = 0.0;
  const double log_scale = std::log(w.scale);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double m = std::abs(w.g(rule.nodes[k]));
    double lw = log_scale + w.exponent * std::log(m);
    if (!(lw >= kLogFloor)) {
      lw = kLogFloor;
      r.neg_infinity = true;
    }
    s += rule.weights[k] * lw;
    wsum += rule.weights[k];
  }
  // The truncated double-exponential rule loses a sliver of mass; renormalize.
  r.log_integral = s / wsum;
  r.method = Provenance::quadrature;
  r.nodes = rule.size();
  if (r.neg_infinity) r.log_integral = -std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace spherepoly
