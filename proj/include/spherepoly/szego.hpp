#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spherepoly/christoffel.hpp"
#include "spherepoly/kernelfact.hpp"
#include "spherepoly/measure.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/multiindex.hpp"
#include "spherepoly/orthopoly.hpp"

namespace spherepoly {

/// Raised when an identity that must hold exactly is violated beyond tolerance.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f(z) = (c / q(z))^e. Built from a weight polynomial g as c = g(0),
/// q = g, e = p/2, so that f(0) = 1.
struct RationalCandidate {
  cplx numerator = 1.0;
  SparsePolynomial denominator;
  double exponent = 1.0;

  cplx operator()(const Point& z) const {
    const cplx q = denominator(z);
    if (q == cplx(0.0)) throw std::domain_error("candidate: denominator vanishes");
    const cplx ratio = numerator / q;
    return exponent == 1.0 ? ratio : std::pow(ratio, exponent);
  }

  /// |f(z)|^2
  double modulus_squared(const Point& z) const {
    const double q = std::abs(denominator(z));
    if (!(q > 0.0)) throw std::domain_error("candidate: denominator vanishes");
    return std::pow(std::abs(numerator) / q, 2.0 * exponent);
  }

  static RationalCandidate one(std::size_t d) { return {1.0, SparsePolynomial::constant(d, 1.0), 1.0}; }
};

inline RationalCandidate candidate_f_from_g(const SparsePolynomial& g, double p = 2.0) {
  const cplx g0 = g.at_origin();
  if (std::abs(g0) == 0.0) throw std::domain_error("candidate_f_from_g: g(0) = 0");
  return {g0, g, 0.5 * p};
}

/// exp(integral of log w) - integral of |f|^2 w, both over the sphere.
/// Nonnegative slack certifies the hypothesis for f.
inline double check_sv_hypothesis(const MeasureSpec& spec, const RationalCandidate& f, const EntropyOptions& opt = {}) {
  const Point origin(spec.d, 0.0);
  if (std::abs(f(origin) - 1.0) > 1e-12) throw std::invalid_argument("check_sv_hypothesis: f(0) must be 1");
  const SphereRule rule = sphere_rule(spec.d, opt.resolution.value_or(default_resolution(spec.d)));
  double integral = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double q = std::abs(f.denominator(rule.nodes[k]));
    if (!(q > 1e-300)) throw std::domain_error("check_sv_hypothesis: candidate denominator vanishes at a node (not stable)");
    integral += rule.weights[k] * f.modulus_squared(rule.nodes[k]) * spec.weight(rule.nodes[k]);
  }
  return entropy(spec, opt).exp_value() - integral;
}

/// Node counts of the closed-ball grid used by stable_check.
struct StableGrid {
  QuadratureResolution sphere{32, 16};
  std::size_t shells = 16;
};

/// Minimum of |g| over sphere-rule nodes scaled onto radial shells
/// 0, 1/shells, ..., 1 (the origin included). A sampled certificate only.
inline double stable_check(const SparsePolynomial& g, const StableGrid& grid = {}) {
  const std::size_t d = g.dim();
  const SphereRule rule = sphere_rule(d, grid.sphere);
  double m = std::abs(g(Point(d, 0.0)));
  for (std::size_t s = 1; s <= grid.shells; ++s) {
    const double r = static_cast<double>(s) / static_cast<double>(grid.shells);
    Point z(d);
    for (const Point& node : rule.nodes) {
      for (std::size_t j = 0; j < d; ++j) z[j] = r * node[j];
      m = std::min(m, std::abs(g(z)));
    }
  }
  return m;
}

/// Per-rank values that coincide: (i) the monic norm, (ii) the inverse
/// squared leading coefficient, (iii) the determinant ratio, (iv) the
/// diagonal times the product of defects of column r.
struct FirstListRow {
  std::size_t rank = 0;
  MultiIndex index;
  double monic_norm = 0.0;
  double inv_leading_sq = 0.0;
  double det_ratio = 0.0;
  double defect_product = 0.0;
  double residual = 0.0;
};

/// Per-rank values at the origin that coincide: (v) product of
/// 1 - |gamma_{0,k}|^2, (vi) |phiSharp_r(0)|^{-2}, (vii) the reciprocal
/// Christoffel-Darboux sum, (viii) lambda through the inverse kernel.
struct SecondListRow {
  std::size_t rank = 0;
  MultiIndex index;
  double product = 0.0;
  double sharp = 0.0;
  double cd_sum = 0.0;
  double lambda_inverse = 0.0;
  double residual = 0.0;
};

enum class Verdict { equality_certified, inequality_only, strict_gap };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::equality_certified: return "equality-certified";
    case Verdict::strict_gap: return "strict-gap";
    default: return "inequality-only";
  }
}

struct SzegoReport {
  std::size_t d = 0;
  std::size_t N = 0;
  Provenance kernel_provenance = Provenance::exact;
  std::vector<FirstListRow> first_list;
  std::vector<SecondListRow> second_list;
  double first_residual = 0.0;   ///< max relative deviation within (i)-(iv)
  double second_residual = 0.0;  ///< max relative deviation within (v)-(viii)
  double max_gamma = 0.0;        ///< max |gamma_{i,j}| over the table
  double tail_gamma = 0.0;       ///< max |gamma_{0,r}| over the last level
  std::optional<double> ac_minimizer_norm;  ///< (ix): integral of |P_N|^2 dmu_ac, with atoms only
  EntropyResult entropy;
  double entropy_rhs = 0.0;  ///< (x): exp(entropy)
  double entropy_tolerance = 0.0;
  std::optional<double> sv_slack;
  std::optional<double> hinf_upper;
  std::string candidate_note;
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  double gap = 0.0;
  double error_budget = 0.0;
  Verdict verdict = Verdict::inequality_only;

  const SecondListRow& final_second() const { return second_list.back(); }
  /// The truncated Szego quantity, item (v) at rank N.
  double szego_quantity() const { return final_second().product; }
};

namespace detail {

inline double max_rel_spread(std::initializer_list<double> values) {
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const double scale = std::max(std::abs(lo), std::abs(hi));
  return scale == 0.0 ? 0.0 : (hi - lo) / scale;
}

inline FirstListRow first_list_row(const OrthonormalSystem& sys, const VerblunskyTable& table, const std::vector<double>& logdet,
                                   std::size_t r) {
  FirstListRow row;
  row.rank = r;
  row.index = shortlex_unrank(r, sys.d());
  row.monic_norm = norm_squared(sys.K, sys.Phi[r]);
  const double a = sys.leading_coefficient(r);
  row.inv_leading_sq = 1.0 / (a * a);
  row.det_ratio = r == 0 ? std::exp(logdet[0]) : std::exp(logdet[r] - logdet[r - 1]);
  double prod = sys.K(r, r).real();
  for (std::size_t i = 0; i < r; ++i) prod *= table.d(i, r) * table.d(i, r);
  row.defect_product = prod;
  row.residual = max_rel_spread({row.monic_norm, row.inv_leading_sq, row.det_ratio, row.defect_product});
  return row;
}

/// log det K[0..r] for every r, each from its own window factorization.
inline std::vector<double> window_log_dets(const MomentKernel& K, std::size_t N) {
  std::vector<double> out(N + 1);
  for (std::size_t r = 0; r <= N; ++r) out[r] = log_det_from_factor(upper_cholesky(K.window(0, r)));
  return out;
}

}  // namespace detail

inline double first_list_residual(const MeasureSpec& spec, const MultiIndex& a) {
  const std::size_t r = static_cast<std::size_t>(shortlex_rank(a));
  if (r == 0) throw std::invalid_argument("first_list_residual: rank must be >= 1");
  const MeasureSpec s = normalize(spec);
  const MomentKernel K = kernel_window(s, r);
  const OrthonormalSystem sys = gram_schmidt(K, r);
  const VerblunskyTable table = verblunsky_table(K, r);
  return detail::first_list_row(sys, table, detail::window_log_dets(K, r), r).residual;
}

struct SzegoOptions {
  EntropyOptions entropy;
  StableGrid grid;
};

/// Builds both lists up to rank N on the probability-normalized spec, the
/// entropy side, the hypothesis slack for the candidate (g(0)/g)^{p/2} when
/// one exists, and the verdict.
inline SzegoReport summary_report(const MeasureSpec& input, std::size_t N, const SzegoOptions& opt = {}) {
  const MeasureSpec spec = normalize(input);
  SzegoReport rep;
  rep.d = spec.d;
  rep.N = N;
  const MomentKernel K = kernel_window(spec, N);
  rep.kernel_provenance = K.provenance;
  const OrthonormalSystem sys = gram_schmidt(K, N);
  const VerblunskyTable table = verblunsky_table(K, N);
  const std::vector<double> logdet = detail::window_log_dets(K, N);
  rep.max_gamma = table.max_abs();

  const Point origin(spec.d, 0.0);
  double product = 1.0, cd = 0.0;
  for (std::size_t r = 0; r <= N; ++r) {
    rep.first_list.push_back(detail::first_list_row(sys, table, logdet, r));
    rep.first_residual = std::max(rep.first_residual, rep.first_list.back().residual);

    SecondListRow row;
    row.rank = r;
    row.index = shortlex_unrank(r, spec.d);
    if (r > 0) product *= table.d(0, r) * table.d(0, r);
    row.product = product;
    row.sharp = 1.0 / std::norm(sys.phiSharp[r].coeffs[0]);
    cd += std::norm(sys.phi[r].coeffs[0]);
    row.cd_sum = 1.0 / cd;
    row.lambda_inverse = lambda_via_inverse_at_rank(K, r, origin);
    row.residual = detail::max_rel_spread({row.product, row.sharp, row.cd_sum, row.lambda_inverse});
    rep.second_residual = std::max(rep.second_residual, row.residual);
    rep.second_list.push_back(row);
  }

  const unsigned last_level = level_of_rank(N, spec.d);
  const std::size_t level_start = static_cast<std::size_t>(level_offset(spec.d, last_level));
  for (std::size_t r = std::max<std::size_t>(level_start, 1); r <= N; ++r) rep.tail_gamma = std::max(rep.tail_gamma, std::abs(table(0, r)));

  if (!spec.atoms.empty()) {
    MeasureSpec ac = spec;
    ac.atoms.clear();
    const MomentKernel Kac = kernel_window(ac, N);
    rep.ac_minimizer_norm = norm_squared(Kac, minimizer_at_rank(sys, N, origin));
  }

  rep.entropy = entropy(spec, opt.entropy);
  rep.entropy_rhs = rep.entropy.exp_value();
  rep.entropy_tolerance = rep.entropy.method == Provenance::exact ? 1e-8 : 1e-6;

  const double lambda_N = rep.final_second().cd_sum;
  rep.bracket_lower = rep.entropy_rhs;
  rep.bracket_upper = lambda_N;

  const cplx g0 = spec.weight.g.at_origin();
  if (!spec.has_weight()) {
    rep.candidate_note = "no absolutely continuous part";
  } else if (std::abs(g0) == 0.0) {
    rep.candidate_note = "g(0) = 0: no candidate (g(0)/g)^(p/2)";
  } else if (!(stable_check(spec.weight.g, opt.grid) > 0.0)) {
    rep.candidate_note = "g vanishes on the sampled closed ball: candidate rejected";
  } else {
    const RationalCandidate f = candidate_f_from_g(spec.weight.g, spec.weight.exponent);
    rep.sv_slack = check_sv_hypothesis(spec, f, opt.entropy);
    rep.hinf_upper = rep.entropy_rhs - *rep.sv_slack;
    rep.bracket_upper = std::min(rep.bracket_upper, *rep.hinf_upper);
    rep.candidate_note = "candidate (g(0)/g)^(p/2)";
  }

  rep.error_budget = std::max(rep.second_residual, 1e-9) + rep.entropy_tolerance;
  rep.gap = rep.entropy.neg_infinity ? lambda_N : lambda_N - rep.entropy_rhs;
  const double width = rep.bracket_upper - rep.bracket_lower;
  if (rep.sv_slack && *rep.sv_slack >= -1e-8 && width <= rep.error_budget + 1e-8) {
    rep.verdict = Verdict::equality_certified;
  } else if (!rep.entropy.neg_infinity && rep.gap > 10.0 * rep.error_budget && rep.tail_gamma <= 1e-9) {
    rep.verdict = Verdict::strict_gap;
  } else {
    rep.verdict = Verdict::inequality_only;
  }
  return rep;
}

/// Report for 2 |z1|^2 dsigma on the sphere in C^2, checked against its
/// closed-form values. Throws IdentityViolation listing every failed check.
inline SzegoReport counterexample_report(std::size_t N = 27) {
  const MeasureSpec spec = preset("counterexample");
  SzegoReport rep = summary_report(spec, N);
  const double target = 2.0 / std::exp(1.0);
  EntropyOptions quad_opt;
  quad_opt.force_quadrature = true;
  const double quad_rhs = entropy(spec, quad_opt).exp_value();

  std::ostringstream failures;
  auto check = [&](bool ok, const std::string& what, double value) {
    if (!ok) failures << what << " (value " << value << ")\n";
  };
  check(rep.max_gamma <= 1e-9, "max |gamma| > 1e-9", rep.max_gamma);
  check(std::abs(rep.szego_quantity() - 1.0) <= 1e-9, "Szego product differs from 1", rep.szego_quantity());
  check(std::abs(rep.entropy_rhs - target) <= 1e-8, "entropy side differs from 2/e", rep.entropy_rhs);
  check(std::abs(quad_rhs - target) <= 1e-6, "quadrature entropy side differs from 2/e", quad_rhs);
  check(rep.verdict == Verdict::strict_gap, "verdict is not strict-gap", static_cast<double>(rep.verdict));
  check(std::abs(rep.gap - (1.0 - target)) <= 1e-6, "gap differs from 1 - 2/e", rep.gap);
  const std::string msg = failures.str();
  if (!msg.empty()) throw IdentityViolation("counterexample checks failed:\n" + msg);
  return rep;
}

}  // namespace spherepoly
