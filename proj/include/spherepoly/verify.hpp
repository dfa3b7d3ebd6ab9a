#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "spherepoly/christoffel.hpp"
#include "spherepoly/kernelfact.hpp"
#include "spherepoly/measure.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/orthopoly.hpp"
#include "spherepoly/szego.hpp"

namespace spherepoly {

/// One invariant: `value` must not exceed `tolerance`.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

struct VerifyResult {
  std::vector<Check> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
  }
};

/// Interior test point (0.3, 0.1i, 0, ...) truncated to dimension d.
inline Point interior_test_point(std::size_t d) {
  Point z(d, 0.0);
  z[0] = 0.3;
  if (d > 1) z[1] = cplx(0.0, 0.1);
  return z;
}

/// Runs every identity and invariant on the probability-normalized spec up to
/// rank N. A positive `tol` replaces every tolerance.
inline VerifyResult verify_spec(const MeasureSpec& input, std::size_t N, std::optional<double> tol = std::nullopt,
                                const EntropyOptions& eopt = {}) {
  const MeasureSpec spec = normalize(input);
  const MomentKernel K = kernel_window(spec, N);
  const OrthonormalSystem sys = gram_schmidt(K, N);
  const VerblunskyTable table = verblunsky_table(K, N);
  const EntropyResult ent = entropy(spec, eopt);
  VerifyResult out;
  auto add = [&](std::string name, double value, double t) { out.checks.push_back({std::move(name), value, tol.value_or(t)}); };

  add("kernel_hermitian", (K.entries - K.entries.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
  if (K.provenance == Provenance::exact) add("measure_condition", check_measure_condition(K, spec, N), 1e-11);

  double gram = (gram_matrix(sys) - CMatrix::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff();
  add("gram_identity", gram, 1e-10);

  const SzegoReport rep = summary_report(spec, N, {eopt, {}});
  add("first_list_residual", rep.first_residual, 1e-8);
  add("second_list_residual", rep.second_residual, 1e-9);

  double rec = 0.0, det = 0.0, sharp0 = 0.0, row0 = 0.0;
  double sharp_prod = 1.0;
  for (std::size_t r = 1; r <= N; ++r) {
    const MultiIndex a = shortlex_unrank(r, spec.d);
    const auto [r1, r2] = recurrence_residual(sys, table, a);
    rec = std::max({rec, r1, r2});
    det = std::max(det, determinant_identity_residual(K, table, a));
    sharp_prod /= table.d(0, r);
    const cplx s0 = sys.phiSharp[r].coeffs[0];
    sharp0 = std::max(sharp0, std::abs(s0 - sharp_prod) / sharp_prod);
    row0 = std::max(row0, std::abs(table(0, r) + std::conj(sys.phi[r].coeffs[0]) / s0));
  }
  add("recurrence_residual", rec, 1e-9);
  add("determinant_identity", det, 1e-8);
  add("sharp_at_origin_product", sharp0, 1e-9);
  add("gamma_row_from_polynomials", row0, 1e-9);

  const Eigen::MatrixXd mod = verblunsky_modulus_table(K);
  double mod_dev = 0.0;
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = i + 1; j <= N; ++j) mod_dev = std::max(mod_dev, std::abs(std::abs(table(i, j)) - mod(i, j)));
  add("modulus_two_routes", mod_dev, 1e-10);
  add("gamma_inside_disc", table.max_abs() - (1.0 - 1e-12), 0.0);

  std::vector<double> diag(N + 1);
  for (std::size_t k = 0; k <= N; ++k) diag[k] = K(k, k).real();
  const MomentKernel R = reconstruct_kernel(diag, table, N, spec.d);
  add("reconstruct_kernel", (R.entries - K.entries).cwiseAbs().maxCoeff(), 1e-9);
  add("reconstruct_table", (verblunsky_table(R, N).gamma - table.gamma).cwiseAbs().maxCoeff(), 1e-9);

  double mono = 0.0, two_path = 0.0, below = 0.0;
  for (const Point& z : {Point(spec.d, 0.0), interior_test_point(spec.d)}) {
    double prev = lambda_at_rank(sys, 0, z);
    for (std::size_t r = 0; r <= N; ++r) {
      const double a = lambda_at_rank(sys, r, z), b = lambda_via_inverse_at_rank(K, r, z);
      two_path = std::max(two_path, std::abs(a - b) / a);
      mono = std::max(mono, a - prev);
      prev = a;
      if (is_origin(z) && !ent.neg_infinity) below = std::max(below, ent.exp_value() - a);
    }
  }
  add("lambda_non_increasing", mono, 1e-12);
  add("lambda_two_paths", two_path, 1e-10);
  add("lambda_above_entropy", below, 1e-9);
  return out;
}

}  // namespace spherepoly
