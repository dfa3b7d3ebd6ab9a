#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "spherepoly/multiindex.hpp"

namespace spherepoly {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

/// Integral of |z^a|^2 against the normalized surface measure of the unit
/// sphere in C^d:  (d-1)! a! / (d-1+|a|)!.
/// Computed as 1 / (C(d-1+|a|, d-1) * multinomial(|a|; a)) in exact integers.
inline double sigma_monomial_moment(const MultiIndex& a) {
  using boost::multiprecision::cpp_int;
  const std::size_t d = a.dim();
  const unsigned n = a.length();
  cpp_int denom = 1;
  // C(d-1+n, d-1)
  for (unsigned i = 1; i + 1 <= d; ++i) {
    denom *= (n + i);
    denom /= i;
  }
  // multinomial(n; a_1..a_d) built as a product of binomials
  unsigned partial = 0;
  for (std::size_t j = 0; j < d; ++j) {
    for (unsigned i = 1; i <= a[j]; ++i) {
      denom *= (partial + i);
      denom /= i;
    }
    partial += a[j];
  }
  return 1.0 / denom.convert_to<double>();
}

/// One-dimensional rule on [0, 1]. `complement[k]` is 1 - nodes[k] computed
/// without cancellation (matters near the right endpoint).
struct UnitIntervalRule {
  std::vector<double> nodes;
  std::vector<double> complement;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre on [0, 1]; exact for polynomials of degree 2n-1.
inline UnitIntervalRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  const double pi = boost::math::constants::pi<double>();
  UnitIntervalRule rule;
  rule.nodes.resize(n);
  rule.complement.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p1 = x, p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x > 0 here: map +x and -x onto [0, 1]
    const std::size_t lo = i, hi = n - 1 - i;
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.complement[lo] = 0.5 * (1.0 + x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.complement[hi] = 0.5 * (1.0 - x);
    rule.weights[lo] = rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

/// Double-exponential (tanh-sinh) rule on [0, 1] with about n nodes. Handles
/// integrable endpoint singularities such as log(1 - x).
inline UnitIntervalRule tanh_sinh(std::size_t n) {
  if (n < 3) throw std::invalid_argument("tanh_sinh: need at least three nodes");
  const double half_pi = boost::math::constants::half_pi<double>();
  const double t_max = 3.2;  // beyond this the weights underflow relative to the sum
  const std::size_t m = (n - 1) / 2;
  const double h = t_max / static_cast<double>(m);
  UnitIntervalRule rule;
  for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(m); k <= static_cast<std::ptrdiff_t>(m); ++k) {
    const double t = h * static_cast<double>(k);
    const double s = half_pi * std::sinh(t);
    const double x = 1.0 / (1.0 + std::exp(-2.0 * s));
    const double xc = 1.0 / (1.0 + std::exp(2.0 * s));
    const double ch = std::cosh(s);
    const double w = h * half_pi * std::cosh(t) / (2.0 * ch * ch);
    if (x <= 0.0 || xc <= 0.0) continue;
    rule.nodes.push_back(x);
    rule.complement.push_back(xc);
    rule.weights.push_back(w);
  }
  return rule;
}

/// Node counts for the product rule on the sphere: `angular` equispaced
/// phases per coordinate, `radial` nodes per simplex coordinate.
struct QuadratureResolution {
  std::size_t angular = 64;
  std::size_t radial = 64;
};

/// Desk-scale defaults: the node count grows like radial^(d-1) * angular^d.
inline QuadratureResolution default_resolution(std::size_t d) {
  switch (d) {
    case 1: return {256, 1};
    case 2: return {64, 64};
    case 3: return {16, 16};
    default: return {10, 10};
  }
}

enum class RadialRule { gauss_legendre, tanh_sinh };

/// Product rule for the normalized surface measure on the unit sphere of C^d.
///
/// Uses that (|z_1|^2, ..., |z_d|^2) is uniform on the probability simplex with
/// independent uniform phases. The simplex is parametrized by stick breaking,
/// x_k = (1 - x_1 - ... - x_{k-1}) b_k with b_k ~ Beta(1, d-k), and the phases
/// use a half-offset trapezoid rule, which is exact for trigonometric
/// polynomials of degree below `angular` and never lands on theta = 0.
struct SphereRule {
  std::size_t d = 0;
  std::vector<Point> nodes;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

inline SphereRule sphere_rule(std::size_t d, QuadratureResolution res, RadialRule radial = RadialRule::gauss_legendre) {
  if (d == 0) throw std::invalid_argument("sphere_rule: dimension must be >= 1");
  if (res.angular == 0) throw std::invalid_argument("sphere_rule: angular node count must be positive");
  const double two_pi = boost::math::constants::two_pi<double>();

  std::vector<cplx> phases(res.angular);
  for (std::size_t k = 0; k < res.angular; ++k) {
    const double theta = two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(res.angular);
    phases[k] = std::polar(1.0, theta);
  }
  const double phase_weight = 1.0 / static_cast<double>(res.angular);

  // Simplex nodes: moduli squared (with accurate remaining mass) and weights.
  struct SimplexNode {
    std::vector<double> x;
    double weight;
  };
  std::vector<SimplexNode> simplex;
  if (d == 1) {
    simplex.push_back({{1.0}, 1.0});
  } else {
    const UnitIntervalRule line = radial == RadialRule::gauss_legendre ? gauss_legendre(res.radial) : tanh_sinh(res.radial);
    std::vector<std::size_t> idx(d - 1, 0);
    for (;;) {
      SimplexNode node{std::vector<double>(d), 1.0};
      double rest = 1.0;
      for (std::size_t k = 0; k + 1 < d; ++k) {
        const std::size_t shape = d - 1 - k;  // Beta(1, shape)
        const double b = line.nodes[idx[k]], bc = line.complement[idx[k]];
        node.weight *= line.weights[idx[k]] * static_cast<double>(shape) * std::pow(bc, static_cast<double>(shape - 1));
        node.x[k] = rest * b;
        rest *= bc;
      }
      node.x[d - 1] = rest;
      simplex.push_back(std::move(node));
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == line.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }

  SphereRule rule;
  rule.d = d;
  std::size_t total_phases = 1;
  for (std::size_t j = 0; j < d; ++j) total_phases *= res.angular;
  rule.nodes.reserve(simplex.size() * total_phases);
  rule.weights.reserve(simplex.size() * total_phases);
  std::vector<std::size_t> pidx(d, 0);
  for (const SimplexNode& s : simplex) {
    std::vector<double> radii(d);
    for (std::size_t j = 0; j < d; ++j) radii[j] = std::sqrt(s.x[j]);
    const double w = s.weight * std::pow(phase_weight, static_cast<double>(d));
    std::fill(pidx.begin(), pidx.end(), 0);
    for (;;) {
      Point z(d);
      for (std::size_t j = 0; j < d; ++j) z[j] = radii[j] * phases[pidx[j]];
      rule.nodes.push_back(std::move(z));
      rule.weights.push_back(w);
      std::size_t j = 0;
      while (j < d && ++pidx[j] == res.angular) pidx[j++] = 0;
      if (j == d) break;
    }
  }
  return rule;
}

/// z^a computed by repeated multiplication.
inline cplx monomial(const MultiIndex& a, const Point& z) {
  cplx v = 1.0;
  for (std::size_t j = 0; j < a.dim(); ++j)
    for (unsigned k = 0; k < a[j]; ++k) v *= z[j];
  return v;
}

/// Vector of z^beta for shortlex ranks 0..N. Each monomial is one
/// multiplication away from a lower-ranked one.
inline std::vector<cplx> monomial_vector(const Point& z, std::size_t N) {
  const std::size_t d = z.size();
  std::vector<cplx> v(N + 1);
  v[0] = 1.0;
  MultiIndex a(d);
  for (std::size_t r = 1; r <= N; ++r) {
    a = succ(a);
    std::size_t j = 0;
    while (a[j] == 0) ++j;
    MultiIndex lower = a;
    lower[j] -= 1;
    v[r] = v[shortlex_rank(lower)] * z[j];
  }
  return v;
}

}  // namespace spherepoly
