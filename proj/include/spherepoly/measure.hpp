#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spherepoly/multiindex.hpp"
#include "spherepoly/sphere_integrals.hpp"

namespace spherepoly {

/// Polynomial in d complex variables stored as (exponent, coefficient) terms.
/// Terms are kept merged and sorted in shortlex order.
class SparsePolynomial {
 public:
  using Term = std::pair<MultiIndex, cplx>;

  SparsePolynomial() = default;
  explicit SparsePolynomial(std::size_t d) : d_(d) {
    if (d == 0) throw std::invalid_argument("SparsePolynomial: dimension must be >= 1");
  }
  SparsePolynomial(std::size_t d, std::vector<Term> terms) : SparsePolynomial(d) {
    for (auto& [a, c] : terms) add(a, c);
  }

  static SparsePolynomial constant(std::size_t d, cplx c) {
    SparsePolynomial p(d);
    p.add(MultiIndex(d), c);
    return p;
  }

  void add(const MultiIndex& a, cplx c) {
    if (a.dim() != d_) throw std::invalid_argument("SparsePolynomial: term dimension mismatch");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), a, [](const Term& t, const MultiIndex& k) { return t.first < k; });
    if (it != terms_.end() && it->first == a) {
      it->second += c;
    } else {
      terms_.insert(it, {a, c});
    }
  }

  std::size_t dim() const { return d_; }
  const std::vector<Term>& terms() const { return terms_; }

  cplx operator()(const Point& z) const {
    if (z.size() != d_) throw std::invalid_argument("SparsePolynomial: point dimension mismatch");
    cplx s = 0.0;
    for (const auto& [a, c] : terms_) s += c * monomial(a, z);
    return s;
  }

  cplx at_origin() const {
    for (const auto& [a, c] : terms_)
      if (a.is_zero()) return c;
    return 0.0;
  }

  bool is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second == cplx(0.0); });
  }

  /// Single-term check: returns true and the term when p = c z^a with c != 0.
  bool as_monomial(MultiIndex& a, cplx& c) const {
    const Term* only = nullptr;
    for (const Term& t : terms_) {
      if (t.second == cplx(0.0)) continue;
      if (only) return false;
      only = &t;
    }
    if (!only) return false;
    a = only->first;
    c = only->second;
    return true;
  }

  unsigned degree() const {
    unsigned deg = 0;
    for (const auto& [a, c] : terms_)
      if (c != cplx(0.0)) deg = std::max(deg, a.length());
    return deg;
  }

 private:
  std::size_t d_ = 0;
  std::vector<Term> terms_;
};

/// Inner product <z, w> = sum z_j conj(w_j).
inline cplx inner(const Point& z, const Point& w) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += z[j] * std::conj(w[j]);
  return s;
}

inline double norm(const Point& z) { return std::sqrt(std::real(inner(z, z))); }

/// Point mass on the unit sphere. The point is checked to lie on the sphere
/// within 1e-12 and then projected onto it exactly.
class Atom {
 public:
  Atom(Point point, double mass) : point_(std::move(point)), mass_(mass) {
    if (point_.empty()) throw std::invalid_argument("Atom: empty point");
    if (!(mass_ > 0.0)) throw std::invalid_argument("Atom: mass must be positive");
    const double r2 = std::real(inner(point_, point_));
    if (std::abs(r2 - 1.0) > 1e-12) throw std::invalid_argument("Atom: point is not on the unit sphere");
    const double r = std::sqrt(r2);
    for (cplx& c : point_) c /= r;
  }
  const Point& point() const { return point_; }
  double mass() const { return mass_; }
  std::size_t dim() const { return point_.size(); }

 private:
  Point point_;
  double mass_;
};

/// w(z) = scale * |g(z)|^exponent on the sphere.
struct WeightSpec {
  double scale = 1.0;
  SparsePolynomial g;
  double exponent = 2.0;

  double operator()(const Point& z) const {
    const double m = std::abs(g(z));
    return exponent == 2.0 ? scale * m * m : scale * std::pow(m, exponent);
  }
};

/// mu = w dsigma + sum_k mass_k delta_{point_k}.
struct MeasureSpec {
  std::size_t d = 0;
  WeightSpec weight;
  std::vector<Atom> atoms;

  bool exact_moments() const { return weight.exponent == 2.0; }

  void validate() const {
    if (d == 0) throw std::invalid_argument("MeasureSpec: dimension must be >= 1");
    if (weight.g.dim() != d) throw std::invalid_argument("MeasureSpec: weight polynomial dimension mismatch");
    if (!(weight.scale >= 0.0)) throw std::invalid_argument("MeasureSpec: scale must be nonnegative");
    if (!(weight.exponent >= 1.0)) throw std::invalid_argument("MeasureSpec: exponent must be >= 1");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (atoms[k].dim() != d) throw std::invalid_argument("MeasureSpec: atom dimension mismatch");
      for (std::size_t l = 0; l < k; ++l) {
        Point diff(d);
        for (std::size_t j = 0; j < d; ++j) diff[j] = atoms[k].point()[j] - atoms[l].point()[j];
        if (norm(diff) < 1e-12) throw std::invalid_argument("MeasureSpec: duplicate atom points");
      }
    }
  }

  bool has_weight() const { return weight.scale > 0.0 && !weight.g.is_zero(); }
};

/// Exact integral of z^a conj(z)^b * s |g|^2 over the sphere (p = 2 only).
/// The terms are collected as sum over pairs (gamma, delta) with
/// a + gamma = b + delta of g_gamma conj(g_delta) m_{a+gamma}.
inline cplx exact_weight_moment(const WeightSpec& w, const MultiIndex& a, const MultiIndex& b) {
  if (w.exponent != 2.0) throw std::invalid_argument("exact_weight_moment: exponent must be 2");
  cplx s = 0.0;
  for (const auto& [gam, cg] : w.g.terms()) {
    const MultiIndex left = a + gam;
    for (const auto& [del, cd] : w.g.terms()) {
      if (left != b + del) continue;
      s += cg * std::conj(cd) * sigma_monomial_moment(left);
    }
  }
  return w.scale * s;
}

/// Integral of w over the sphere by the product rule (any exponent).
inline double quadrature_weight_mass(const MeasureSpec& spec, QuadratureResolution res) {
  const SphereRule rule = sphere_rule(spec.d, res);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights[k] * spec.weight(rule.nodes[k]);
  return s;
}

inline double atom_mass(const MeasureSpec& spec) {
  double s = 0.0;
  for (const Atom& at : spec.atoms) s += at.mass();
  return s;
}

/// mu(sphere). Exact for exponent 2, product-rule quadrature otherwise.
inline double total_mass(const MeasureSpec& spec) {
  const MultiIndex zero(spec.d);
  const double wmass = spec.exact_moments() ? exact_weight_moment(spec.weight, zero, zero).real()
                                            : quadrature_weight_mass(spec, default_resolution(spec.d));
  return wmass + atom_mass(spec);
}

/// Rescales the weight and all masses so that the total mass is 1.
inline MeasureSpec normalize(const MeasureSpec& spec) {
  const double m = total_mass(spec);
  if (!(m > 0.0)) throw std::domain_error("normalize: zero measure");
  MeasureSpec out = spec;
  out.weight.scale = spec.weight.scale / m;
  out.atoms.clear();
  for (const Atom& at : spec.atoms) out.atoms.emplace_back(at.point(), at.mass() / m);
  return out;
}

namespace detail {

inline void check_herglotz_args(const std::vector<Atom>& atoms, const Point& z) {
  if (atoms.empty()) throw std::invalid_argument("herglotz: no atoms");
  double m = 0.0;
  for (const Atom& at : atoms) {
    if (at.dim() != z.size()) throw std::invalid_argument("herglotz: dimension mismatch");
    m += at.mass();
  }
  if (std::abs(m - 1.0) > 1e-12) throw std::invalid_argument("herglotz: atom masses must sum to 1");
  if (!(norm(z) < 1.0)) throw std::domain_error("herglotz: point must lie in the open ball");
}

}  // namespace detail

/// F(z) = sum_k rho_k (1 + <z, zeta_k>) / (1 - <z, zeta_k>) for z in the open ball.
inline cplx herglotz_F(const std::vector<Atom>& atoms, const Point& z) {
  detail::check_herglotz_args(atoms, z);
  cplx s = 0.0;
  for (const Atom& at : atoms) {
    const cplx t = inner(z, at.point());
    s += at.mass() * (1.0 + t) / (1.0 - t);
  }
  return s;
}

/// Cayley transform G = (F - 1) / (F + 1), so that F = (1 + G) / (1 - G).
inline cplx schur_G(const std::vector<Atom>& atoms, const Point& z) {
  const cplx F = herglotz_F(atoms, z);
  return (F - 1.0) / (F + 1.0);
}

/// Built-in measures.
///   lebesgue            sigma itself
///   counterexample      2 |z1|^2 dsigma on the sphere in C^2
///   stable-demo         |1 + 0.3 z1 - 0.2 z2|^2 dsigma, normalized
///   stable-mean         |(2 + z1)/3|^2 dsigma, normalized
///   circle-calibration  (4/5) |1 - z/2|^2 on the unit circle
///   half-atom           sigma/2 + delta_{(1,0)}/2
inline MeasureSpec preset(const std::string& name, std::size_t d = 2) {
  MeasureSpec spec;
  auto term = [](std::initializer_list<unsigned> a, cplx c) { return SparsePolynomial::Term{MultiIndex(a), c}; };
  if (name == "lebesgue") {
    spec.d = d;
    spec.weight.g = SparsePolynomial::constant(d, 1.0);
  } else if (name == "counterexample") {
    spec.d = 2;
    spec.weight.scale = 2.0;
    spec.weight.g = SparsePolynomial(2, {term({1, 0}, 1.0)});
  } else if (name == "stable-demo") {
    spec.d = 2;
    spec.weight.g = SparsePolynomial(2, {term({0, 0}, 1.0), term({1, 0}, 0.3), term({0, 1}, -0.2)});
    spec = normalize(spec);
  } else if (name == "stable-mean") {
    spec.d = 2;
    spec.weight.g = SparsePolynomial(2, {term({0, 0}, 2.0 / 3.0), term({1, 0}, 1.0 / 3.0)});
    spec = normalize(spec);
  } else if (name == "circle-calibration") {
    spec.d = 1;
    spec.weight.scale = 0.8;
    spec.weight.g = SparsePolynomial(1, {term({0}, 1.0), term({1}, -0.5)});
  } else if (name == "half-atom") {
    spec.d = 2;
    spec.weight.scale = 0.5;
    spec.weight.g = SparsePolynomial::constant(2, 1.0);
    spec.atoms.emplace_back(Point{1.0, 0.0}, 0.5);
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  spec.validate();
  return spec;
}

inline std::vector<std::string> preset_names() {
  return {"lebesgue", "counterexample", "stable-demo", "stable-mean", "circle-calibration", "half-atom"};
}

}  // namespace spherepoly
