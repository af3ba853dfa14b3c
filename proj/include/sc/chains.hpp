#pragma once
// Oriented simplices, chains with scalar or matrix coefficients, the boundary
// operator, cone and prism constructions, and exact integration of polynomial forms.

#include "sc/common.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace sc {

struct Simplex {
  std::vector<Vec> v;  // k+1 vertices in R^n

  Simplex() = default;
  explicit Simplex(std::vector<Vec> verts) : v(std::move(verts)) {}
  int k() const { return static_cast<int>(v.size()) - 1; }
  int dim() const { return v.empty() ? 0 : static_cast<int>(v[0].size()); }
};

std::vector<Vec> edge_vectors(const Simplex& s);          // a_i - a_0, i = 1..k
Mat tangent_basis(const Simplex& s, double tol = 1e-12);  // orthonormal columns
Mat tangent_projector(const Simplex& s);
double volume(const Simplex& s);  // k-dimensional volume
Vec barycenter(const Simplex& s);
Simplex face(const Simplex& s, int i);  // drop vertex i
bool is_degenerate(const Simplex& s, double tol = 1e-12);
/// Distance from p to the affine hull of s.
double affine_distance(const Simplex& s, const Vec& p);

/// Tolerant lexicographic comparison used for canonical vertex ordering.
int lex_compare(const Vec& a, const Vec& b, double eps = 1e-12);
bool same_point(const Vec& a, const Vec& b, double eps = 1e-12);

/// Sorts vertices lexicographically; returns the permutation parity (+1/-1), or 0 if two
/// vertices coincide.
int canonical_order(Simplex& s);

template <class C>
struct Chain {
  int dim = 0;
  int grade = 0;
  std::vector<std::pair<C, Simplex>> terms;

  Chain() = default;
  Chain(int n, int k) : dim(n), grade(k) {}
  void add(const C& c, const Simplex& s) { terms.emplace_back(c, s); }
  bool empty() const { return terms.empty(); }
};

using PolyChain = Chain<double>;
using MatChain = Chain<Mat>;

inline bool coeff_negligible(double c, double tol) { return std::abs(c) < tol; }
inline bool coeff_negligible(const Mat& c, double tol) {
  return c.size() == 0 || c.cwiseAbs().maxCoeff() < tol;
}

/// Canonical form: sorted vertices with parity sign, merged duplicates, small
/// coefficients (< drop_tol after merging) and degenerate simplices removed.
template <class C>
Chain<C> canonicalize(const Chain<C>& c, double drop_tol = 1e-12) {
  Chain<C> out(c.dim, c.grade);
  for (const auto& [coef, s0] : c.terms) {
    Simplex s = s0;
    const int par = canonical_order(s);
    if (par == 0 || is_degenerate(s)) continue;
    bool merged = false;
    for (auto& [oc, os] : out.terms) {
      bool eq = true;
      for (size_t i = 0; i < s.v.size() && eq; ++i) eq = same_point(s.v[i], os.v[i]);
      if (eq) {
        oc = oc + coef * static_cast<double>(par);
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.emplace_back(coef * static_cast<double>(par), s);
  }
  Chain<C> kept(c.dim, c.grade);
  for (auto& t : out.terms)
    if (!coeff_negligible(t.first, drop_tol)) kept.terms.push_back(std::move(t));
  std::sort(kept.terms.begin(), kept.terms.end(), [](const auto& a, const auto& b) {
    for (size_t i = 0; i < a.second.v.size(); ++i) {
      const int r = lex_compare(a.second.v[i], b.second.v[i]);
      if (r != 0) return r < 0;
    }
    return false;
  });
  return kept;
}

template <class C>
Chain<C> operator+(const Chain<C>& a, const Chain<C>& b) {
  Chain<C> r = a;
  if (r.terms.empty()) {
    r.dim = b.dim;
    r.grade = b.grade;
  }
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  return r;
}

template <class C>
Chain<C> scaled(const Chain<C>& a, double s) {
  Chain<C> r = a;
  for (auto& t : r.terms) t.first = t.first * s;
  return r;
}

template <class C>
Chain<C> boundary(const Chain<C>& c) {
  if (c.grade < 1) throw PreconditionError("boundary: grade must be >= 1");
  Chain<C> out(c.dim, c.grade - 1);
  for (const auto& [coef, s] : c.terms)
    for (int i = 0; i <= s.k(); ++i) out.add(coef * ((i % 2) ? -1.0 : 1.0), face(s, i));
  return canonicalize(out);
}

/// Cone [w, sigma] over every term. Throws PreconditionError on a degenerate cone.
template <class C>
Chain<C> cone(const Vec& w, const Chain<C>& c, double tol = 1e-10) {
  Chain<C> out(c.dim, c.grade + 1);
  for (const auto& [coef, s] : c.terms) {
    if (affine_distance(s, w) <= tol)
      throw PreconditionError("cone: apex lies in the affine hull of a simplex");
    std::vector<Vec> v{w};
    v.insert(v.end(), s.v.begin(), s.v.end());
    out.add(coef, Simplex(v));
  }
  return out;
}

/// Staircase triangulation of the region swept from base (b_0..b_m) to top (b'_0..b'_m),
/// sum_j (-1)^j [b_0..b_j, b'_j..b'_m]; boundary = top - base - sweep(boundary of base).
/// Degenerate pieces (b_j == b'_j) are omitted.
PolyChain sweep(const Simplex& base, const Simplex& top);

/// Triangulated prism base x [0, offset].
PolyChain prism(const Simplex& base, const Vec& offset);

// ---------------------------------------------------------------------------
// Polynomials and polynomial differential forms.

struct Poly {
  int nvars = 0;
  std::map<std::vector<int>, double> terms;  // exponent vector -> coefficient

  Poly() = default;
  explicit Poly(int n) : nvars(n) {}
  static Poly constant(int n, double c);
  static Poly variable(int n, int i);
  Poly operator+(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;
  Poly derivative(int i) const;
  double eval(const Vec& x) const;
  int degree() const;
  bool is_zero(double tol = 0.0) const;
};

struct PolyForm {
  int dim = 0;
  int grade = 0;
  std::vector<Poly> coef;  // one per k-subset, colex order

  PolyForm() = default;
  PolyForm(int n, int k);
  /// Constant covector field.
  static PolyForm constant(int n, int k, const std::vector<double>& c);
  PolyForm operator+(const PolyForm& o) const;
  PolyForm operator*(double s) const;
  /// Value of the form at x as a list of covector components.
  std::vector<double> at(const Vec& x) const;
};

PolyForm random_form(int n, int k, int degree, Rng& rng);
PolyForm exterior_derivative(const PolyForm& w);

double integrate(const Simplex& s, const PolyForm& w);
double integrate(const PolyChain& c, const PolyForm& w);
/// Integral over the simplex with respect to k-dimensional Hausdorff measure.
double integrate_measure(const Simplex& s, const Poly& p);

/// Matrix-valued current evaluation sum_i C_i * int_{sigma_i} w.
Mat integrate(const MatChain& c, const PolyForm& w);

bool chains_equivalent(const PolyChain& a, const PolyChain& b, int trials, std::uint64_t seed,
                       double tol = 1e-9);
bool chains_equivalent(const MatChain& a, const MatChain& b, int trials, std::uint64_t seed,
                       double tol = 1e-9);

}  // namespace sc
