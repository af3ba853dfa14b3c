#include "sc/chains.hpp"

#include "sc/exterior.hpp"

#include <cmath>
#include <numeric>

namespace sc {

std::vector<Vec> edge_vectors(const Simplex& s) {
  std::vector<Vec> e;
  for (int i = 1; i <= s.k(); ++i) e.push_back(s.v[i] - s.v[0]);
  return e;
}

Mat tangent_basis(const Simplex& s, double tol) {
  const int n = s.dim();
  const auto e = edge_vectors(s);
  Mat B(n, 0);
  for (const auto& x : e) {
    Vec r = x;
    for (int j = 0; j < B.cols(); ++j) r -= B.col(j).dot(r) * B.col(j);
    for (int j = 0; j < B.cols(); ++j) r -= B.col(j).dot(r) * B.col(j);  // re-orthogonalize
    const double nr = r.norm();
    if (nr > tol * std::max(1.0, x.norm())) {
      B.conservativeResize(n, B.cols() + 1);
      B.col(B.cols() - 1) = r / nr;
    }
  }
  return B;
}

Mat tangent_projector(const Simplex& s) {
  const Mat B = tangent_basis(s);
  return B * B.transpose();
}

double volume(const Simplex& s) {
  double f = 1.0;
  for (int i = 2; i <= s.k(); ++i) f *= i;
  return gram_volume(edge_vectors(s)) / f;
}

Vec barycenter(const Simplex& s) {
  Vec b = Vec::Zero(s.dim());
  for (const auto& x : s.v) b += x;
  return b / static_cast<double>(s.v.size());
}

Simplex face(const Simplex& s, int i) {
  Simplex f;
  for (int j = 0; j <= s.k(); ++j)
    if (j != i) f.v.push_back(s.v[j]);
  return f;
}

bool is_degenerate(const Simplex& s, double tol) {
  const auto e = edge_vectors(s);
  double scale = 1.0;
  for (const auto& x : e) {
    if (x.norm() == 0.0) return true;
    scale *= x.norm();
  }
  return gram_volume(e) <= tol * scale;
}

double affine_distance(const Simplex& s, const Vec& p) {
  const Mat B = tangent_basis(s);
  const Vec d = p - s.v[0];
  return (d - B * (B.transpose() * d)).norm();
}

int lex_compare(const Vec& a, const Vec& b, double eps) {
  for (int i = 0; i < a.size(); ++i) {
    const double tol = eps * std::max({1.0, std::abs(a(i)), std::abs(b(i))});
    if (a(i) < b(i) - tol) return -1;
    if (a(i) > b(i) + tol) return 1;
  }
  return 0;
}

bool same_point(const Vec& a, const Vec& b, double eps) { return lex_compare(a, b, eps) == 0; }

int canonical_order(Simplex& s) {
  const size_t m = s.v.size();
  std::vector<size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return lex_compare(s.v[a], s.v[b]) < 0; });
  for (size_t i = 1; i < m; ++i)
    if (lex_compare(s.v[idx[i - 1]], s.v[idx[i]]) == 0) return 0;
  int inversions = 0;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (idx[i] > idx[j]) ++inversions;
  std::vector<Vec> sorted;
  for (size_t i : idx) sorted.push_back(s.v[i]);
  s.v = std::move(sorted);
  return (inversions % 2) ? -1 : 1;
}

PolyChain sweep(const Simplex& base, const Simplex& top) {
  if (base.v.size() != top.v.size()) throw SchemaError("sweep: vertex count mismatch");
  const int m = base.k();
  PolyChain out(base.dim(), m + 1);
  for (int j = 0; j <= m; ++j) {
    if (same_point(base.v[j], top.v[j])) continue;
    std::vector<Vec> v;
    for (int i = 0; i <= j; ++i) v.push_back(base.v[i]);
    for (int i = j; i <= m; ++i) v.push_back(top.v[i]);
    Simplex s(v);
    if (is_degenerate(s)) continue;
    out.add((j % 2) ? -1.0 : 1.0, s);
  }
  return out;
}

PolyChain prism(const Simplex& base, const Vec& offset) {
  auto e = edge_vectors(base);
  const double scale = std::accumulate(e.begin(), e.end(), offset.norm(),
                                       [](double acc, const Vec& x) { return acc * x.norm(); });
  e.push_back(offset);
  if (offset.norm() == 0.0 || gram_volume(e) <= 1e-12 * scale)
    throw PreconditionError("prism: offset is parallel to the base");
  Simplex top = base;
  for (auto& x : top.v) x += offset;
  return sweep(base, top);
}

// ---------------------------------------------------------------------------

Poly Poly::constant(int n, double c) {
  Poly p(n);
  if (c != 0.0) p.terms[std::vector<int>(static_cast<size_t>(n), 0)] = c;
  return p;
}

Poly Poly::variable(int n, int i) {
  Poly p(n);
  std::vector<int> e(static_cast<size_t>(n), 0);
  e[static_cast<size_t>(i)] = 1;
  p.terms[e] = 1.0;
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  if (r.nvars == 0) r.nvars = o.nvars;
  for (const auto& [e, c] : o.terms) r.terms[e] += c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(std::max(nvars, o.nvars));
  for (const auto& [e1, c1] : terms)
    for (const auto& [e2, c2] : o.terms) {
      std::vector<int> e(e1.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      r.terms[e] += c1 * c2;
    }
  return r;
}

Poly Poly::operator*(double s) const {
  Poly r = *this;
  for (auto& t : r.terms) t.second *= s;
  return r;
}

Poly Poly::derivative(int i) const {
  Poly r(nvars);
  for (const auto& [e, c] : terms) {
    const int p = e[static_cast<size_t>(i)];
    if (p == 0) continue;
    auto e2 = e;
    e2[static_cast<size_t>(i)] = p - 1;
    r.terms[e2] += c * p;
  }
  return r;
}

double Poly::eval(const Vec& x) const {
  double s = 0;
  for (const auto& [e, c] : terms) {
    double m = c;
    for (size_t i = 0; i < e.size(); ++i) m *= std::pow(x(static_cast<int>(i)), e[i]);
    s += m;
  }
  return s;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms)
    if (c != 0.0) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool Poly::is_zero(double tol) const {
  for (const auto& t : terms)
    if (std::abs(t.second) > tol) return false;
  return true;
}

PolyForm::PolyForm(int n, int k)
    : dim(n), grade(k), coef(static_cast<size_t>(binom(n, k)), Poly(n)) {}

PolyForm PolyForm::constant(int n, int k, const std::vector<double>& c) {
  PolyForm w(n, k);
  if (c.size() != w.coef.size()) throw SchemaError("PolyForm::constant: wrong component count");
  for (size_t i = 0; i < c.size(); ++i) w.coef[i] = Poly::constant(n, c[i]);
  return w;
}

PolyForm PolyForm::operator+(const PolyForm& o) const {
  if (dim != o.dim || grade != o.grade) throw SchemaError("PolyForm add: shape mismatch");
  PolyForm r = *this;
  for (size_t i = 0; i < coef.size(); ++i) r.coef[i] = r.coef[i] + o.coef[i];
  return r;
}

PolyForm PolyForm::operator*(double s) const {
  PolyForm r = *this;
  for (auto& p : r.coef) p = p * s;
  return r;
}

std::vector<double> PolyForm::at(const Vec& x) const {
  std::vector<double> v(coef.size());
  for (size_t i = 0; i < coef.size(); ++i) v[i] = coef[i].eval(x);
  return v;
}

PolyForm random_form(int n, int k, int degree, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolyForm w(n, k);
  for (auto& p : w.coef) {
    // All monomials up to the requested total degree.
    std::vector<std::vector<int>> exps{std::vector<int>(static_cast<size_t>(n), 0)};
    for (int d = 0; d < degree; ++d) {
      const size_t cur = exps.size();
      for (size_t j = 0; j < cur; ++j) {
        if (std::accumulate(exps[j].begin(), exps[j].end(), 0) != d) continue;
        for (int i = 0; i < n; ++i) {
          auto e = exps[j];
          ++e[static_cast<size_t>(i)];
          if (std::find(exps.begin(), exps.end(), e) == exps.end()) exps.push_back(e);
        }
      }
    }
    for (const auto& e : exps) p.terms[e] = u(rng);
  }
  return w;
}

PolyForm exterior_derivative(const PolyForm& w) {
  const int n = w.dim, k = w.grade;
  if (k >= n) throw PreconditionError("exterior_derivative: grade must be < n");
  PolyForm out(n, k + 1);
  const auto& S = subsets(n, k);
  for (size_t ii = 0; ii < S.size(); ++ii) {
    for (int j = 0; j < n; ++j) {
      const auto& I = S[ii];
      if (std::find(I.begin(), I.end(), j) != I.end()) continue;
      // dx_j ^ dx_I: moving j into sorted position costs one sign per smaller index in I.
      int before = 0;
      for (int i : I)
        if (i < j) ++before;
      std::vector<int> U = I;
      U.push_back(j);
      std::sort(U.begin(), U.end());
      const double sign = (before % 2) ? -1.0 : 1.0;
      auto& dst = out.coef[static_cast<size_t>(subset_rank(U))];
      dst = dst + w.coef[ii].derivative(j) * sign;
    }
  }
  return out;
}

namespace {

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// Integral over the standard k-simplex of a polynomial in k variables:
// int t^b = b! / (|b| + k)!.
double integrate_standard(const Poly& p, int k) {
  double s = 0;
  for (const auto& [e, c] : p.terms) {
    double num = 1.0;
    int tot = 0;
    for (int x : e) {
      num *= factorial(x);
      tot += x;
    }
    s += c * num / factorial(tot + k);
  }
  return s;
}

// p(a_0 + E t) as a polynomial in the k barycentric-free coordinates t.
Poly pullback_poly(const Poly& p, const Simplex& s) {
  const int n = s.dim(), k = s.k();
  std::vector<Poly> lin;
  for (int i = 0; i < n; ++i) {
    Poly x = Poly::constant(k, s.v[0](i));
    x.nvars = k;
    for (int j = 1; j <= k; ++j) {
      const double c = s.v[j](i) - s.v[0](i);
      if (c != 0.0) x = x + Poly::variable(k, j - 1) * c;
    }
    lin.push_back(x);
  }
  Poly out(k);
  std::map<std::pair<int, int>, Poly> powcache;
  auto power = [&](int i, int e) -> const Poly& {
    auto key = std::make_pair(i, e);
    auto it = powcache.find(key);
    if (it != powcache.end()) return it->second;
    Poly r = Poly::constant(k, 1.0);
    r.nvars = k;
    for (int m = 0; m < e; ++m) r = r * lin[static_cast<size_t>(i)];
    return powcache.emplace(key, r).first->second;
  };
  for (const auto& [e, c] : p.terms) {
    Poly m = Poly::constant(k, c);
    m.nvars = k;
    for (int i = 0; i < n; ++i)
      if (e[static_cast<size_t>(i)] > 0) m = m * power(i, e[static_cast<size_t>(i)]);
    out = out + m;
  }
  return out;
}

}  // namespace

double integrate(const Simplex& s, const PolyForm& w) {
  const int n = s.dim(), k = s.k();
  if (w.dim != n || w.grade != k) throw SchemaError("integrate: grade/dimension mismatch");
  if (k == 0) {
    return w.coef[0].eval(s.v[0]);
  }
  Mat E(n, k);
  for (int j = 1; j <= k; ++j) E.col(j - 1) = s.v[j] - s.v[0];
  const auto& S = subsets(n, k);
  double total = 0;
  for (size_t ii = 0; ii < S.size(); ++ii) {
    if (w.coef[ii].terms.empty()) continue;
    Mat sub(k, k);
    for (int r = 0; r < k; ++r) sub.row(r) = E.row(S[ii][static_cast<size_t>(r)]);
    const double det = sub.determinant();
    if (det == 0.0) continue;
    total += det * integrate_standard(pullback_poly(w.coef[ii], s), k);
  }
  return total;
}

double integrate(const PolyChain& c, const PolyForm& w) {
  double s = 0;
  for (const auto& [coef, sim] : c.terms) s += coef * integrate(sim, w);
  return s;
}

double integrate_measure(const Simplex& s, const Poly& p) {
  const int k = s.k();
  if (k == 0) return p.eval(s.v[0]);
  // d H^k = k! vol(s) dt on the standard simplex.
  return factorial(k) * volume(s) * integrate_standard(pullback_poly(p, s), k);
}

Mat integrate(const MatChain& c, const PolyForm& w) {
  Mat acc = Mat::Zero(c.dim, c.dim);
  for (const auto& [coef, sim] : c.terms) acc += coef * integrate(sim, w);
  return acc;
}

namespace {

template <class C>
double coeff_scale(const C& c) {
  if constexpr (std::is_same_v<C, double>)
    return std::abs(c);
  else
    return c.cwiseAbs().maxCoeff();
}

// Random quadratic c + b.x + x^T M x.
struct Quad {
  double c = 0;
  Vec b;
  Mat M;
  double operator()(const Vec& x) const { return c + b.dot(x) + x.dot(M * x); }
};

// Mean of a quadratic over a simplex: exact vertex/edge-midpoint rule.
double quad_mean(const std::vector<Vec>& v, const Quad& q) {
  const int k = static_cast<int>(v.size()) - 1;
  if (k == 0) return q(v[0]);
  const double a = (2.0 - k) / ((k + 1.0) * (k + 2.0));
  const double b = 4.0 / ((k + 1.0) * (k + 2.0));
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (a != 0.0) s += a * q(v[i]);
    for (size_t j = i + 1; j < v.size(); ++j) s += b * q(Vec(0.5 * (v[i] + v[j])));
  }
  return s;
}

// Randomised current comparison with quadratic-coefficient test forms, evaluated in
// coordinates normalised to the joint bounding box.
template <class C>
bool equivalent_impl(const Chain<C>& a, const Chain<C>& b, int trials, std::uint64_t seed,
                     double tol) {
  if (a.terms.empty() && b.terms.empty()) return true;
  const int n = a.terms.empty() ? b.dim : a.dim;
  const int k = a.terms.empty() ? b.grade : a.grade;
  if (!a.terms.empty() && !b.terms.empty() && (a.dim != b.dim || a.grade != b.grade))
    throw SchemaError("chains_equivalent: shape mismatch");
  Vec lo = Vec::Constant(n, 1e300), hi = Vec::Constant(n, -1e300);
  for (const auto* ch : {&a, &b})
    for (const auto& t : ch->terms)
      for (const auto& x : t.second.v) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
      }
  const Vec mid = 0.5 * (lo + hi);
  const double rad = std::max(1e-12, 0.5 * (hi - lo).maxCoeff());
  const auto& S = subsets(n, k);
  const double kfact = [&] {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  }();

  struct Prepared {
    std::vector<Vec> v;
    std::vector<double> minors;  // det of the k x k minor per subset, over k!
    double vol;
  };
  auto prepare = [&](const Chain<C>& ch) {
    std::vector<Prepared> out;
    for (const auto& t : ch.terms) {
      Prepared p;
      for (const auto& x : t.second.v) p.v.push_back((x - mid) / rad);
      Mat E(n, k);
      for (int j = 1; j <= k; ++j) E.col(j - 1) = p.v[static_cast<size_t>(j)] - p.v[0];
      p.minors.resize(S.size());
      for (size_t i = 0; i < S.size(); ++i) {
        if (k == 0) {
          p.minors[i] = 1.0;
          continue;
        }
        Mat sub(k, k);
        for (int r = 0; r < k; ++r) sub.row(r) = E.row(S[i][static_cast<size_t>(r)]);
        p.minors[i] = sub.determinant() / kfact;
      }
      std::vector<Vec> e;
      for (int j = 0; j < k; ++j) e.push_back(E.col(j));
      p.vol = gram_volume(e) / kfact;
      out.push_back(std::move(p));
    }
    return out;
  };
  const auto pa = prepare(a), pb = prepare(b);

  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<Quad> q(S.size());
    for (auto& qi : q) {
      qi.c = u(rng);
      qi.b = random_vec(n, rng);
      qi.M = Mat(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) qi.M(i, j) = qi.M(j, i) = u(rng);
    }
    double scale = 0;
    auto eval = [&](const Chain<C>& ch, const std::vector<Prepared>& pr) {
      C acc{};
      bool first = true;
      for (size_t i = 0; i < ch.terms.size(); ++i) {
        double v = 0;
        for (size_t s = 0; s < S.size(); ++s)
          if (pr[i].minors[s] != 0.0) v += pr[i].minors[s] * quad_mean(pr[i].v, q[s]);
        const auto& coef = ch.terms[i].first;
        scale += coeff_scale(coef) * (pr[i].vol + std::abs(v));
        if (first) {
          acc = coef * v;
          first = false;
        } else {
          acc = acc + coef * v;
        }
      }
      return std::make_pair(acc, first);
    };
    auto [va, ea] = eval(a, pa);
    auto [vb, eb] = eval(b, pb);
    double diff;
    if constexpr (std::is_same_v<C, double>) {
      diff = std::abs((ea ? 0.0 : va) - (eb ? 0.0 : vb));
    } else {
      Mat A = ea ? Mat::Zero(n, n) : Mat(va);
      Mat B = eb ? Mat::Zero(n, n) : Mat(vb);
      diff = (A - B).cwiseAbs().maxCoeff();
    }
    if (diff > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

}  // namespace

bool chains_equivalent(const PolyChain& a, const PolyChain& b, int trials, std::uint64_t seed,
                       double tol) {
  return equivalent_impl(a, b, trials, seed, tol);
}

bool chains_equivalent(const MatChain& a, const MatChain& b, int trials, std::uint64_t seed,
                       double tol) {
  return equivalent_impl(a, b, trials, seed, tol);
}

}  // namespace sc
