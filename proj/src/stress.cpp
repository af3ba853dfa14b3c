#include "sc/stress.hpp"

#include <cmath>
#include <numeric>

namespace sc {

bool is_symmetric(const Mat& A, double tol) {
  if (A.rows() != A.cols()) return false;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

SpectralDecomp spectral(const Mat& A0) {
  if (!is_symmetric(A0)) throw PreconditionError("spectral: matrix is not symmetric");
  const int n = static_cast<int>(A0.rows());
  Mat A = 0.5 * (A0 + A0.transpose());
  Mat V = Mat::Identity(n, n);
  const double fro = std::max(A.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) <= 1e-15 * fro) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int r = 0; r < n; ++r) {
          const double arp = A(r, p), arq = A(r, q);
          A(r, p) = c * arp - s * arq;
          A(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = A(p, r), aqr = A(q, r);
          A(p, r) = c * apr - s * aqr;
          A(q, r) = s * apr + c * aqr;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = c * vrp - s * vrq;
          V(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(A(a, a)) > std::abs(A(b, b)); });
  SpectralDecomp out{Vec(n), Mat(n, n)};
  for (int j = 0; j < n; ++j) {
    out.mu(j) = A(idx[static_cast<size_t>(j)], idx[static_cast<size_t>(j)]);
    Vec v = V.col(idx[static_cast<size_t>(j)]);
    int arg = 0;
    for (int r = 1; r < n; ++r)
      if (std::abs(v(r)) > std::abs(v(arg)) + 1e-14) arg = r;
    if (v(arg) < 0) v = -v;
    out.V.col(j) = v;
  }
  return out;
}

Mat significant_eigenvectors(const Mat& A, double tol) {
  const auto sd = spectral(A);
  const int n = static_cast<int>(A.rows());
  const double top = sd.mu.size() ? std::abs(sd.mu(0)) : 0.0;
  Mat E(n, 0);
  if (top == 0.0) return E;
  for (int j = 0; j < n; ++j)
    if (std::abs(sd.mu(j)) > tol * top) {
      E.conservativeResize(n, E.cols() + 1);
      E.col(E.cols() - 1) = sd.V.col(j);
    }
  return E;
}

int numerical_rank(const Mat& A, double tol) {
  return static_cast<int>(significant_eigenvectors(A, tol).cols());
}

double structural_residual(const Mat& A, const Simplex& s, double tol) {
  const auto sd = spectral(A);
  const double top = std::abs(sd.mu(0));
  if (top == 0.0) return 0.0;
  const Mat P = tangent_projector(s);
  const int n = static_cast<int>(A.rows());
  double worst = 0;
  for (int j = 0; j < n; ++j) {
    const double w = std::abs(sd.mu(j)) / top;
    if (w <= tol) continue;
    const Vec v = sd.V.col(j);
    worst = std::max(worst, w * (v - P * v).norm());
  }
  return worst;
}

bool is_structural(const Mat& A, const Simplex& s, double tol) {
  if (!is_symmetric(A)) return false;
  return structural_residual(A, s, tol) <= kStructuralTol;
}

bool is_structural(const StressedChain& P, double tol) {
  for (const auto& [A, s] : P.terms)
    if (!is_structural(A, s, tol)) return false;
  return true;
}

namespace {

// Numerical column rank through a rank-revealing QR.
int column_rank(const Mat& M, double tol = 1e-7) {
  if (M.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

}  // namespace

bool is_generalized_cauchy(const Mat& A, const Simplex& tau, int k, double tol) {
  if (!is_symmetric(A)) return false;
  const Mat E = significant_eigenvectors(A, tol);
  if (E.cols() > k) return false;
  const Mat T = tangent_basis(tau);
  Mat ET(A.rows(), E.cols() + T.cols());
  ET << E, T;
  return column_rank(ET) <= k;
}

Mat generalized_cauchy_space(const Mat& A, const Simplex& tau, int k, double tol) {
  const int n = static_cast<int>(A.rows());
  const Mat T = tangent_basis(tau);
  const Mat E = significant_eigenvectors(A, tol);
  // Tangent directions first so that the (k-1) leading columns span tangent(tau).
  std::vector<Vec> cand;
  for (int j = 0; j < T.cols(); ++j) cand.push_back(T.col(j));
  for (int j = 0; j < E.cols(); ++j) cand.push_back(E.col(j));
  for (int j = 0; j < n; ++j) cand.push_back(unit(n, j));
  Mat B(n, 0);
  for (const auto& c : cand) {
    if (B.cols() == k) break;
    Vec r = c;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < B.cols(); ++j) r -= B.col(j).dot(r) * B.col(j);
    if (r.norm() > 1e-7) {
      B.conservativeResize(n, B.cols() + 1);
      B.col(B.cols() - 1) = r.normalized();
    }
  }
  return B;
}

StressedChain boundary_stressed(const StressedChain& P) { return boundary(P); }

double mass_nuclear(const StressedChain& P) {
  double m = 0;
  for (const auto& [A, s] : P.terms) {
    Eigen::JacobiSVD<Mat> svd(A);
    m += svd.singularValues().sum() * volume(s);
  }
  return m;
}

double mass_operator(const StressedChain& P) {
  double m = 0;
  for (const auto& [A, s] : P.terms) {
    Eigen::JacobiSVD<Mat> svd(A);
    m += (svd.singularValues().size() ? svd.singularValues()(0) : 0.0) * volume(s);
  }
  return m;
}

VectorForm random_vector_form(int n, int k, int degree, Rng& rng) {
  VectorForm w;
  for (int j = 0; j < n; ++j) w.comp.push_back(random_form(n, k, degree, rng));
  return w;
}

VectorForm exterior_derivative(const VectorForm& w) {
  VectorForm d;
  for (const auto& c : w.comp) d.comp.push_back(exterior_derivative(c));
  return d;
}

Vec evaluate_current(const StressedChain& P, const VectorForm& w) {
  const int n = P.dim;
  if (static_cast<int>(w.comp.size()) != n) throw SchemaError("evaluate_current: need n components");
  if (!P.terms.empty() && w.grade() != P.grade)
    throw PreconditionError("evaluate_current: grade mismatch");
  Vec out = Vec::Zero(n);
  for (const auto& [A, s] : P.terms) {
    Vec ints(n);
    for (int j = 0; j < n; ++j) ints(j) = integrate(s, w.comp[static_cast<size_t>(j)]);
    out += A * ints;
  }
  return out;
}

namespace {

// Skew matrix W with phi(u ^ v) = u^T W v for a 2-covector.
Mat skew_of(const MultiCovector& phi) {
  const int n = phi.dim;
  Mat W = Mat::Zero(n, n);
  const auto& S = subsets(n, 2);
  for (size_t i = 0; i < S.size(); ++i) {
    W(S[i][0], S[i][1]) = phi.c[i];
    W(S[i][1], S[i][0]) = -phi.c[i];
  }
  return W;
}

// Hodge complement: e_I -> sign(I, I^c) e_{I^c}; an isometry that maps unit simple
// k-vectors onto unit simple (n-k)-vectors, so comass is preserved.
MultiCovector hodge(const MultiCovector& phi) {
  const int n = phi.dim, k = phi.grade;
  MultiCovector out(n, n - k);
  const auto& S = subsets(n, k);
  for (size_t i = 0; i < S.size(); ++i) {
    std::vector<int> comp;
    for (int j = 0; j < n; ++j)
      if (std::find(S[i].begin(), S[i].end(), j) == S[i].end()) comp.push_back(j);
    int inv = 0;
    for (int a : S[i])
      for (int b : comp)
        if (a > b) ++inv;
    out.c[static_cast<size_t>(subset_rank(comp))] = ((inv % 2) ? -1.0 : 1.0) * phi.c[i];
  }
  return out;
}

double comass_alternating(const MultiCovector& phi, int restarts, std::uint64_t seed) {
  const int n = phi.dim, k = phi.grade;
  Rng rng(seed);
  double best = 0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<Vec> X;
    for (int j = 0; j < k; ++j) X.push_back(random_vec(n, rng));
    Eigen::HouseholderQR<Mat> qr0([&] {
      Mat M(n, k);
      for (int j = 0; j < k; ++j) M.col(j) = X[static_cast<size_t>(j)];
      return M;
    }());
    const Mat Q = qr0.householderQ() * Mat::Identity(n, k);
    for (int j = 0; j < k; ++j) X[static_cast<size_t>(j)] = Q.col(j);
    double val = 0;
    for (int it = 0; it < 200; ++it) {
      for (int j = 0; j < k; ++j) {
        // phi is linear in X_j: optimise over unit vectors orthogonal to the others.
        Vec g(n);
        for (int b = 0; b < n; ++b) {
          auto Y = X;
          Y[static_cast<size_t>(j)] = unit(n, b);
          g(b) = pair(phi, wedge_all(Y, n));
        }
        for (int m = 0; m < k; ++m)
          if (m != j) g -= X[static_cast<size_t>(m)].dot(g) * X[static_cast<size_t>(m)];
        if (g.norm() > 0) X[static_cast<size_t>(j)] = g.normalized();
      }
      const double nv = std::abs(pair(phi, wedge_all(X, n)));
      if (nv - val < 1e-15 * std::max(1.0, nv)) {
        val = nv;
        break;
      }
      val = nv;
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace

double comass(const MultiCovector& phi, int restarts, std::uint64_t seed) {
  const int n = phi.dim, k = phi.grade;
  if (k == 0 || k == n) return std::abs(phi.c[0]);
  if (k == 1 || k == n - 1) return phi.norm();
  if (k == 2) {
    Eigen::JacobiSVD<Mat> svd(skew_of(phi));
    return svd.singularValues()(0);
  }
  if (k == n - 2) return comass(hodge(phi), restarts, seed);
  return comass_alternating(phi, restarts, seed);
}

double comass_form_estimate(const VectorForm& w, const std::vector<Vec>& pts, int inner_iters) {
  double best = 0;
  for (const auto& x : pts) {
    double s = 0;
    for (const auto& c : w.comp) {
      MultiCovector phi(c.dim, c.grade);
      phi.c = c.at(x);
      const double m = comass(phi, inner_iters);
      s += m * m;
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

}  // namespace sc
