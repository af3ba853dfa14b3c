#pragma once
// Random instance generators shared by the unit tests and the acceptance binary.

#include "sc/balance.hpp"
#include "sc/chains.hpp"
#include "sc/stress.hpp"

#include <cmath>
#include <map>

namespace sc::testing {

/// Simplex with vertices in [-1,1]^n whose normalized volume is not tiny.
inline Simplex random_simplex(int n, int k, Rng& rng, double min_quality = 0.05) {
  for (;;) {
    std::vector<Vec> v;
    for (int i = 0; i <= k; ++i) v.push_back(random_vec(n, rng));
    Simplex s(v);
    if (k == 0) return s;
    double prod = 1;
    for (const auto& e : edge_vectors(s)) prod *= e.norm();
    double fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    if (volume(s) * fact > min_quality * prod) return s;
  }
}

/// Symmetric k x k matrix with entries in [-1,1].
inline Mat random_symmetric(int k, Rng& rng) {
  Mat S = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double x = random_vec(1, rng)(0);
      S(i, j) = S(j, i) = x;
    }
  return S;
}

/// E S E^T with E an orthonormal tangent basis of s.
inline Mat random_structural_tensor(const Simplex& s, Rng& rng) {
  const Mat E = tangent_basis(s);
  return E * random_symmetric(static_cast<int>(E.cols()), rng) * E.transpose();
}

inline StressedChain random_structural_chain(int n, int k, int terms, Rng& rng) {
  StressedChain P(n, k);
  for (int t = 0; t < terms; ++t) {
    const Simplex s = random_simplex(n, k, rng);
    P.add(random_structural_tensor(s, rng), s);
  }
  return P;
}

/// Boundary forces of a few random beams: an equilibrium system of grade k-1.
inline ForceSystem random_beam_forces(int n, int k, int beams, Rng& rng) {
  std::vector<BeamTerm> b;
  for (int t = 0; t < beams; ++t) {
    const Simplex s = random_simplex(n, k, rng);
    b.push_back({random_structural_tensor(s, rng), s});
  }
  return beam_boundary(b, n, k);
}

/// Outward unit normal of face i inside span(s), from a QR of the face edges.
inline Vec outward_normal(const Simplex& s, int i) {
  const int n = s.dim(), k = s.k();
  const Simplex f = face(s, i);
  const Vec base = f.v[0];
  Vec away = s.v[static_cast<size_t>(i)] - base;
  if (k > 1) {
    Mat E(n, k - 1);
    for (int j = 1; j < k; ++j) E.col(j - 1) = f.v[static_cast<size_t>(j)] - base;
    const Mat Q = Eigen::HouseholderQR<Mat>(E).householderQ() * Mat::Identity(n, k - 1);
    away -= Q * (Q.transpose() * away);
  }
  return -away.normalized();
}

/// Least-change projection of the densities onto weighted equilibrium.
inline void project_to_equilibrium(ForceSystem& F) {
  const int n = F.dim, entries = static_cast<int>(F.entries.size());
  const int rows = n + n * (n - 1) / 2;
  const int cols = n * entries;
  Mat C = Mat::Zero(rows, cols);
  Vec d(cols);
  for (int e = 0; e < entries; ++e) {
    const auto& en = F.entries[static_cast<size_t>(e)];
    const double m = carrier_measure(en.simplex);
    const Vec c = barycenter(en.simplex);
    d.segment(n * e, n) = en.density;
    for (int a = 0; a < n; ++a) C(a, n * e + a) = m;
    int r = n;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b, ++r) {
        C(r, n * e + a) += m * c(b);
        C(r, n * e + b) -= m * c(a);
      }
  }
  const Vec fix = C.transpose() * (C * C.transpose()).completeOrthogonalDecomposition().solve(C * d);
  d -= fix;
  for (int e = 0; e < entries; ++e) F.entries[static_cast<size_t>(e)].density = d.segment(n * e, n);
}

/// Random densities on random (k-1)-simplices, projected onto weighted equilibrium.
inline ForceSystem random_projected_forces(int n, int k, int entries, Rng& rng) {
  ForceSystem F(n, k - 1);
  for (int e = 0; e < entries; ++e) F.add(random_vec(n, rng), random_simplex(n, k - 1, rng));
  project_to_equilibrium(F);
  return F;
}

/// Closed structural chain of grade g >= 1 in R^n: a random kernel element of the boundary
/// map over all g-simplices on `points` random points. Coefficients are E S E^T per simplex.
inline std::vector<std::vector<int>> combinations(int m, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) c[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = r - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == m - r + i) --i;
    if (i < 0) return out;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < r; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
}

inline StressedChain random_closed_structural_chain(int n, int g, int points, Rng& rng) {
  std::vector<Vec> P;
  for (int i = 0; i < points; ++i) P.push_back(random_vec(n, rng));
  const auto simp = combinations(points, g + 1);
  const auto faces = combinations(points, g);
  std::map<std::vector<int>, int> face_row;
  for (size_t f = 0; f < faces.size(); ++f) face_row[faces[f]] = static_cast<int>(f);
  const int sym_g = g * (g + 1) / 2, sym_n = n * (n + 1) / 2;
  std::vector<Mat> E;
  for (const auto& idx : simp) {
    std::vector<Vec> v;
    for (int i : idx) v.push_back(P[static_cast<size_t>(i)]);
    E.push_back(tangent_basis(Simplex(v)));
  }
  Mat M = Mat::Zero(static_cast<int>(faces.size()) * sym_n, static_cast<int>(simp.size()) * sym_g);
  for (size_t s = 0; s < simp.size(); ++s) {
    int col = static_cast<int>(s) * sym_g;
    for (int a = 0; a < g; ++a)
      for (int b = a; b < g; ++b, ++col) {
        Mat S = Mat::Zero(g, g);
        S(a, b) = S(b, a) = 1;
        const Mat A = E[s] * S * E[s].transpose();
        for (int i = 0; i <= g; ++i) {
          std::vector<int> f = simp[s];
          f.erase(f.begin() + i);
          const int row = face_row.at(f) * sym_n;
          const double sign = (i % 2) ? -1.0 : 1.0;
          for (int p = 0, r = row; p < n; ++p)
            for (int q = p; q < n; ++q, ++r) M(r, col) += sign * A(p, q);
        }
      }
  }
  const Mat K = Eigen::FullPivLU<Mat>(M).kernel();
  if (K.cols() == 0 || K.norm() == 0) throw PreconditionError("random_closed_structural_chain: trivial kernel");
  const Vec x = K * random_vec(static_cast<int>(K.cols()), rng);
  const Vec y = x / x.cwiseAbs().maxCoeff();
  StressedChain R(n, g);
  for (size_t s = 0; s < simp.size(); ++s) {
    Mat S(g, g);
    for (int a = 0, c = static_cast<int>(s) * sym_g; a < g; ++a)
      for (int b = a; b < g; ++b, ++c) S(a, b) = S(b, a) = y(c);
    if (S.cwiseAbs().maxCoeff() < 1e-12) continue;
    std::vector<Vec> v;
    for (int i : simp[s]) v.push_back(P[static_cast<size_t>(i)]);
    R.add(E[s] * S * E[s].transpose(), Simplex(v));
  }
  return R;
}

/// Smallest point count for which the complete complex has a nontrivial kernel.
inline int closed_chain_points(int n, int g) {
  const int sym_g = g * (g + 1) / 2, sym_n = n * (n + 1) / 2;
  for (int V = g + 2;; ++V)
    if (static_cast<long>(combinations(V, g + 1).size()) * sym_g >
        static_cast<long>(combinations(V, g).size()) * sym_n)
      return V;
}

}  // namespace sc::testing
