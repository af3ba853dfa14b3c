#include "sc/exterior.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sc {

namespace {

constexpr int kMaxDim = 12;

struct SubsetTable {
  std::array<std::array<std::vector<std::vector<int>>, kMaxDim + 1>, kMaxDim + 1> table;
  SubsetTable() {
    for (int n = 0; n <= kMaxDim; ++n) {
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) s.push_back(i);
        table[n][s.size()].push_back(s);
      }
      for (int k = 0; k <= n; ++k) {
        auto& v = table[n][k];
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return subset_rank(a) < subset_rank(b); });
      }
    }
  }
};

const SubsetTable& subset_table() {
  static const SubsetTable t;
  return t;
}

// Sign of the permutation sorting the concatenation I ++ J (I, J disjoint, sorted).
int shuffle_sign(const std::vector<int>& I, const std::vector<int>& J) {
  int inversions = 0;
  for (int i : I)
    for (int j : J)
      if (i > j) ++inversions;
  return (inversions % 2) ? -1 : 1;
}

template <class G>
G wedge_impl(const G& a, const G& b) {
  if (a.dim != b.dim) throw SchemaError("wedge: dimension mismatch");
  const int n = a.dim, p = a.grade, q = b.grade;
  if (p + q > n) throw PreconditionError("wedge: grade overflow");
  G out(n, p + q);
  const auto& SA = subsets(n, p);
  const auto& SB = subsets(n, q);
  for (size_t ia = 0; ia < SA.size(); ++ia) {
    if (a.c[ia] == 0.0) continue;
    for (size_t ib = 0; ib < SB.size(); ++ib) {
      if (b.c[ib] == 0.0) continue;
      const auto& I = SA[ia];
      const auto& J = SB[ib];
      bool disjoint = true;
      for (int j : J)
        if (std::find(I.begin(), I.end(), j) != I.end()) {
          disjoint = false;
          break;
        }
      if (!disjoint) continue;
      std::vector<int> U = I;
      U.insert(U.end(), J.begin(), J.end());
      std::sort(U.begin(), U.end());
      out.c[static_cast<size_t>(subset_rank(U))] += shuffle_sign(I, J) * a.c[ia] * b.c[ib];
    }
  }
  return out;
}

}  // namespace

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const std::vector<std::vector<int>>& subsets(int n, int k) {
  if (n < 0 || n > kMaxDim || k < 0 || k > n) throw SchemaError("subsets: unsupported (n,k)");
  return subset_table().table[n][k];
}

long subset_rank(const std::vector<int>& s) {
  long r = 0;
  for (size_t i = 0; i < s.size(); ++i) r += binom(s[i], static_cast<int>(i) + 1);
  return r;
}

template <class Tag>
Graded<Tag> Graded<Tag>::operator+(const Graded& o) const {
  if (dim != o.dim || grade != o.grade) throw SchemaError("graded add: shape mismatch");
  Graded r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
  return r;
}
template <class Tag>
Graded<Tag> Graded<Tag>::operator-(const Graded& o) const {
  return *this + o * -1.0;
}
template <class Tag>
Graded<Tag> Graded<Tag>::operator*(double s) const {
  Graded r = *this;
  for (double& x : r.c) x *= s;
  return r;
}
template struct Graded<VectorTag>;
template struct Graded<CovectorTag>;

MultiVector as_multivector(const Vec& v) {
  MultiVector m(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) m.c[static_cast<size_t>(i)] = v(i);
  return m;
}

MultiCovector dual(const Vec& v) {
  MultiCovector m(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) m.c[static_cast<size_t>(i)] = v(i);
  return m;
}

MultiVector wedge(const MultiVector& a, const MultiVector& b) { return wedge_impl(a, b); }
MultiCovector wedge(const MultiCovector& a, const MultiCovector& b) { return wedge_impl(a, b); }

MultiVector wedge_all(const std::vector<Vec>& vs, int n) {
  MultiVector acc(n, 0);
  acc.c[0] = 1.0;
  for (const auto& v : vs) acc = wedge(acc, as_multivector(v));
  return acc;
}

MultiCovector wedge_duals(const std::vector<Vec>& vs, int n) {
  MultiCovector acc(n, 0);
  acc.c[0] = 1.0;
  for (const auto& v : vs) acc = wedge(acc, dual(v));
  return acc;
}

double pair(const MultiCovector& phi, const MultiVector& zeta) {
  if (phi.dim != zeta.dim) throw SchemaError("pair: dimension mismatch");
  if (phi.grade != zeta.grade) throw PreconditionError("pair: grade mismatch");
  double s = 0;
  for (size_t i = 0; i < phi.c.size(); ++i) s += phi.c[i] * zeta.c[i];
  return s;
}

Vec interior_left(const MultiVector& zeta, const MultiCovector& phi) {
  if (zeta.dim != phi.dim) throw SchemaError("interior_left: dimension mismatch");
  if (phi.grade + 1 != zeta.grade) throw PreconditionError("interior_left: grades must be k and k-1");
  const int n = zeta.dim;
  Vec u(n);
  for (int b = 0; b < n; ++b) u(b) = pair(wedge(phi, dual(unit(n, b))), zeta);
  return u;
}

double gram_volume(const std::vector<Vec>& vectors) {
  const int k = static_cast<int>(vectors.size());
  if (k == 0) return 1.0;
  const int n = static_cast<int>(vectors[0].size());
  if (k > n) return 0.0;
  // sqrt(det(M^T M)) = |det R| for M = QR; better conditioned than forming G.
  Mat M(n, k);
  for (int j = 0; j < k; ++j) M.col(j) = vectors[j];
  Eigen::HouseholderQR<Mat> qr(M);
  const Mat& R = qr.matrixQR();
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= std::abs(R(j, j));
  return v;
}

}  // namespace sc
