#pragma once
// Exterior algebra over R^n: graded multivectors and multicovectors stored in the
// basis of strictly increasing index subsets, ordered colexicographically.

#include "sc/common.hpp"

#include <vector>

namespace sc {

/// Number of k-subsets of an n-set.
long binom(int n, int k);

/// The k-subsets of {0..n-1} in colex order; element j is the subset with colex rank j.
const std::vector<std::vector<int>>& subsets(int n, int k);

/// Colex rank of a strictly increasing subset.
long subset_rank(const std::vector<int>& s);

struct VectorTag {};
struct CovectorTag {};

template <class Tag>
struct Graded {
  int dim = 0;
  int grade = 0;
  std::vector<double> c;  // size binom(dim, grade)

  Graded() = default;
  Graded(int n, int k) : dim(n), grade(k), c(static_cast<size_t>(binom(n, k)), 0.0) {}

  static Graded basis(int n, const std::vector<int>& idx) {
    Graded g(n, static_cast<int>(idx.size()));
    g.c[static_cast<size_t>(subset_rank(idx))] = 1.0;
    return g;
  }
  double norm() const {
    double s = 0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
  }
  Graded operator+(const Graded& o) const;
  Graded operator-(const Graded& o) const;
  Graded operator*(double s) const;
};

using MultiVector = Graded<VectorTag>;
using MultiCovector = Graded<CovectorTag>;

MultiVector as_multivector(const Vec& v);
MultiCovector dual(const Vec& v);

MultiVector wedge(const MultiVector& a, const MultiVector& b);
MultiCovector wedge(const MultiCovector& a, const MultiCovector& b);

/// Wedge of a list of vectors, in order. An empty list gives the grade-0 unit.
MultiVector wedge_all(const std::vector<Vec>& vs, int n);
MultiCovector wedge_duals(const std::vector<Vec>& vs, int n);

/// Duality pairing of equal-grade elements (Euclidean basis is self-dual).
double pair(const MultiCovector& phi, const MultiVector& zeta);

/// The vector u with dual(b)(u) = (phi ^ dual(b))(zeta) for every b.
Vec interior_left(const MultiVector& zeta, const MultiCovector& phi);

/// sqrt(det G) for the Gram matrix of the given vectors; 0 for dependent sets.
double gram_volume(const std::vector<Vec>& vectors);

}  // namespace sc
