#pragma once
// Stress tensors and stressed chains: spectral data, structural predicates, mass
// functionals, and evaluation of stressed chains against vector-valued forms.

#include "sc/chains.hpp"
#include "sc/exterior.hpp"

namespace sc {

using StressedChain = MatChain;

struct SpectralDecomp {
  Vec mu;  // sorted by |mu| descending
  Mat V;   // eigenvectors as columns, orthonormal
};

bool is_symmetric(const Mat& A, double tol = 1e-9);

/// Cyclic Jacobi diagonalisation. Eigenvector signs make the largest-magnitude
/// component positive (first index on ties). Throws PreconditionError if A is not symmetric.
SpectralDecomp spectral(const Mat& A);

/// Eigenvectors whose eigenvalue exceeds tol * max|mu| in magnitude.
Mat significant_eigenvectors(const Mat& A, double tol = 1e-8);
int numerical_rank(const Mat& A, double tol = 1e-8);

/// Tolerance on the weighted tangent-projection residual used by is_structural.
inline constexpr double kStructuralTol = 1e-6;

/// Weighted residual max_j |mu_j|/max|mu| * |(I - P_s) v_j| over significant eigenpairs.
double structural_residual(const Mat& A, const Simplex& s, double tol = 1e-8);
bool is_structural(const Mat& A, const Simplex& s, double tol = 1e-8);
bool is_structural(const StressedChain& P, double tol = 1e-8);

/// Rank(A) <= k and the significant eigenspace plus tangent(tau) spans at most k dimensions.
bool is_generalized_cauchy(const Mat& A, const Simplex& tau, int k, double tol = 1e-8);

/// Orthonormal basis (n x k) of the k-space V containing the significant eigenvectors
/// of A and tangent(tau); padded deterministically if they span fewer than k dimensions.
Mat generalized_cauchy_space(const Mat& A, const Simplex& tau, int k, double tol = 1e-8);

StressedChain boundary_stressed(const StressedChain& P);

double mass_nuclear(const StressedChain& P);
double mass_operator(const StressedChain& P);

struct VectorForm {
  std::vector<PolyForm> comp;  // one k-form per coordinate direction
  int dim() const { return comp.empty() ? 0 : comp[0].dim; }
  int grade() const { return comp.empty() ? 0 : comp[0].grade; }
};

VectorForm random_vector_form(int n, int k, int degree, Rng& rng);
VectorForm exterior_derivative(const VectorForm& w);

/// Sum_i A_i (int_{sigma_i} w_1, ..., int_{sigma_i} w_n).
Vec evaluate_current(const StressedChain& P, const VectorForm& w);

/// Comass of a constant covector. Exact for grades 0, 1, 2, n-2, n-1, n; otherwise an
/// alternating maximisation over orthonormal frames (a lower bound).
double comass(const MultiCovector& phi, int restarts = 8, std::uint64_t seed = 1);

/// Lower-bound estimate of the comass of a vector form: max over sample points of
/// sqrt(sum_j comass(w_j(x))^2). For forms of degree <= 1 sampled at the vertices of
/// a chain the estimate equals the supremum over that chain.
double comass_form_estimate(const VectorForm& w, const std::vector<Vec>& sample_points,
                            int inner_iters = 8);

}  // namespace sc
