#pragma once
// Face frames and the four-block split of boundary coefficients into normal stress,
// shear stress, orthogonal force and parallel force.

#include "sc/stress.hpp"

namespace sc {

struct FaceFrame {
  int face_index = 0;
  Mat E;       // n x (k-1), orthonormal basis of the face's tangent space
  Vec normal;  // outward unit normal inside span(sigma)
  Mat O;       // n x n orthogonal: [E, normal, completion]
};

/// Frame for face i (vertex i removed) of a nondegenerate k-simplex. The completion
/// columns are chosen so that det(O) > 0 whenever n > k.
FaceFrame face_frame(const Simplex& sigma, int i);

/// Same frame with a caller-supplied random completion (used to test completion invariance).
FaceFrame face_frame(const Simplex& sigma, int i, Rng& completion_rng);

struct FaceDecomposition {
  Mat normal_stress;
  Mat shear_stress;
  Mat orthogonal_force_tensor;
  Mat parallel_force_tensor;
  Vec F1;  // -a_kk * area * normal
  Vec F2;  // -(sum_j a_jk E_j) * area
  Mat rotated;                  // O^T A O
  double block_residual = 0.0;  // mass of O^T A O outside the top-left k x k block, relative to |A|
};

/// Split with respect to an explicit frame whose first k columns are [E, normal].
FaceDecomposition split_in_frame(const Mat& A, const Mat& O, int k, double face_area);

/// Requires is_structural(A, sigma).
FaceDecomposition decompose_face(const Mat& A, const Simplex& sigma, int i);

struct FaceReport {
  int term = 0;
  int face = 0;
  Simplex simplex;  // the face
  FaceDecomposition parts;
};

struct BoundaryDecomposition {
  StressedChain S;  // normal and shear stress parts
  StressedChain F;  // orthogonal and parallel force parts
  std::vector<FaceReport> faces;
};

/// Requires every term of P to be structural. S + F equals boundary_stressed(P).
BoundaryDecomposition decompose_boundary(const StressedChain& P);

struct CoefficientClass {
  Mat stress_part;
  Mat force_part;
  Vec normal;  // unit vector of V orthogonal to tangent(tau)
  Mat V;       // n x k basis: tangent(tau) first, then normal
};

/// Requires is_generalized_cauchy(A, tau, k).
CoefficientClass classify_coefficient(const Mat& A, const Simplex& tau, int k);

}  // namespace sc
