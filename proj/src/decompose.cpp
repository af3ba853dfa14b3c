#include "sc/decompose.hpp"

#include <cmath>

namespace sc {

namespace {

// Orthonormal completion of the given columns, using either the coordinate axes or
// random vectors as candidates.
Mat complete_basis(const Mat& B0, Rng* rng) {
  const int n = static_cast<int>(B0.rows());
  Mat B = B0;
  int axis = 0;
  while (B.cols() < n) {
    Vec r = rng ? random_vec(n, *rng) : unit(n, axis++ % n);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < B.cols(); ++j) r -= B.col(j).dot(r) * B.col(j);
    if (r.norm() > 1e-6) {
      B.conservativeResize(n, B.cols() + 1);
      B.col(B.cols() - 1) = r.normalized();
    }
  }
  return B;
}

FaceFrame build_frame(const Simplex& sigma, int i, Rng* rng) {
  const int k = sigma.k();
  if (i < 0 || i > k) throw PreconditionError("face_frame: face index out of range");
  if (k < 1 || is_degenerate(sigma)) throw PreconditionError("face_frame: degenerate simplex");
  const Simplex f = face(sigma, i);
  FaceFrame fr;
  fr.face_index = i;
  fr.E = (k >= 2) ? tangent_basis(f) : Mat(sigma.dim(), 0);
  // Normal: component of (a_i - face barycentre) orthogonal to the face, reversed.
  Vec d = sigma.v[static_cast<size_t>(i)] - barycenter(f);
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 0; j < fr.E.cols(); ++j) d -= fr.E.col(j).dot(d) * fr.E.col(j);
  fr.normal = -d.normalized();
  Mat B(sigma.dim(), k);
  B << fr.E, fr.normal;
  fr.O = complete_basis(B, rng);
  if (fr.O.cols() > k && fr.O.determinant() < 0) fr.O.col(fr.O.cols() - 1) *= -1.0;
  return fr;
}

}  // namespace

FaceFrame face_frame(const Simplex& sigma, int i) { return build_frame(sigma, i, nullptr); }

FaceFrame face_frame(const Simplex& sigma, int i, Rng& rng) { return build_frame(sigma, i, &rng); }

FaceDecomposition split_in_frame(const Mat& A, const Mat& O, int k, double face_area) {
  const int n = static_cast<int>(A.rows());
  const Mat At = O.transpose() * A * O;
  FaceDecomposition d;
  d.rotated = At;
  const int t = k - 1;  // index of the normal column
  Mat a1 = Mat::Zero(n, n), a2 = Mat::Zero(n, n), a3 = Mat::Zero(n, n), a4 = Mat::Zero(n, n);
  a1.topLeftCorner(t, t) = At.topLeftCorner(t, t);
  a2.block(t, 0, 1, t) = At.block(t, 0, 1, t);
  a3(t, t) = At(t, t);
  a4.block(0, t, t, 1) = At.block(0, t, t, 1);
  d.normal_stress = O * a1 * O.transpose();
  d.shear_stress = O * a2 * O.transpose();
  d.orthogonal_force_tensor = O * a3 * O.transpose();
  d.parallel_force_tensor = O * a4 * O.transpose();
  Mat outside = At;
  outside.topLeftCorner(k, k).setZero();
  const double scale = A.cwiseAbs().maxCoeff();
  d.block_residual = scale > 0 ? outside.cwiseAbs().maxCoeff() / scale : 0.0;
  const Vec nrm = O.col(t);
  d.F1 = -At(t, t) * face_area * nrm;
  d.F2 = Vec::Zero(n);
  for (int j = 0; j < t; ++j) d.F2 -= At(j, t) * face_area * O.col(j);
  return d;
}

FaceDecomposition decompose_face(const Mat& A, const Simplex& sigma, int i) {
  if (!is_structural(A, sigma)) {
    const auto sd = spectral(A);
    const Mat P = tangent_projector(sigma);
    int worst = 0;
    double wr = -1;
    for (int j = 0; j < sd.V.cols(); ++j) {
      const double r = std::abs(sd.mu(j)) * (sd.V.col(j) - P * sd.V.col(j)).norm();
      if (r > wr) {
        wr = r;
        worst = j;
      }
    }
    std::string msg = "decompose_face: coefficient is not structural; offending eigenvector [";
    for (int r = 0; r < sd.V.rows(); ++r) msg += (r ? ", " : "") + std::to_string(sd.V(r, worst));
    throw PreconditionError(msg + "]");
  }
  const FaceFrame fr = face_frame(sigma, i);
  return split_in_frame(A, fr.O, sigma.k(), volume(face(sigma, i)));
}

BoundaryDecomposition decompose_boundary(const StressedChain& P) {
  BoundaryDecomposition out;
  out.S = StressedChain(P.dim, P.grade - 1);
  out.F = StressedChain(P.dim, P.grade - 1);
  if (P.grade < 1) throw PreconditionError("decompose_boundary: grade must be >= 1");
  for (size_t t = 0; t < P.terms.size(); ++t) {
    const auto& [A, sigma] = P.terms[t];
    for (int i = 0; i <= sigma.k(); ++i) {
      FaceReport rep{static_cast<int>(t), i, face(sigma, i), decompose_face(A, sigma, i)};
      const double sgn = (i % 2) ? -1.0 : 1.0;
      out.S.add(sgn * (rep.parts.normal_stress + rep.parts.shear_stress), rep.simplex);
      out.F.add(sgn * (rep.parts.orthogonal_force_tensor + rep.parts.parallel_force_tensor),
                rep.simplex);
      out.faces.push_back(std::move(rep));
    }
  }
  out.S = canonicalize(out.S);
  out.F = canonicalize(out.F);
  return out;
}

CoefficientClass classify_coefficient(const Mat& A, const Simplex& tau, int k) {
  if (!is_generalized_cauchy(A, tau, k))
    throw PreconditionError("classify_coefficient: not a generalized Cauchy tensor for this simplex");
  CoefficientClass c;
  c.V = generalized_cauchy_space(A, tau, k);
  c.normal = c.V.col(k - 1);
  const Mat O = complete_basis(c.V, nullptr);
  const auto d = split_in_frame(A, O, k, 1.0);
  c.stress_part = d.normal_stress + d.shear_stress;
  c.force_part = d.orthogonal_force_tensor + d.parallel_force_tensor;
  return c;
}

}  // namespace sc
