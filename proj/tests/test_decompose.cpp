#include "sc/decompose.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace sc;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Mat outer(const Vec& u, const Vec& w) { return u * w.transpose(); }

// Lower triangle of the unit square: I bottom, J left, K = [(0,1),(1,0)] (face 0).
const Simplex kT({v2(0, 0), v2(1, 0), v2(0, 1)});

}  // namespace

TEST_CASE("face frames of the right triangle") {
  const FaceFrame K = face_frame(kT, 0);
  const double r = 1 / std::sqrt(2.0);
  CHECK((K.normal - v2(r, r)).norm() < 1e-14);
  const FaceFrame I = face_frame(kT, 2);
  CHECK((I.normal - v2(0, -1)).norm() < 1e-14);
  for (const auto& f : {K, I}) {
    CHECK((f.O.transpose() * f.O - Mat::Identity(2, 2)).norm() < 1e-14);
    CHECK(std::abs(f.E.col(0).dot(f.normal)) < 1e-14);
  }
  const Simplex seg({v2(0, 0), v2(3, 4)});
  CHECK((face_frame(seg, 0).normal - v2(0.6, 0.8)).norm() < 1e-14);
  CHECK_THROWS_AS(face_frame(Simplex({v2(0, 0), v2(1, 1), v2(2, 2)}), 0), PreconditionError);
}

TEST_CASE("four-block split of the diagonal face") {
  const double r = 1 / std::sqrt(2.0);
  const Vec Kv = v2(r, -r), Kp = v2(r, r);
  // u (x) v acts as w -> <u, w> v, i.e. the matrix v u^T.
  const FaceDecomposition d = decompose_face(outer(unit(2, 0), unit(2, 0)), kT, 0);
  CHECK((d.normal_stress - 0.5 * outer(Kv, Kv)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.shear_stress - 0.5 * outer(Kp, Kv)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.orthogonal_force_tensor - 0.5 * outer(Kp, Kp)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.parallel_force_tensor - 0.5 * outer(Kv, Kp)).cwiseAbs().maxCoeff() < 1e-12);
  // Total external force on the diagonal: (orthogonal + parallel) n * length = e1.
  CHECK(((d.orthogonal_force_tensor + d.parallel_force_tensor) * Kp * std::sqrt(2.0) - unit(2, 0)).norm() <
        1e-12);
  CHECK(d.block_residual < 1e-12);
}

TEST_CASE("rank-one face force identities") {
  Rng rng(1);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 3, k = 1 + t % n;
    const Simplex s = testing::random_simplex(n, k, rng);
    const Vec u = tangent_basis(s) * random_vec(k, rng);
    const Vec uh = u.normalized();
    const double mu = random_vec(1, rng)(0);
    const Mat A = mu * uh * uh.transpose();
    for (int i = 0; i <= k; ++i) {
      const FaceDecomposition d = decompose_face(A, s, i);
      const FaceFrame fr = face_frame(s, i);
      const double area = k == 1 ? 1.0 : volume(face(s, i));
      const double c = uh.dot(fr.normal);
      CHECK((d.F1 + mu * c * c * area * fr.normal).norm() < 1e-10);
      CHECK((d.F1 + d.F2 + mu * c * area * uh).norm() < 1e-10);
    }
  }
}

TEST_CASE("face forces of one simplex balance") {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 2, k = 1 + t % n;
    const Simplex s = testing::random_simplex(n, k, rng);
    const Mat A = testing::random_structural_tensor(s, rng);
    Vec total = Vec::Zero(n);
    for (int i = 0; i <= k; ++i) {
      const auto d = decompose_face(A, s, i);
      total += d.F1 + d.F2;
    }
    CHECK(total.norm() < 1e-10);
  }
}

TEST_CASE("rectangle classification") {
  const Vec p0 = v2(0, 0), p1 = v2(2, 0), p2 = v2(2, 1), p3 = v2(0, 1);
  const Mat D = outer(unit(2, 0), unit(2, 0));
  StressedChain S(2, 2);
  S.add(D, Simplex({p0, p1, p2}));
  S.add(D, Simplex({p0, p2, p3}));
  const auto B = decompose_boundary(S);
  int horizontal = 0, vertical = 0;
  for (const auto& f : B.faces) {
    const Vec e = f.simplex.v[1] - f.simplex.v[0];
    const bool is_h = std::abs(e(1)) < 1e-14, is_v = std::abs(e(0)) < 1e-14;
    if (is_h) {
      ++horizontal;
      CHECK((f.parts.normal_stress - D).norm() < 1e-12);
      CHECK(f.parts.orthogonal_force_tensor.norm() < 1e-12);
      CHECK(f.parts.parallel_force_tensor.norm() < 1e-12);
    } else if (is_v) {
      ++vertical;
      CHECK((f.parts.orthogonal_force_tensor - D).norm() < 1e-12);
      CHECK(f.parts.normal_stress.norm() < 1e-12);
      CHECK(f.parts.shear_stress.norm() < 1e-12);
    }
  }
  CHECK(horizontal == 2);
  CHECK(vertical == 2);
  CHECK(chains_equivalent(B.S + B.F, boundary_stressed(S), 3, 1));
  const auto empty = decompose_boundary(StressedChain(2, 2));
  CHECK(empty.S.empty());
  CHECK(empty.F.empty());
}

TEST_CASE("random recombination and completion invariance") {
  Rng rng(3);
  const StressedChain P = testing::random_structural_chain(4, 2, 3, rng);
  const auto B = decompose_boundary(P);
  CHECK(chains_equivalent(B.S + B.F, boundary_stressed(P), 3, 9, 1e-9));
  const auto& [A, s] = P.terms[0];
  const auto d0 = split_in_frame(A, face_frame(s, 0).O, 2, volume(face(s, 0)));
  const auto d1 = split_in_frame(A, face_frame(s, 0, rng).O, 2, volume(face(s, 0)));
  CHECK((d0.normal_stress + d0.shear_stress - d1.normal_stress - d1.shear_stress).norm() < 1e-10);
  CHECK((d0.F1 - d1.F1).norm() < 1e-10);
  StressedChain bad(2, 1);
  bad.add(outer(unit(2, 1), unit(2, 1)), Simplex({v2(0, 0), v2(1, 0)}));
  CHECK_THROWS_AS(decompose_boundary(bad), PreconditionError);
}

TEST_CASE("coefficient classification") {
  const Simplex tau({v2(0, 0), v2(1, 0)});
  const Mat A = 2 * outer(unit(2, 0), unit(2, 0)) - 3 * outer(unit(2, 1), unit(2, 1));
  const auto c = classify_coefficient(A, tau, 2);
  CHECK((c.force_part + 3 * outer(unit(2, 1), unit(2, 1))).norm() < 1e-12);
  CHECK((c.stress_part + c.force_part - A).norm() < 1e-12);
  const auto t = classify_coefficient(outer(unit(2, 0), unit(2, 0)), tau, 2);
  CHECK(t.force_part.norm() < 1e-12);

  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4, k = 2 + trial % 2;
    const Simplex sig = testing::random_simplex(n, k, rng);
    const Simplex tf = face(sig, 0);
    const Mat B = testing::random_structural_tensor(sig, rng);
    REQUIRE(is_generalized_cauchy(B, tf, k));
    const auto cc = classify_coefficient(B, tf, k);
    CHECK((cc.stress_part + cc.force_part - B).norm() < 1e-10);
    const Mat Pt = tangent_projector(tf);
    CHECK((cc.stress_part * cc.normal).norm() <= 1e-10 + (Pt * B * cc.normal).norm() + 1e-10);
    CHECK((cc.force_part * cc.normal - B * cc.normal).norm() < 1e-10);
  }
  CHECK_THROWS_AS(classify_coefficient(Mat::Identity(2, 2) * 0 + outer(unit(2, 1), unit(2, 1)) +
                                           outer(unit(2, 0), unit(2, 0)),
                                       Simplex({v2(0, 0)}), 1),
                  PreconditionError);
}
