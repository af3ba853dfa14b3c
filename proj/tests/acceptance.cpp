// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion; exits nonzero if any fails.
// Every tolerance, instance count and runtime limit is a named constant below.

#include "sc/balance.hpp"
#include "sc/decompose.hpp"
#include "sc/fans.hpp"
#include "sc/optimize.hpp"
#include "sc/stress.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace sc;

namespace {

// Criterion 1
constexpr double kExampleTol = 1e-10;
constexpr double kLimit1 = 1.0;
// Criterion 2
constexpr int kChainCases = 1000;
constexpr double kStokesRelTol = 1e-8;
constexpr double kBoundarySquaredTol = 1e-12;
constexpr double kLimit2 = 30.0;
// Criterion 3
constexpr int kBeamCases = 500;
constexpr double kBeamRelTol = 1e-9;
constexpr double kBeamBalanceTol = 1e-10;
constexpr double kLimit3 = 30.0;
// Criterion 4
constexpr int kDecompCases = 300;
constexpr double kRecombineTol = 1e-9;
constexpr double kBlockTol = 1e-8;
constexpr double kIdempotenceTol = 1e-10;
constexpr double kCompletionTol = 1e-10;
constexpr double kLimit4 = 60.0;
// Criterion 5
constexpr int kExistenceCases = 50;
constexpr double kCurrentTol = 1e-7;
constexpr double kLimit5 = 600.0;
// Criterion 6
constexpr int kConeCases = 100;
constexpr double kConeTol = 1e-10;
constexpr double kLimit6 = 30.0;
// Criterion 7
constexpr int kTrussFixtures = 20;
constexpr int kMaxEdges = 8;
constexpr double kMassTol = 1e-6;
constexpr double kLoadTol = 1e-8;
constexpr double kLimit7 = 60.0;
// Criterion 8
constexpr int kFanGrid = 50;
constexpr int kSampleGrid = 20;
constexpr double kFanLimitTol = 1e-4;
constexpr double kLimit8 = 120.0;
// Criterion 9
constexpr int kDualityPairs = 200;
constexpr double kDualitySlack = 1e-6;
constexpr int kAttainCases = 50;
constexpr int kAttainSamples = 64;
constexpr double kAttainFraction = 0.9;
constexpr double kLimit9 = 120.0;

constexpr double kHalfPi = std::numbers::pi / 2;

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void fail(const std::string& why) {
    if (ok) note << why;
    ok = false;
  }
};

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

double max_entry(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Largest coefficient entry left after merging a - b into canonical form.
double chain_difference(const StressedChain& a, const StressedChain& b) {
  const StressedChain d = canonicalize(a + scaled(b, -1.0), 0.0);
  double m = 0;
  for (const auto& t : d.terms) m = std::max(m, max_entry(t.first));
  return m;
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  const double a = -0.5, b = 1.5, c = 0.25, d = 2.0;
  const Mat D = unit(2, 0) * unit(2, 0).transpose();
  StressedChain S(2, 2);
  S.add(D, Simplex({v2(a, c), v2(b, c), v2(b, d)}));
  S.add(D, Simplex({v2(a, c), v2(b, d), v2(a, d)}));
  const StressedChain dS = boundary_stressed(S);
  if (dS.terms.size() != 4) o.fail("rectangle boundary does not have four edges");
  for (const auto& [C, s] : dS.terms)
    if (max_entry(C.cwiseAbs() - D) > kExampleTol) o.fail("rectangle edge coefficient differs from D_e1");
  const auto B = decompose_boundary(S);
  int horizontal = 0, vertical = 0;
  for (const auto& f : B.faces) {
    const Vec e = f.simplex.v[1] - f.simplex.v[0];
    const auto& p = f.parts;
    if (std::abs(e(1)) < kExampleTol) {
      ++horizontal;
      if (max_entry(p.normal_stress - D) > kExampleTol || max_entry(p.shear_stress) > kExampleTol ||
          max_entry(p.orthogonal_force_tensor) > kExampleTol || max_entry(p.parallel_force_tensor) > kExampleTol)
        o.fail("top/bottom edge is not pure normal stress");
    } else if (std::abs(e(0)) < kExampleTol) {
      ++vertical;
      if (max_entry(p.orthogonal_force_tensor - D) > kExampleTol || max_entry(p.normal_stress) > kExampleTol ||
          max_entry(p.shear_stress) > kExampleTol || max_entry(p.parallel_force_tensor) > kExampleTol)
        o.fail("left/right edge is not pure orthogonal force");
    }
  }
  if (horizontal != 2 || vertical != 2) o.fail("rectangle faces misclassified");

  // Lower triangle of the unit square; K runs from (0,1) to (1,0) and is face 0.
  const Simplex T({v2(0, 0), v2(1, 0), v2(0, 1)});
  const double r = 1 / std::sqrt(2.0);
  const Vec K = v2(r, -r), Kp = v2(r, r);
  // u (x) v is the map w -> <u, w> v, i.e. the matrix v u^T.
  auto tensor = [](const Vec& u, const Vec& v) -> Mat { return v * u.transpose(); };
  const auto p = decompose_face(D, T, 0);
  if (max_entry(p.normal_stress - 0.5 * tensor(K, K)) > kExampleTol) o.fail("normal stress differs");
  if (max_entry(p.shear_stress - 0.5 * tensor(K, Kp)) > kExampleTol) o.fail("shear stress differs");
  if (max_entry(p.orthogonal_force_tensor - 0.5 * tensor(Kp, Kp)) > kExampleTol) o.fail("orthogonal force differs");
  if (max_entry(p.parallel_force_tensor - 0.5 * tensor(Kp, K)) > kExampleTol) o.fail("parallel force differs");
  const Vec total = (p.orthogonal_force_tensor + p.parallel_force_tensor) * Kp * std::sqrt(2.0);
  if ((total - unit(2, 0)).cwiseAbs().maxCoeff() > kExampleTol) o.fail("diagonal total force is not e1");
  o.note << "four edges, four blocks, total force (" << total(0) << ", " << total(1) << ")";
}

PolyChain random_poly_chain(int n, int k, Rng& rng) {
  PolyChain c(n, k);
  const int terms = 1 + static_cast<int>(rng() % 3);
  for (int t = 0; t < terms; ++t) c.add(random_vec(1, rng)(0), testing::random_simplex(n, k, rng));
  return c;
}

void criterion2(Outcome& o) {
  Rng rng(2002);
  double worst_stokes = 0, worst_dd = 0;
  for (int t = 0; t < kChainCases; ++t) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % n);
    const PolyChain c = random_poly_chain(n, k, rng);
    if (k >= 2) {
      for (const auto& [coef, s] : canonicalize(boundary(boundary(c)), 0.0).terms)
        worst_dd = std::max(worst_dd, std::abs(coef));
    }
    const PolyForm w = random_form(n, k - 1, 1 + static_cast<int>(rng() % 3), rng);
    const PolyForm dw = exterior_derivative(w);
    const double lhs = integrate(boundary(c), w);
    double rhs = 0, scale = 0;
    for (const auto& [coef, s] : c.terms) {
      const double part = coef * integrate(s, dw);
      rhs += part;
      scale += std::abs(part);
    }
    // Relative to the sum of absolute term contributions, floored for all-zero cases.
    const double rel = std::abs(lhs - rhs) / std::max(scale, 1e-300);
    if (scale > 0) worst_stokes = std::max(worst_stokes, rel);
  }
  if (worst_dd > kBoundarySquaredTol) o.fail("boundary of boundary not cancelled");
  if (worst_stokes > kStokesRelTol) o.fail("Stokes mismatch");
  o.note << kChainCases << " cases, max dd coefficient " << worst_dd << ", max Stokes rel " << worst_stokes;
}

void criterion3(Outcome& o) {
  Rng rng(3003);
  double worst_density = 0, worst_norm = 0, worst_force = 0, worst_torque = 0;
  for (int t = 0; t < kBeamCases; ++t) {
    const int n = 2 + t % 4;
    const int k = 1 + static_cast<int>(rng() % n);
    const Simplex s = testing::random_simplex(n, k, rng);
    const BeamTerm b{testing::random_structural_tensor(s, rng), s};
    const ForceSystem F = beam_boundary(b);
    for (int i = 0; i <= k; ++i) {
      const Vec expect = b.tensor * testing::outward_normal(s, i);
      const double scale = std::max(expect.norm(), b.tensor.norm());
      worst_density = std::max(worst_density, (F.entries[static_cast<size_t>(i)].density - expect).norm() / scale);
      worst_density = std::max(worst_density, (beam_face_density_by_interior_product(b, i) - expect).norm() / scale);
      const double area = gram_volume(edge_vectors(face(s, i)));
      const double vol = gram_volume(edge_vectors(s));
      worst_norm = std::max(worst_norm, std::abs(zeta_contract_eta(s, i).norm() - area * vol) / (area * vol));
    }
    Vec net = Vec::Zero(n);
    Mat torque = Mat::Zero(n, n);
    for (const auto& e : F.entries) {
      const Vec f = e.density * carrier_measure(e.simplex);
      const Vec x = barycenter(e.simplex);
      net += f;
      torque += f * x.transpose() - x * f.transpose();
    }
    worst_force = std::max(worst_force, net.norm());
    worst_torque = std::max(worst_torque, max_entry(torque));
  }
  if (worst_density > kBeamRelTol) o.fail("beam density differs from A n");
  if (worst_norm > kBeamRelTol) o.fail("interior product norm differs from area * volume");
  if (worst_force > kBeamBalanceTol || worst_torque > kBeamBalanceTol) o.fail("beam boundary not balanced");
  o.note << kBeamCases << " beams, density rel " << worst_density << ", norm rel " << worst_norm << ", force "
         << worst_force << ", torque " << worst_torque;
}

void criterion4(Outcome& o) {
  Rng rng(4004);
  double worst_rec = 0, worst_block = 0, worst_idem = 0, worst_comp = 0;
  for (int t = 0; t < kDecompCases; ++t) {
    const int n = 2 + t % 4;
    const int k = 1 + static_cast<int>(rng() % n);
    const StressedChain P = testing::random_structural_chain(n, k, 1 + static_cast<int>(rng() % 3), rng);
    const auto B = decompose_boundary(P);
    worst_rec = std::max(worst_rec, chain_difference(B.S + B.F, boundary_stressed(P)));
    for (const auto& f : B.faces) {
      worst_block = std::max(worst_block, f.parts.block_residual);
      const auto& [A, sigma] = P.terms[static_cast<size_t>(f.term)];
      const FaceFrame fr = face_frame(sigma, f.face);
      const double area = k == 1 ? 1.0 : volume(f.simplex);
      const double scale = std::max(1.0, A.norm());
      const Mat stress = f.parts.normal_stress + f.parts.shear_stress;
      const Mat force = f.parts.orthogonal_force_tensor + f.parts.parallel_force_tensor;
      const auto again_s = split_in_frame(stress, fr.O, k, area);
      const auto again_f = split_in_frame(force, fr.O, k, area);
      worst_idem = std::max(worst_idem, max_entry(again_s.orthogonal_force_tensor + again_s.parallel_force_tensor) / scale);
      worst_idem = std::max(worst_idem, max_entry(again_f.normal_stress + again_f.shear_stress) / scale);
      worst_idem = std::max(worst_idem, max_entry(again_s.normal_stress + again_s.shear_stress - stress) / scale);
      const auto other = split_in_frame(A, face_frame(sigma, f.face, rng).O, k, area);
      worst_comp = std::max(worst_comp, max_entry(other.normal_stress + other.shear_stress - stress));
      worst_comp = std::max(worst_comp, max_entry(other.orthogonal_force_tensor + other.parallel_force_tensor - force));
    }
  }
  if (worst_rec > kRecombineTol) o.fail("S + F differs from the boundary");
  if (worst_block > kBlockTol) o.fail("rotated coefficient leaks outside its block");
  if (worst_idem > kIdempotenceTol) o.fail("re-decomposition is not idempotent");
  if (worst_comp > kCompletionTol) o.fail("parts depend on the frame completion");
  o.note << kDecompCases << " chains, recombination " << worst_rec << ", block " << worst_block << ", idempotence "
         << worst_idem << ", completion " << worst_comp;
}

void criterion5(Outcome& o) {
  const std::pair<int, int> pairs[] = {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
  int rejected = 0, verified = 0;
  for (auto [k, n] : pairs) {
    Rng rng(5000 + 10 * k + n);
    for (int t = 0; t < kExistenceCases; ++t) {
      BalanceOptions opt;
      opt.seed = rng();
      const ForceSystem F = testing::random_projected_forces(n, k, 2 + static_cast<int>(rng() % 3), rng);
      try {
        const auto beams = balance(F, opt);
        bool structural = true;
        for (const auto& b : beams) structural = structural && is_structural(b.tensor, b.simplex);
        if (!structural) o.fail("balance produced a non-structural beam");
        else if (!force_systems_equal(beam_boundary(beams, n, k), F, 4, opt.seed, kCurrentTol))
          o.fail("balance output does not reproduce F");
        else ++verified;
      } catch (const PreconditionError&) {
        ++rejected;
      } catch (const std::exception& e) {
        o.fail(std::string("balance raised ") + e.what());
      }
      const StressedChain Q =
          boundary_stressed(testing::random_structural_chain(n, k, 1 + static_cast<int>(rng() % 2), rng));
      try {
        const StressedChain P = solve_boundary(Q, opt);
        if (!is_structural(P)) o.fail("solve_boundary produced a non-structural chain");
        else if (!chains_equivalent(boundary_stressed(P), Q, 4, opt.seed, kCurrentTol))
          o.fail("solve_boundary output does not reproduce Q");
        else ++verified;
      } catch (const PreconditionError&) {
        ++rejected;
      } catch (const std::exception& e) {
        o.fail(std::string("solve_boundary raised ") + e.what());
      }
    }
  }
  o.note << verified << " verified, " << rejected << " precondition rejections";
}

void criterion6(Outcome& o) {
  const std::pair<int, int> shapes[] = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}};
  Rng rng(6006);
  double worst = 0;
  for (int t = 0; t < kConeCases; ++t) {
    const auto [n, g] = shapes[t % 5];
    const StressedChain R = testing::random_closed_structural_chain(n, g, testing::closed_chain_points(n, g), rng);
    const StressedChain P = cone_fill(R, rng);
    if (!is_structural(P)) o.fail("cone_fill output is not structural");
    worst = std::max(worst, chain_difference(boundary_stressed(P), R));
  }
  if (worst > kConeTol) o.fail("boundary of the cone differs from R");
  o.note << kConeCases << " closed chains, max canonical residual " << worst;
}

GroundStructure truss_fixture(int id, Rng& rng) {
  GroundStructure g;
  if (id == 0) {
    g.nodes = {v2(-1, 0), v2(1, 0), v2(0, 1)};
    g.edges = {{0, 2}, {1, 2}, {0, 1}};
    g.loads = {{2, v2(0, -1)}};
    g.support = {true, true, false};
    return g;
  }
  const int dim = 2 + id % 2;
  const int N = 4 + static_cast<int>(rng() % 2);
  for (int i = 0; i < N; ++i) g.nodes.push_back(random_vec(dim, rng));
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) all.emplace_back(i, j);
  std::shuffle(all.begin(), all.end(), rng);
  const int m = std::min<int>({kMaxEdges, 4 + static_cast<int>(rng() % 5), static_cast<int>(all.size())});
  g.edges.assign(all.begin(), all.begin() + m);
  g.support.assign(static_cast<size_t>(N), false);
  g.support[0] = true;
  if (id % 3 != 0) g.support[1] = true;
  // Loads that some member forces balance exactly, so every fixture is feasible.
  TrussSolution seed;
  for (int e = 0; e < m; ++e) seed.lambda.push_back(random_vec(1, rng)(0));
  for (const auto& [node, f] : truss_boundary(seed, g))
    if (!g.is_support(node)) g.loads.emplace_back(node, f);
  return g;
}

void criterion7(Outcome& o) {
  Rng rng(7007);
  double worst_mass = 0, worst_load = 0;
  for (int id = 0; id < kTrussFixtures; ++id) {
    const GroundStructure g = truss_fixture(id, rng);
    const TrussSolution lp = minimize_truss(g);
    const TrussSolution bf = brute_force_truss(g);
    worst_mass = std::max(worst_mass, std::abs(lp.mass - bf.mass) / std::max(1.0, bf.mass));
    for (const auto& [node, f] : truss_boundary(lp, g))
      if (!g.is_support(node)) worst_load = std::max(worst_load, (f - g.load_at(node)).norm());
  }
  if (worst_mass > kMassTol) o.fail("LP mass differs from the enumerated optimum");
  if (worst_load > kLoadTol) o.fail("LP forces do not reproduce the loads");
  o.note << kTrussFixtures << " fixtures, mass gap " << worst_mass << ", load residual " << worst_load;
}

void criterion8(Outcome& o) {
  const double h = kHalfPi / kFanGrid;
  int cells = 0;
  double min_margin = 1e300, max_fprime = -1e300, max_limit = 0;
  auto cell = [&](FanCase c, double a, double b) {
    ++cells;
    const auto r = check_inequality(c, a, b);
    min_margin = std::min(min_margin, r.margin);
    if (!r.holds) o.fail("inequality fails at a grid cell");
    if (c == FanCase::FourSpringAcute) return;
    const auto d = fprime_at_zero(a, b, c);
    max_fprime = std::max(max_fprime, d.value);
    if (!(d.value < 0)) o.fail("derivative at zero is not negative");
    if ((d.value < 0) != (r.margin > 0)) o.fail("derivative sign disagrees with the margin");
    const auto l = limit_at_zero(a, b, c);
    max_limit = std::max(max_limit, std::abs(l.value));
    if (std::abs(l.value) > kFanLimitTol) o.fail("fan does not degenerate as x -> 0");
  };
  for (int i = 0; i < kFanGrid; ++i)
    for (int j = 0; j < kFanGrid; ++j) cell(FanCase::Case1, (i + 0.5) * h, (j + 0.5) * h);
  for (int j = 0; j < kFanGrid; ++j) cell(FanCase::Case2, kHalfPi, (j + 0.5) * h);
  for (int i = 0; i < kFanGrid; ++i)
    for (int j = 0; i + j + 1 < kFanGrid; ++j) cell(FanCase::Case3, (i + 0.5) * h, (j + 0.5) * h);
  for (int j = 0; j < kFanGrid; ++j) cell(FanCase::FourSpringAcute, 0, (j + 0.5) * h);

  const double hs = kHalfPi / kSampleGrid;
  int sampled = 0;
  double max_f = -1e300;
  for (int i = 0; i < kSampleGrid; ++i)
    for (int j = 0; j < kSampleGrid; ++j) {
      const double a = (i + 0.5) * hs, b = (j + 0.5) * hs;
      if (a + b >= kHalfPi) continue;
      ++sampled;
      const double f = fan_difference(a, b, sample_x(a, b), FanCase::Case1);
      max_f = std::max(max_f, f);
      if (!(f < 0)) o.fail("f(sample_x) is not negative");
    }
  o.note << cells << " cells, min margin " << min_margin << ", max f'(0) " << max_fprime << ", max |f(0+)| "
         << max_limit << "; " << sampled << " sample points, max f " << max_f;
}

std::vector<Vec> vertices_of(const StressedChain& T) {
  std::vector<Vec> pts;
  for (const auto& [A, s] : T.terms) pts.insert(pts.end(), s.v.begin(), s.v.end());
  return pts;
}

VectorForm scaled_form(const VectorForm& w, double s) {
  VectorForm r = w;
  for (auto& c : r.comp) c = c * s;
  return r;
}

void criterion9(Outcome& o) {
  Rng rng(9009);
  double worst_ratio = 0;
  for (int t = 0; t < kDualityPairs; ++t) {
    const int n = 2 + t % 3;
    const int k = 1 + static_cast<int>(rng() % n);
    const StressedChain T = testing::random_structural_chain(n, k, 1 + static_cast<int>(rng() % 3), rng);
    // Affine forms: the pointwise comass is convex along each simplex, so sampling the
    // vertices gives the supremum over the support of T.
    const VectorForm W = random_vector_form(n, k, 1, rng);
    const double m = comass_form_estimate(W, vertices_of(T));
    const double ratio = evaluate_current(T, W).norm() / (mass_operator(T) * m);
    worst_ratio = std::max(worst_ratio, ratio);
  }
  if (worst_ratio > 1 + kDualitySlack) o.fail("current exceeds operator mass times comass");

  double worst_attain = 1e300;
  for (int t = 0; t < kAttainCases; ++t) {
    const int n = 2 + t % 3;
    const int k = 1 + static_cast<int>(rng() % n);
    const Simplex s = testing::random_simplex(n, k, rng);
    const Vec u = (tangent_basis(s) * random_vec(k, rng)).normalized();
    const double mu = random_vec(1, rng)(0);
    StressedChain T(n, k);
    T.add(mu * u * u.transpose(), s);
    // Constant optimiser: u_j times the unit covector dual to the simplex orientation.
    const MultiVector zeta = wedge_all(edge_vectors(s), n);
    MultiCovector phi(n, k);
    for (size_t i = 0; i < phi.c.size(); ++i) phi.c[i] = zeta.c[i] / zeta.norm();
    VectorForm best;
    for (int j = 0; j < n; ++j) best.comp.push_back(PolyForm::constant(n, k, phi.c) * u(j));
    double sup = 0;
    for (int q = 0; q < kAttainSamples; ++q) {
      VectorForm W = best;
      if (q > 0) {
        const VectorForm noise = random_vector_form(n, k, 1, rng);
        const double eps = 0.5 * q / kAttainSamples;
        for (int j = 0; j < n; ++j) W.comp[static_cast<size_t>(j)] = W.comp[static_cast<size_t>(j)] + noise.comp[static_cast<size_t>(j)] * eps;
      }
      const double m = comass_form_estimate(W, s.v);
      sup = std::max(sup, evaluate_current(T, scaled_form(W, 1 / m)).norm());
    }
    worst_attain = std::min(worst_attain, sup / mass_operator(T));
  }
  if (worst_attain < kAttainFraction) o.fail("sampled supremum stays below the operator mass");
  o.note << kDualityPairs << " pairs, max ratio " << worst_ratio << "; " << kAttainCases
         << " rank-1 simplices, min sup/mass " << worst_attain;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments restrict the run to the listed criterion numbers.
  std::vector<int> only;
  for (int a = 1; a < argc; ++a) only.push_back(std::atoi(argv[a]));
  struct Item {
    int id;
    double limit;
    std::function<void(Outcome&)> run;
  };
  const Item items[] = {{1, kLimit1, criterion1}, {2, kLimit2, criterion2}, {3, kLimit3, criterion3},
                        {4, kLimit4, criterion4}, {5, kLimit5, criterion5}, {6, kLimit6, criterion6},
                        {7, kLimit7, criterion7}, {8, kLimit8, criterion8}, {9, kLimit9, criterion9}};
  int failures = 0;
  for (const auto& item : items) {
    if (!only.empty() && std::find(only.begin(), only.end(), item.id) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      item.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > item.limit) o.fail("runtime limit exceeded");
    failures += !o.ok;
    std::printf("%s criterion %d (%.2fs, limit %.0fs): %s\n", o.ok ? "PASS" : "FAIL", item.id, secs, item.limit,
                o.note.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
