#include "sc/balance.hpp"

#include <cmath>
#include <sstream>

namespace sc {

// ---------------------------------------------------------------------------
// Force systems

double carrier_measure(const Simplex& s) { return s.k() == 0 ? 1.0 : volume(s); }

ForceSystem operator+(const ForceSystem& a, const ForceSystem& b) {
  ForceSystem r = a;
  if (r.entries.empty()) {
    r.dim = b.dim;
    r.grade = b.grade;
  }
  r.entries.insert(r.entries.end(), b.entries.begin(), b.entries.end());
  return r;
}

ForceSystem scaled(const ForceSystem& a, double s) {
  ForceSystem r = a;
  for (auto& e : r.entries) e.density *= s;
  return r;
}

namespace {

struct Box {
  Vec mid;
  double rad = 1.0;
};

Box box_of(int n, const std::vector<const Simplex*>& simplices, const std::vector<Vec>& extra = {}) {
  Vec lo = Vec::Constant(n, 1e300), hi = Vec::Constant(n, -1e300);
  bool any = false;
  auto take = [&](const Vec& x) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
    any = true;
  };
  for (const auto* s : simplices)
    for (const auto& x : s->v) take(x);
  for (const auto& x : extra) take(x);
  Box b;
  if (!any) {
    b.mid = Vec::Zero(n);
    b.rad = 1.0;
    return b;
  }
  b.mid = 0.5 * (lo + hi);
  b.rad = std::max(0.5 * (hi - lo).maxCoeff(), 1e-9);
  return b;
}

Box box_of(const ForceSystem& F, const std::vector<Vec>& extra = {}) {
  std::vector<const Simplex*> ss;
  for (const auto& e : F.entries) ss.push_back(&e.simplex);
  return box_of(F.dim, ss, extra);
}

Vec generic_point(const Box& b, Rng& rng) {
  return b.mid + random_vec(static_cast<int>(b.mid.size()), rng, 2.0 * b.rad);
}

Mat skew(const Vec& a, const Vec& b) { return a * b.transpose() - b * a.transpose(); }

// Relative residual of the area-weighted equilibrium conditions.
double weighted_residual(const ForceSystem& F) {
  const int n = F.dim;
  if (F.entries.empty()) return 0.0;
  Vec c0 = Vec::Zero(n);
  for (const auto& e : F.entries) c0 += barycenter(e.simplex);
  c0 /= static_cast<double>(F.entries.size());
  Vec net = Vec::Zero(n);
  Mat tor = Mat::Zero(n, n);
  double scale = 0;
  for (const auto& e : F.entries) {
    const Vec T = e.density * carrier_measure(e.simplex);
    const Vec r = barycenter(e.simplex) - c0;
    net += T;
    tor += skew(T, r);
    scale += T.norm() * (1.0 + r.norm());
  }
  if (scale == 0.0) return 0.0;
  return std::max(net.norm(), tor.cwiseAbs().maxCoeff()) / scale;
}

ForceSystem drop_zero(const ForceSystem& F, double rel = 1e-14) {
  double top = 0;
  for (const auto& e : F.entries) top = std::max(top, e.density.norm() * carrier_measure(e.simplex));
  ForceSystem out(F.dim, F.grade);
  for (const auto& e : F.entries)
    if (e.density.norm() * carrier_measure(e.simplex) > rel * top) out.entries.push_back(e);
  return out;
}

void verify_stage(const ForceSystem& target, const ForceSystem& produced, const char* stage) {
  if (!force_systems_equal(target, produced, 3, 99, 1e-7))
    throw VerificationError(std::string("stage self-check failed: ") + stage);
}

bool near_any(const Simplex& s, const std::vector<Vec>& pts, double tol) {
  for (const auto& p : pts)
    if (affine_distance(s, p) <= tol) return true;
  return false;
}

}  // namespace

EquilibriumReport equilibrium_check(const ForceSystem& F, Convention c, double tol) {
  const int n = F.dim;
  EquilibriumReport r;
  r.convention = c;
  r.net_force = Vec::Zero(n);
  r.weighted_force = Vec::Zero(n);
  r.net_torque = MultiVector(n, 2);
  r.weighted_torque = MultiVector(n, 2);
  double lit_scale = 0, w_scale = 0;
  for (const auto& e : F.entries) {
    const Vec b = barycenter(e.simplex);
    const double m = carrier_measure(e.simplex);
    r.net_force += e.density;
    r.weighted_force += m * e.density;
    if (n >= 2) {
      const MultiVector t = wedge(as_multivector(e.density), as_multivector(b));
      r.net_torque = r.net_torque + t;
      r.weighted_torque = r.weighted_torque + t * m;
    }
    lit_scale += e.density.norm() * (1.0 + b.norm());
    w_scale += m * e.density.norm() * (1.0 + b.norm());
  }
  auto ok = [&](const Vec& f, const MultiVector& t, double scale) {
    const double res = std::max(f.norm(), t.norm());
    return res <= tol * scale;
  };
  r.literal_ok = ok(r.net_force, r.net_torque, lit_scale);
  r.weighted_ok = ok(r.weighted_force, r.weighted_torque, w_scale);
  r.is_equilibrium = (c == Convention::Literal) ? r.literal_ok : r.weighted_ok;
  return r;
}

// ---------------------------------------------------------------------------
// Beams

ForceSystem beam_boundary(const BeamTerm& b) {
  const int k = b.simplex.k();
  if (k < 1) throw PreconditionError("beam_boundary: simplex must have grade >= 1");
  if (!is_structural(b.tensor, b.simplex))
    throw PreconditionError("beam_boundary: tensor is not structural for its simplex");
  ForceSystem out(b.simplex.dim(), k - 1);
  for (int i = 0; i <= k; ++i) {
    const FaceFrame fr = face_frame(b.simplex, i);
    out.add(b.tensor * fr.normal, face(b.simplex, i));
  }
  return out;
}

ForceSystem beam_boundary(const std::vector<BeamTerm>& beams, int n, int k) {
  ForceSystem out(n, k - 1);
  for (const auto& b : beams) {
    auto part = beam_boundary(b);
    out.entries.insert(out.entries.end(), std::make_move_iterator(part.entries.begin()),
                       std::make_move_iterator(part.entries.end()));
  }
  return out;
}

Vec zeta_contract_eta(const Simplex& s, int i) {
  const int n = s.dim(), k = s.k();
  const auto e = edge_vectors(s);
  const MultiVector zeta = wedge_all(e, n);
  std::vector<Vec> eta;
  if (i > 0) {
    for (int j = 1; j <= k; ++j)
      if (j != i) eta.push_back(e[static_cast<size_t>(j - 1)]);
  } else {
    for (int j = 2; j <= k; ++j) eta.push_back(s.v[static_cast<size_t>(j)] - s.v[1]);
  }
  return interior_left(zeta, wedge_duals(eta, n));
}

Vec beam_face_density_by_interior_product(const BeamTerm& b, int i) {
  const Simplex& s = b.simplex;
  const int k = s.k();
  std::vector<Vec> face_edges;
  if (i > 0) {
    for (int j = 1; j <= k; ++j)
      if (j != i) face_edges.push_back(s.v[static_cast<size_t>(j)] - s.v[0]);
  } else {
    for (int j = 2; j <= k; ++j) face_edges.push_back(s.v[static_cast<size_t>(j)] - s.v[1]);
  }
  const double vol = gram_volume(edge_vectors(s));
  const double area = gram_volume(face_edges);
  // zeta _| d eta_i is outward exactly when (-1)^(i+k+1) = 1.
  const double sign = ((i + k + 1) % 2) ? -1.0 : 1.0;
  return sign * (b.tensor * zeta_contract_eta(s, i)) / (vol * area);
}

// ---------------------------------------------------------------------------
// Springs

std::vector<BeamTerm> SpringSystem::beams(double drop) const {
  std::vector<BeamTerm> out;
  const int m = static_cast<int>(points.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double l = lambda(i, j);
      if (std::abs(l) <= drop || l == 0.0) continue;
      const Vec u = (points[static_cast<size_t>(j)] - points[static_cast<size_t>(i)]).normalized();
      out.push_back({-l * u * u.transpose(), Simplex({points[static_cast<size_t>(i)],
                                                     points[static_cast<size_t>(j)]})});
    }
  return out;
}

SpringSystem spring_decompose(const std::vector<PointForce>& pointed, Rng& rng,
                              const std::vector<Vec>& forbidden) {
  SpringSystem sys;
  if (pointed.empty()) return sys;
  const int n = static_cast<int>(pointed[0].point.size());
  std::vector<Vec> forces;
  for (const auto& pf : pointed) {
    bool merged = false;
    for (size_t i = 0; i < sys.points.size(); ++i)
      if (same_point(sys.points[i], pf.point, 1e-12)) {
        forces[i] += pf.force;
        merged = true;
        break;
      }
    if (!merged) {
      sys.points.push_back(pf.point);
      forces.push_back(pf.force);
    }
  }
  {
    ForceSystem F(n, 0);
    for (size_t i = 0; i < forces.size(); ++i) F.add(forces[i], Simplex({sys.points[i]}));
    if (weighted_residual(F) > 1e-8)
      throw PreconditionError("spring_decompose: point forces are not in equilibrium");
  }
  double fscale = 0;
  for (const auto& f : forces) fscale += f.norm();
  const int m0 = static_cast<int>(sys.points.size());
  if (fscale == 0.0) {
    sys.lambda = Mat::Zero(m0, m0);
    return sys;
  }
  std::vector<const Simplex*> none;
  const Box box = box_of(n, none, sys.points);
  // Few points: the complete graph on the points themselves, if it balances exactly.
  if (m0 <= 2 * (n + 1)) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < m0; ++a)
      for (int b = a + 1; b < m0; ++b)
        if (!near_any(Simplex({sys.points[static_cast<size_t>(a)], sys.points[static_cast<size_t>(b)]}),
                      forbidden, 1e-7 * box.rad))
          edges.emplace_back(a, b);
    Mat M = Mat::Zero(n * m0, static_cast<int>(edges.size()));
    Vec rhs(n * m0);
    for (int a = 0; a < m0; ++a) rhs.segment(n * a, n) = forces[static_cast<size_t>(a)];
    for (size_t e = 0; e < edges.size(); ++e) {
      const auto [a, b] = edges[e];
      const Vec u = (sys.points[static_cast<size_t>(b)] - sys.points[static_cast<size_t>(a)]).normalized();
      M.block(n * a, static_cast<int>(e), n, 1) = u;
      M.block(n * b, static_cast<int>(e), n, 1) = -u;
    }
    if (!edges.empty()) {
      const Vec mu = M.completeOrthogonalDecomposition().solve(rhs);
      if ((M * mu - rhs).norm() <= 1e-10 * fscale) {
        sys.lambda = Mat::Zero(m0, m0);
        for (size_t e = 0; e < edges.size(); ++e) {
          const auto [a, b] = edges[e];
          sys.lambda(a, b) = sys.lambda(b, a) = mu(static_cast<int>(e));
        }
        return sys;
      }
    }
  }
  // Otherwise every loaded point is tied to n of n + 1 generic anchors; the anchors form
  // an isostatic simplex that absorbs what the ties deliver.
  std::string why = "spring_decompose: no generic anchors";
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<Vec> anchors;
    for (int a = 0; a <= n; ++a) anchors.push_back(generic_point(box, rng));
    if (is_degenerate(Simplex(anchors), 1e-3)) continue;
    bool spread = true;
    for (const auto& A : anchors) {
      for (const auto& q : sys.points) spread = spread && (A - q).norm() > 1e-3 * box.rad;
      for (const auto& q : forbidden) spread = spread && (A - q).norm() > 1e-3 * box.rad;
    }
    if (!spread) continue;
    const int m = m0 + n + 1;
    Mat lam = Mat::Zero(m, m);
    std::vector<Vec> anchor_load(static_cast<size_t>(n + 1), Vec::Zero(n));
    bool ok = true;
    auto usable = [&](const Vec& p, const Vec& q) {
      return !near_any(Simplex({p, q}), forbidden, 1e-7 * box.rad);
    };
    for (int i = 0; i < m0 && ok; ++i) {
      const Vec& f = forces[static_cast<size_t>(i)];
      if (f.norm() == 0.0) continue;
      const Vec& p = sys.points[static_cast<size_t>(i)];
      // Drop the anchor that leaves the best-conditioned direction set.
      int best_skip = -1;
      double best_cond = 0;
      Mat bestU;
      for (int skip = 0; skip <= n; ++skip) {
        Mat U(n, n);
        bool fine = true;
        for (int a = 0, c = 0; a <= n; ++a) {
          if (a == skip) continue;
          fine = fine && usable(p, anchors[static_cast<size_t>(a)]);
          U.col(c++) = (anchors[static_cast<size_t>(a)] - p).normalized();
        }
        if (!fine) continue;
        Eigen::JacobiSVD<Mat> svd(U);
        const double cond = svd.singularValues()(n - 1) / svd.singularValues()(0);
        if (cond > best_cond) {
          best_cond = cond;
          best_skip = skip;
          bestU = U;
        }
      }
      if (best_skip < 0 || best_cond < 1e-6) {
        ok = false;
        break;
      }
      const Vec t = bestU.fullPivLu().solve(f);
      for (int a = 0, c = 0; a <= n; ++a) {
        if (a == best_skip) continue;
        lam(i, m0 + a) = lam(m0 + a, i) = t(c);
        anchor_load[static_cast<size_t>(a)] -= t(c) * bestU.col(c);
        ++c;
      }
    }
    if (!ok) {
      why = "spring_decompose: ill-conditioned anchor directions";
      continue;
    }
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b) edges.emplace_back(a, b);
    Mat M = Mat::Zero(n * (n + 1), static_cast<int>(edges.size()));
    Vec rhs(n * (n + 1));
    for (int a = 0; a <= n; ++a) rhs.segment(n * a, n) = -anchor_load[static_cast<size_t>(a)];
    bool edges_ok = true;
    for (size_t e = 0; e < edges.size(); ++e) {
      const auto [a, b] = edges[e];
      edges_ok = edges_ok && usable(anchors[static_cast<size_t>(a)], anchors[static_cast<size_t>(b)]);
      const Vec u = (anchors[static_cast<size_t>(b)] - anchors[static_cast<size_t>(a)]).normalized();
      M.block(n * a, static_cast<int>(e), n, 1) = u;
      M.block(n * b, static_cast<int>(e), n, 1) = -u;
    }
    if (!edges_ok) {
      why = "spring_decompose: anchor edge meets a forbidden point";
      continue;
    }
    // The anchors must end up balanced: their springs supply minus what the ties deliver.
    const Vec mu = M.completeOrthogonalDecomposition().solve(rhs);
    const double res = (M * mu - rhs).norm() / fscale;
    if (res > 1e-10) {
      std::ostringstream msg;
      msg << "spring_decompose: anchor network residual " << res;
      why = msg.str();
      continue;
    }
    for (size_t e = 0; e < edges.size(); ++e) {
      const int a = m0 + edges[e].first, b = m0 + edges[e].second;
      lam(a, b) = lam(b, a) = mu(static_cast<int>(e));
    }
    sys.points.insert(sys.points.end(), anchors.begin(), anchors.end());
    sys.lambda = lam;
    return sys;
  }
  throw DegenerateChoice(why);
}

// ---------------------------------------------------------------------------
// Pushes

namespace {

// Sweeps `base` to `top` (matching vertices) with tensor mu w w^T, mu chosen so the base
// carries density `d` (which must be parallel to w). Returns beams and the top entry.
std::pair<std::vector<BeamTerm>, ForceEntry> sweep_push(const Vec& d, const Simplex& base,
                                                        const Simplex& top, const Vec& w) {
  const int n = base.dim();
  const PolyChain region = sweep(base, top);
  if (region.terms.empty()) throw DegenerateChoice("push: empty sweep region");
  // Reference orientation of the swept k-plane.
  auto e = edge_vectors(base);
  e.push_back(w);
  Mat Bv(n, static_cast<int>(e.size()));
  for (size_t j = 0; j < e.size(); ++j) Bv.col(static_cast<int>(j)) = e[j];
  const Mat plane = Eigen::HouseholderQR<Mat>(Bv).householderQ() * Mat::Identity(n, Bv.cols());
  const Mat unitB = w * w.transpose();
  std::vector<BeamTerm> beams;
  for (const auto& [c, s] : region.terms) {
    const auto se = edge_vectors(s);
    Mat Es(n, static_cast<int>(se.size()));
    for (size_t j = 0; j < se.size(); ++j) Es.col(static_cast<int>(j)) = se[j];
    const double det = (plane.transpose() * Es).determinant();
    if (det == 0.0) continue;
    beams.push_back({c * (det > 0 ? 1.0 : -1.0) * unitB, s});
  }
  // Read off the densities the unit-tensor region puts on base and top.
  auto same_set = [](const Simplex& a, const Simplex& b) {
    if (a.v.size() != b.v.size()) return false;
    for (const auto& x : a.v) {
      bool found = false;
      for (const auto& y : b.v) found = found || same_point(x, y, 1e-12);
      if (!found) return false;
    }
    return true;
  };
  Vec dbase = Vec::Zero(n), dtop = Vec::Zero(n);
  bool got_base = false, got_top = false;
  for (const auto& b : beams)
    for (int i = 0; i <= b.simplex.k(); ++i) {
      const Simplex f = face(b.simplex, i);
      const bool fb = same_set(f, base), ft = same_set(f, top);
      if (!fb && !ft) continue;
      const Vec dens = b.tensor * face_frame(b.simplex, i).normal;
      if (fb) {
        dbase += dens;
        got_base = true;
      }
      if (ft) {
        dtop += dens;
        got_top = true;
      }
    }
  if (!got_base || !got_top) throw DegenerateChoice("push: base or top face not found in sweep");
  const double kappa = dbase.dot(w);
  if (std::abs(kappa) < 1e-12) throw DegenerateChoice("push: direction tangent to the simplex");
  const double mu = d.dot(w) / kappa;
  for (auto& b : beams) b.tensor *= mu;
  return {beams, ForceEntry{-mu * dtop, top}};
}

}  // namespace

std::pair<std::vector<BeamTerm>, ForceEntry> push_to_hyperplane(const ForceEntry& e,
                                                               const Vec& origin,
                                                               const Vec& normal) {
  const double dn = e.density.norm();
  if (dn == 0.0) throw PreconditionError("push: zero force");
  const Vec v = e.density / dn;
  const double vn = v.dot(normal);
  if (std::abs(vn) < 1e-9) throw DegenerateChoice("push: force parallel to the hyperplane");
  Simplex top = e.simplex;
  for (auto& x : top.v) x -= (normal.dot(x - origin) / vn) * v;
  return sweep_push(e.density, e.simplex, top, v);
}

std::pair<std::vector<BeamTerm>, ForceEntry> push_by_translation(const ForceEntry& e,
                                                                const Vec& offset) {
  const double on = offset.norm();
  if (on == 0.0) throw PreconditionError("push: zero offset");
  const Vec w = offset / on;
  if ((e.density - e.density.dot(w) * w).norm() > 1e-9 * std::max(1.0, e.density.norm()))
    throw PreconditionError("push_by_translation: force must be parallel to the offset");
  Simplex top = e.simplex;
  for (auto& x : top.v) x += offset;
  return sweep_push(e.density, e.simplex, top, w);
}

// ---------------------------------------------------------------------------
// Radial lemma

double radial_lift_factor(int k, double h) {
  return std::pow(static_cast<double>(k - 1) / k, k - 2) * (k - 1) / h;
}

std::vector<BeamTerm> balance_radial(const ForceSystem& F0, const Vec& O, Rng& rng,
                                     const std::vector<Vec>& forbidden) {
  const ForceSystem F = drop_zero(F0);
  const int n = F0.dim, k = F0.grade + 1;
  if (F.entries.empty()) return {};
  if (weighted_residual(F) > 1e-8)
    throw PreconditionError("balance_radial: force system is not in equilibrium");
  if (k == 1) return {};  // all forces sit at O and cancel
  const double r = static_cast<double>(k - 1) / k;
  ForceSystem Ft(n, k - 2);
  for (const auto& e : F.entries) {
    std::vector<Vec> far;
    bool has_apex = false;
    for (const auto& x : e.simplex.v) {
      if (!has_apex && same_point(x, O, 1e-12)) {
        has_apex = true;
        continue;
      }
      far.push_back(O + r * (x - O));
    }
    if (!has_apex) throw PreconditionError("balance_radial: simplex does not contain the apex");
    const Simplex t(far);
    const Vec total = e.density * carrier_measure(e.simplex);
    Ft.add(total / carrier_measure(t), t);
  }
  auto fb = forbidden;
  fb.push_back(O);
  const auto inner = balance_once(Ft, rng, fb);
  const Box box = box_of(F);
  std::vector<BeamTerm> out;
  const double s = static_cast<double>(k) / (k - 1);
  for (const auto& b : inner) {
    std::vector<Vec> v{O};
    for (const auto& x : b.simplex.v) v.push_back(O + s * (x - O));
    Simplex cone_s(v);
    const Simplex extended(std::vector<Vec>(v.begin() + 1, v.end()));
    const double h = affine_distance(extended, O);
    if (h <= 1e-7 * box.rad) throw DegenerateChoice("balance_radial: apex in an inner beam's plane");
    out.push_back({radial_lift_factor(k, h) * b.tensor, cone_s});
  }
  verify_stage(F, beam_boundary(out, n, k), "radial lift");
  return out;
}

// ---------------------------------------------------------------------------
// Dimension reduction

namespace {

Mat random_rotation(int n, Rng& rng) {
  Mat M(n, n);
  for (int j = 0; j < n; ++j) M.col(j) = random_vec(n, rng);
  Eigen::HouseholderQR<Mat> qr(M);
  Mat Q = qr.householderQ();
  return Q;
}

// Pushes an entry onto the hyperplane, splitting the force into two generic parts when it
// is nearly tangent to the simplex or nearly parallel to the hyperplane.
void push_or_split(const ForceEntry& e, const Vec& origin, const Vec& normal, Rng& rng, int depth,
                   std::vector<BeamTerm>& beams, std::vector<ForceEntry>& landed) {
  const double dn = e.density.norm();
  if (dn == 0.0) return;
  const Vec v = e.density / dn;
  const Mat T = tangent_basis(e.simplex);
  const double off_tangent = (v - T * (T.transpose() * v)).norm();
  const double vertical = std::abs(v.dot(normal));
  if (off_tangent > 1e-3 && vertical > 1e-3) {
    auto [b, top] = push_to_hyperplane(e, origin, normal);
    beams.insert(beams.end(), b.begin(), b.end());
    landed.push_back(top);
    return;
  }
  if (depth > 6) throw DegenerateChoice("push: could not find a generic force split");
  const Vec g = random_vec(e.density.size(), rng, dn);
  push_or_split({0.5 * e.density + g, e.simplex}, origin, normal, rng, depth + 1, beams, landed);
  push_or_split({0.5 * e.density - g, e.simplex}, origin, normal, rng, depth + 1, beams, landed);
}

}  // namespace

Reduction reduce_dimension(const ForceSystem& F0, Rng& rng, const std::vector<Vec>& forbidden) {
  const ForceSystem F = drop_zero(F0);
  const int n = F0.dim, k = F0.grade + 1;
  if (n < k + 2) throw PreconditionError("reduce_dimension: requires n >= k + 2");
  if (weighted_residual(F) > 1e-8)
    throw PreconditionError("reduce_dimension: force system is not in equilibrium");
  Reduction red;
  red.Fh = ForceSystem(n, k - 1);
  red.frame = random_rotation(n, rng);
  const Box box = box_of(F);
  red.origin = box.mid + random_vec(n, rng, 0.5 * box.rad);
  if (F.entries.empty()) return red;
  const Vec normal = red.frame.col(n - 1);
  const double L = box.rad;
  const Vec apex = red.origin + L * normal;

  // Bring every simplex down to the hyperplane along its own force.
  std::vector<ForceEntry> landed;
  for (const auto& e : F.entries) {
    double hmax = 0;
    for (const auto& x : e.simplex.v) hmax = std::max(hmax, std::abs(normal.dot(x - red.origin)));
    if (hmax <= 1e-12 * box.rad) {
      landed.push_back(e);
    } else {
      push_or_split(e, red.origin, normal, rng, 0, red.beams, landed);
    }
  }

  // Split into horizontal and vertical parts; vertical parts are redirected to the apex.
  double dscale = 0;
  for (const auto& e : landed) dscale = std::max(dscale, e.density.norm());
  ForceSystem radial(n, k - 1);
  for (const auto& e : landed) {
    const double phi = e.density.dot(normal);
    const Vec sh = barycenter(e.simplex);
    Vec horiz = e.density - phi * normal;
    if (std::abs(phi) > 1e-12 * dscale) {
      horiz += (phi / L) * (sh - red.origin);
      const ForceEntry vert{(phi / L) * (apex - sh), e.simplex};
      auto [b, moved] = push_by_translation(vert, apex - sh);
      red.beams.insert(red.beams.end(), b.begin(), b.end());
      if (k == 1) {
        radial.add(moved.density, Simplex({apex}));
      } else {
        for (int j = 0; j < static_cast<int>(moved.simplex.v.size()); ++j) {
          std::vector<Vec> v{apex};
          for (int q = 0; q < static_cast<int>(moved.simplex.v.size()); ++q)
            if (q != j) v.push_back(moved.simplex.v[static_cast<size_t>(q)]);
          radial.add(moved.density, Simplex(v));
        }
      }
    }
    if (horiz.norm() > 1e-14 * dscale) red.Fh.add(horiz, e.simplex);
  }
  auto fb = forbidden;
  const auto rb = balance_radial(radial, apex, rng, fb);
  red.beams.insert(red.beams.end(), rb.begin(), rb.end());
  verify_stage(F, beam_boundary(red.beams, n, k) + red.Fh, "dimension reduction");
  return red;
}

// ---------------------------------------------------------------------------
// Balancing

namespace {

std::vector<BeamTerm> balance_two_centres(const ForceSystem& F, Rng& rng,
                                          const std::vector<Vec>& forbidden) {
  const int n = F.dim, k = F.grade + 1;
  const Box box = box_of(F);
  Vec O1, O2;
  for (int tries = 0;; ++tries) {
    if (tries > 100) throw DegenerateChoice("two-centre split: no generic centres");
    O1 = generic_point(box, rng);
    O2 = generic_point(box, rng);
    bool ok = (O1 - O2).norm() > 1e-2 * box.rad;
    for (const auto& e : F.entries) {
      if (!ok) break;
      ok = affine_distance(e.simplex, O1) > 1e-3 * box.rad && affine_distance(e.simplex, O2) > 1e-3 * box.rad;
    }
    if (ok) break;
  }

  struct Item {
    Simplex s;
    Mat T;
    Vec g1, g2;
    double area;
  };
  std::vector<Item> items;
  for (const auto& e : F.entries) {
    Item it{e.simplex, tangent_basis(e.simplex), Vec(), Vec(), carrier_measure(e.simplex)};
    if (it.T.cols() != k - 1) throw DegenerateChoice("two-centre split: degenerate simplex");
    const Vec sh = barycenter(e.simplex);
    Mat M(n, n);
    M << it.T, O1 - sh, O2 - sh;
    Eigen::JacobiSVD<Mat> svd(M);
    const auto& sv = svd.singularValues();
    if (sv(n - 1) < 1e-8 * sv(0)) throw DegenerateChoice("two-centre split: centres not generic");
    const Vec x = M.fullPivLu().solve(e.density);
    it.g1 = it.T * x.head(k - 1) + x(k - 1) * (O1 - sh);
    it.g2 = x(k) * (O2 - sh);
    items.push_back(it);
  }

  // Equilibrium of the first group is reached by shifting tangential force between the
  // groups, using extra zero-net simplices where the original ones offer too little room.
  const int neq = n + n * (n - 1) / 2;
  const int need = (neq + k - 2) / (k - 1) + 1;
  for (int a = 0; a < need; ++a) {
    for (int tries = 0;; ++tries) {
      if (tries > 100) throw DegenerateChoice("two-centre split: no auxiliary simplex");
      std::vector<Vec> v;
      const Vec base = generic_point(box, rng);
      v.push_back(base);
      for (int j = 1; j < k; ++j) v.push_back(base + random_vec(n, rng, box.rad));
      Simplex s(v);
      if (is_degenerate(s, 1e-6) || affine_distance(s, O1) < 1e-3 * box.rad ||
          affine_distance(s, O2) < 1e-3 * box.rad)
        continue;
      items.push_back({s, tangent_basis(s), Vec::Zero(n), Vec::Zero(n), carrier_measure(s)});
      break;
    }
  }
  Vec c0 = Vec::Zero(n);
  for (const auto& it : items) c0 += barycenter(it.s);
  c0 /= static_cast<double>(items.size());
  const auto& pairs = subsets(n, 2);
  const int nun = static_cast<int>(items.size()) * (k - 1);
  Mat A = Mat::Zero(neq, nun);
  Vec rhs = Vec::Zero(neq);
  double scale = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const Vec r = barycenter(it.s) - c0;
    const Vec T0 = it.area * it.g1;
    scale += it.area * (it.g1.norm() + it.g2.norm()) * (1.0 + r.norm());
    const Mat S0 = skew(T0, r);
    rhs.head(n) -= T0;
    for (size_t p = 0; p < pairs.size(); ++p) rhs(n + static_cast<int>(p)) -= S0(pairs[p][0], pairs[p][1]);
    for (int j = 0; j < k - 1; ++j) {
      const Vec t = it.area * it.T.col(j);
      const int col = static_cast<int>(i) * (k - 1) + j;
      A.block(0, col, n, 1) = t;
      const Mat S = skew(t, r);
      for (size_t p = 0; p < pairs.size(); ++p) A(n + static_cast<int>(p), col) = S(pairs[p][0], pairs[p][1]);
    }
  }
  const Vec z = A.completeOrthogonalDecomposition().solve(rhs);
  if ((A * z - rhs).norm() > 1e-10 * std::max(scale, 1e-300))
    throw DegenerateChoice("two-centre split: tangential shift cannot balance the first group");

  std::vector<BeamTerm> beams;
  std::vector<ForceSystem> radial(2, ForceSystem(n, k - 1));
  for (size_t i = 0; i < items.size(); ++i) {
    auto& it = items[i];
    const Vec tau = it.T * z.segment(static_cast<int>(i) * (k - 1), k - 1);
    const Vec g[2] = {it.g1 + tau, it.g2 - tau};
    const Vec* centre[2] = {&O1, &O2};
    for (int m = 0; m < 2; ++m) {
      if (g[m].norm() <= 1e-15 * scale) continue;
      std::vector<Vec> v{*centre[m]};
      v.insert(v.end(), it.s.v.begin(), it.s.v.end());
      const Simplex C(v);
      const Mat P = tangent_projector(C);
      const Vec gm = P * g[m];
      if ((g[m] - gm).norm() > 1e-8 * g[m].norm()) throw VerificationError("two-centre split: force left its cone");
      const Vec nh = face_frame(C, 0).normal;
      const Mat B = gm * nh.transpose() + nh * gm.transpose() - gm.dot(nh) * nh * nh.transpose();
      const BeamTerm bt{B, C};
      beams.push_back(bt);
      const ForceSystem bb = beam_boundary(bt);
      for (size_t f = 1; f < bb.entries.size(); ++f)
        radial[static_cast<size_t>(m)].add(-bb.entries[f].density, bb.entries[f].simplex);
    }
  }
  auto fb = forbidden;
  fb.push_back(O1);
  fb.push_back(O2);
  for (int m = 0; m < 2; ++m) {
    const auto rb = balance_radial(radial[static_cast<size_t>(m)], m == 0 ? O1 : O2, rng, fb);
    beams.insert(beams.end(), rb.begin(), rb.end());
  }
  return beams;
}

}  // namespace

std::vector<BeamTerm> balance_once(const ForceSystem& F0, Rng& rng, const std::vector<Vec>& forbidden) {
  const int n = F0.dim, k = F0.grade + 1;
  if (n < k + 1) throw PreconditionError("balance: requires n >= k + 1");
  const ForceSystem F = drop_zero(F0);
  if (F.entries.empty()) return {};
  if (weighted_residual(F) > 1e-8) throw VerificationError("balance: intermediate system lost equilibrium");
  std::vector<BeamTerm> beams;
  if (k == 1) {
    std::vector<PointForce> pf;
    for (const auto& e : F.entries) pf.push_back({e.density, e.simplex.v[0]});
    beams = spring_decompose(pf, rng, forbidden).beams();
  } else if (n >= k + 2) {
    Reduction red = reduce_dimension(F, rng, forbidden);
    beams = red.beams;
    const Vec normal = red.frame.col(n - 1);
    const Mat Q1 = red.frame.leftCols(n - 1);
    ForceSystem low(n - 1, k - 1);
    for (const auto& e : red.Fh.entries) {
      std::vector<Vec> v;
      for (const auto& x : e.simplex.v) v.push_back(Q1.transpose() * (x - red.origin));
      low.add(Q1.transpose() * e.density, Simplex(v));
    }
    std::vector<Vec> fb_low;
    for (const auto& p : forbidden)
      if (std::abs(normal.dot(p - red.origin)) < 1e-9) fb_low.push_back(Q1.transpose() * (p - red.origin));
    for (const auto& b : balance_once(low, rng, fb_low)) {
      std::vector<Vec> v;
      for (const auto& y : b.simplex.v) v.push_back(red.origin + Q1 * y);
      beams.push_back({Q1 * b.tensor * Q1.transpose(), Simplex(v)});
    }
  } else {
    beams = balance_two_centres(F, rng, forbidden);
  }
  verify_stage(F, beam_boundary(beams, n, k), "balance");
  return beams;
}

std::vector<BeamTerm> balance(const ForceSystem& F, const BalanceOptions& opt) {
  const int n = F.dim, k = F.grade + 1;
  if (n < k + 1) throw PreconditionError("balance: requires n >= k + 1");
  for (const auto& e : F.entries) {
    if (e.simplex.k() != F.grade || e.simplex.dim() != n || e.density.size() != n)
      throw SchemaError("balance: inconsistent entry shape");
    if (e.simplex.k() > 0 && is_degenerate(e.simplex)) throw PreconditionError("balance: degenerate simplex");
  }
  const double res = weighted_residual(F);
  if (res > 1e-8) {
    std::ostringstream msg;
    msg << "balance: force system is not in equilibrium (relative residual " << res << ")";
    throw PreconditionError(msg.str());
  }
  std::string last;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    Rng rng(opt.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    try {
      auto beams = balance_once(F, rng);
      for (const auto& b : beams)
        if (!is_structural(b.tensor, b.simplex)) throw VerificationError("balance: non-structural beam");
      if (!force_systems_equal(F, beam_boundary(beams, n, k), 4, opt.seed, opt.tol))
        throw VerificationError("balance: final force check failed");
      return beams;
    } catch (const DegenerateChoice& e) {
      last = e.what();
    } catch (const VerificationError& e) {
      last = e.what();
    }
  }
  throw VerificationError("balance: all attempts failed; last error: " + last);
}

// ---------------------------------------------------------------------------
// Measure equality

namespace {

// Exact rule for quadratics on a simplex: vertices and edge midpoints.
template <class Fn>
double simplex_mean(const std::vector<Vec>& v, Fn&& f) {
  const int k = static_cast<int>(v.size()) - 1;
  if (k == 0) return f(v[0]);
  const double a = (2.0 - k) / ((k + 1.0) * (k + 2.0));
  const double b = 4.0 / ((k + 1.0) * (k + 2.0));
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (a != 0.0) s += a * f(v[i]);
    for (size_t j = i + 1; j < v.size(); ++j) s += b * f(Vec(0.5 * (v[i] + v[j])));
  }
  return s;
}

struct Quadratic {
  double c = 0;
  Vec b;
  Mat M;
  double operator()(const Vec& x) const { return c + b.dot(x) + x.dot(M * x); }
  static Quadratic random(int n, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Quadratic q;
    q.c = u(rng);
    q.b = random_vec(n, rng);
    q.M = Mat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) q.M(i, j) = q.M(j, i) = u(rng);
    return q;
  }
};

}  // namespace

bool force_systems_equal(const ForceSystem& a, const ForceSystem& b, int trials, std::uint64_t seed,
                         double tol) {
  const int n = a.entries.empty() ? b.dim : a.dim;
  std::vector<const Simplex*> ss;
  for (const auto* F : {&a, &b})
    for (const auto& e : F->entries) ss.push_back(&e.simplex);
  const Box box = box_of(n, ss);
  auto normalise = [&](const Simplex& s) {
    std::vector<Vec> v;
    for (const auto& x : s.v) v.push_back((x - box.mid) / box.rad);
    return v;
  };
  std::vector<std::vector<Vec>> na, nb;
  for (const auto& e : a.entries) na.push_back(normalise(e.simplex));
  for (const auto& e : b.entries) nb.push_back(normalise(e.simplex));
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<Quadratic> q;
    for (int j = 0; j < n; ++j) q.push_back(Quadratic::random(n, rng));
    double scale = 0;
    auto value = [&](const ForceSystem& F, const std::vector<std::vector<Vec>>& nv) {
      double s = 0;
      for (size_t i = 0; i < F.entries.size(); ++i) {
        const auto& e = F.entries[i];
        const double m = carrier_measure(e.simplex);
        double acc = 0;
        for (int j = 0; j < n; ++j)
          if (e.density(j) != 0.0) acc += e.density(j) * simplex_mean(nv[i], q[static_cast<size_t>(j)]);
        s += m * acc;
        scale += m * e.density.norm();
      }
      return s;
    };
    const double va = value(a, na), vb = value(b, nb);
    if (std::abs(va - vb) > tol * std::max(scale, 1e-300)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cone filling and the boundary solver

namespace {

double chain_scale(const StressedChain& c) {
  double s = 0;
  for (const auto& [A, sim] : c.terms) s = std::max(s, A.cwiseAbs().maxCoeff());
  return s;
}

bool is_closed(const StressedChain& R, double rel = 1e-9) {
  if (R.terms.empty()) return true;
  const double scale = std::max(chain_scale(R), 1e-300);
  if (R.grade == 0) {
    Mat sum = Mat::Zero(R.dim, R.dim);
    for (const auto& [A, s] : R.terms) sum += A;
    return sum.cwiseAbs().maxCoeff() <= rel * scale * static_cast<double>(R.terms.size());
  }
  const auto b = boundary(R);
  return b.terms.empty() || chain_scale(b) <= rel * scale;
}

StressedChain drop_small(const StressedChain& c, double rel) {
  const double scale = chain_scale(c);
  StressedChain out(c.dim, c.grade);
  for (const auto& t : c.terms)
    if (t.first.cwiseAbs().maxCoeff() > rel * scale) out.terms.push_back(t);
  return out;
}

}  // namespace

StressedChain cone_fill(const StressedChain& R, Rng& rng) {
  StressedChain P(R.dim, R.grade + 1);
  if (R.terms.empty()) return P;
  if (R.grade + 1 > R.dim) throw PreconditionError("cone_fill: grade too large for the ambient space");
  for (const auto& [A, s] : R.terms)
    if (!is_structural(A, s)) throw PreconditionError("cone_fill: chain is not structural");
  if (!is_closed(R)) throw PreconditionError("cone_fill: chain has nonzero boundary");
  std::vector<const Simplex*> ss;
  for (const auto& t : R.terms) ss.push_back(&t.second);
  const Box box = box_of(R.dim, ss);
  for (int tries = 0; tries < 100; ++tries) {
    const Vec w = generic_point(box, rng);
    bool ok = true;
    for (const auto& t : R.terms)
      if (affine_distance(t.second, w) <= 1e-3 * box.rad) {
        ok = false;
        break;
      }
    if (ok) return cone(w, R);
  }
  throw VerificationError("cone_fill: no generic apex found");
}

namespace {

// Sign of the largest-magnitude Plucker coordinate of the plane spanned by V's columns.
double plucker_sign(const Mat& V) {
  std::vector<Vec> cols;
  for (int j = 0; j < V.cols(); ++j) cols.push_back(V.col(j));
  const MultiVector p = wedge_all(cols, static_cast<int>(V.rows()));
  size_t arg = 0;
  for (size_t i = 1; i < p.c.size(); ++i)
    if (std::abs(p.c[i]) > std::abs(p.c[arg]) + 1e-12) arg = i;
  return p.c[arg] >= 0 ? 1.0 : -1.0;
}

// Unit normal nu in V with nu ^ tau positively oriented relative to V.
Vec oriented_normal(const CoefficientClass& cls, const Simplex& tau) {
  const int n = static_cast<int>(cls.V.rows());
  const Vec nh = cls.normal;
  std::vector<Vec> frame{nh};
  for (const auto& e : edge_vectors(tau)) frame.push_back(e);
  const MultiVector lhs = wedge_all(frame, n);
  std::vector<Vec> vc;
  for (int j = 0; j < cls.V.cols(); ++j) vc.push_back(cls.V.col(j));
  const MultiVector ref = wedge_all(vc, n);
  double d = 0;
  for (size_t i = 0; i < lhs.c.size(); ++i) d += lhs.c[i] * ref.c[i];
  const double s = (d >= 0 ? 1.0 : -1.0) * plucker_sign(cls.V);
  return s * nh;
}

}  // namespace

ForceSystem force_system_of(const StressedChain& Q, double tol) {
  const int k = Q.grade + 1;
  ForceSystem F(Q.dim, Q.grade);
  for (const auto& [A, tau] : Q.terms) {
    if (!is_generalized_cauchy(A, tau, k, tol))
      throw PreconditionError("solve_boundary: coefficient is not a generalized Cauchy tensor");
    const auto cls = classify_coefficient(A, tau, k);
    const Vec f = A * oriented_normal(cls, tau);
    F.add(f, tau);
  }
  return F;
}

namespace {

struct PlaneGroup {
  Vec p0;
  Mat V;  // orthonormal basis of the direction space
  std::vector<std::pair<Mat, Simplex>> terms;
};

bool in_plane(const PlaneGroup& g, const Vec& x, double tol) {
  const Vec d = x - g.p0;
  return (d - g.V * (g.V.transpose() * d)).norm() <= tol;
}

bool same_space(const Mat& A, const Mat& B, double tol) {
  if (A.cols() != B.cols()) return false;
  return (B - A * (A.transpose() * B)).cwiseAbs().maxCoeff() <= tol;
}

StressedChain planar_cones(const StressedChain& Q, Rng& rng, double scale_len) {
  const int n = Q.dim, k = Q.grade + 1;
  const double ctol = 1e-8 * scale_len;
  std::vector<PlaneGroup> groups;
  std::vector<std::pair<Mat, Simplex>> loose;
  const double cscale = chain_scale(Q);
  for (const auto& [A, tau] : Q.terms) {
    const auto cls = classify_coefficient(A, tau, k);
    if ((A * cls.normal).norm() <= 1e-9 * cscale) {
      loose.emplace_back(A, tau);
      continue;
    }
    bool placed = false;
    for (auto& g : groups)
      if (same_space(g.V, cls.V, 1e-8) && in_plane(g, tau.v[0], ctol)) {
        g.terms.emplace_back(A, tau);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({tau.v[0], cls.V, {{A, tau}}});
  }
  std::vector<std::pair<Mat, Simplex>> leftover;
  for (auto& t : loose) {
    bool placed = false;
    for (auto& g : groups) {
      bool inside = true;
      for (const auto& x : t.second.v) inside = inside && in_plane(g, x, ctol);
      if (inside && is_structural(t.first, Simplex([&] {
            std::vector<Vec> v{g.p0};
            for (int j = 0; j < k; ++j) v.push_back(g.p0 + g.V.col(j));
            return v;
          }()))) {
        g.terms.push_back(t);
        placed = true;
        break;
      }
    }
    if (!placed) leftover.push_back(t);
  }
  StressedChain P(n, k);
  for (const auto& g : groups) {
    std::vector<const Simplex*> ss;
    for (const auto& t : g.terms) ss.push_back(&t.second);
    const Box box = box_of(n, ss);
    Vec w;
    for (int tries = 0;; ++tries) {
      if (tries > 100) throw DegenerateChoice("planar cones: no generic apex");
      Vec x = box.mid + random_vec(n, rng, 2.0 * box.rad);
      w = g.p0 + g.V * (g.V.transpose() * (x - g.p0));
      bool ok = true;
      for (const auto& t : g.terms) ok = ok && affine_distance(t.second, w) > 1e-3 * box.rad;
      if (ok) break;
    }
    for (const auto& [A, tau] : g.terms) {
      std::vector<Vec> v{w};
      v.insert(v.end(), tau.v.begin(), tau.v.end());
      P.add(A, Simplex(v));
    }
  }
  return P;
}

bool boundary_matches(const StressedChain& P, const StressedChain& Q, std::uint64_t seed) {
  return chains_equivalent(boundary(P), Q, 3, seed, 1e-8);
}

}  // namespace

StressedChain solve_boundary(const StressedChain& Q0, const BalanceOptions& opt, SolveReport* report) {
  SolveReport local;
  SolveReport& rep = report ? *report : local;
  const int n = Q0.dim, k = Q0.grade + 1;
  StressedChain Q = drop_small(canonicalize(Q0), 1e-13);
  if (Q.terms.empty()) {
    rep.route = "empty";
    rep.verified = true;
    return StressedChain(n, k);
  }
  if (k > n) throw PreconditionError("solve_boundary: grade too large for the ambient space");
  for (const auto& [A, tau] : Q.terms)
    if (!is_symmetric(A)) throw PreconditionError("solve_boundary: coefficient is not symmetric");
  const ForceSystem F = force_system_of(Q);
  if (!is_closed(Q)) throw PreconditionError("solve_boundary: Q has nonzero boundary");
  {
    const auto eq = equilibrium_check(F, Convention::Weighted, 1e-8);
    if (!eq.weighted_ok)
      throw PreconditionError("solve_boundary: net force or net torque of the extracted force system is nonzero");
  }
  std::vector<const Simplex*> ss;
  for (const auto& t : Q.terms) ss.push_back(&t.second);
  const Box box = box_of(n, ss);

  std::string last;
  for (int attempt = 0; opt.try_planar_cones && attempt <= std::min(opt.max_retries, 10); ++attempt) {
    ++rep.attempts;
    Rng rng(opt.seed + 0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(attempt));
    try {
      const StressedChain P1 = planar_cones(Q, rng, box.rad);
      StressedChain R = drop_small(canonicalize(Q + scaled(boundary(P1), -1.0)), 1e-10);
      if (!is_structural(R)) {
        rep.log.push_back("planar cones leave a non-structural remainder");
        break;
      }
      const StressedChain P = canonicalize(P1 + cone_fill(R, rng));
      if (is_structural(P) && boundary_matches(P, Q, opt.seed)) {
        rep.route = "planar-cones";
        rep.verified = true;
        return P;
      }
      rep.log.push_back("planar cones failed the current check");
      break;
    } catch (const DegenerateChoice& e) {
      last = e.what();
    }
  }

  // Balance the extracted forces, then close the structural remainder with a cone.
  if (n < k + 1) throw VerificationError("solve_boundary: planar construction failed and n = k");
  BalanceOptions bopt = opt;
  const auto beams = balance(F, bopt);
  StressedChain P1(n, k);
  for (const auto& b : beams) {
    Simplex s = b.simplex;
    const Mat T = tangent_basis(s);
    const auto e = edge_vectors(s);
    std::vector<Vec> tv;
    for (int j = 0; j < T.cols(); ++j) tv.push_back(T.col(j));
    const MultiVector ref = wedge_all(tv, n), own = wedge_all(e, n);
    double d = 0;
    for (size_t i = 0; i < ref.c.size(); ++i) d += ref.c[i] * own.c[i];
    if ((d >= 0 ? 1.0 : -1.0) * plucker_sign(T) < 0) std::swap(s.v[0], s.v[1]);
    P1.add(b.tensor, s);
  }
  StressedChain R = drop_small(canonicalize(Q + scaled(boundary(P1), -1.0)), 1e-10);
  if (!is_structural(R)) {
    double worst = 0;
    for (const auto& [A, s] : R.terms) worst = std::max(worst, structural_residual(A, s));
    std::ostringstream msg;
    msg << "solve_boundary: remainder after balancing is not structural (worst residual " << worst << ")";
    throw VerificationError(msg.str());
  }
  Rng rng(opt.seed ^ 0xABCDEF);
  const StressedChain P = canonicalize(P1 + cone_fill(R, rng));
  if (!is_structural(P) || !boundary_matches(P, Q, opt.seed))
    throw VerificationError("solve_boundary: boundary of the constructed chain differs from Q");
  rep.route = "balance";
  rep.verified = true;
  return P;
}

}  // namespace sc
