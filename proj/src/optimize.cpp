#include "sc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace sc {

Vec GroundStructure::load_at(int i) const {
  Vec f = Vec::Zero(dim());
  for (const auto& [node, F] : loads)
    if (node == i) f += F;
  return f;
}

void GroundStructure::validate() const {
  const int N = static_cast<int>(nodes.size());
  const int n = dim();
  for (const auto& a : nodes)
    if (a.size() != n) throw SchemaError("ground structure: nodes have mixed dimensions");
  if (!support.empty() && static_cast<int>(support.size()) != N)
    throw SchemaError("ground structure: support flags must match the node count");
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= N || j >= N) throw SchemaError("ground structure: edge index out of range");
    if (i == j) throw SchemaError("ground structure: edge joins a node to itself");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      throw SchemaError("ground structure: duplicate edge");
    if ((nodes[static_cast<size_t>(i)] - nodes[static_cast<size_t>(j)]).norm() == 0.0)
      throw SchemaError("ground structure: zero-length edge");
  }
  for (const auto& [node, F] : loads) {
    if (node < 0 || node >= N) throw SchemaError("ground structure: load index out of range");
    if (F.size() != n) throw SchemaError("ground structure: load dimension mismatch");
  }
}

double edge_length(const GroundStructure& gs, int e) {
  const auto [i, j] = gs.edges[static_cast<size_t>(e)];
  return (gs.nodes[static_cast<size_t>(j)] - gs.nodes[static_cast<size_t>(i)]).norm();
}

Vec edge_direction(const GroundStructure& gs, int e) {
  const auto [i, j] = gs.edges[static_cast<size_t>(e)];
  return (gs.nodes[static_cast<size_t>(j)] - gs.nodes[static_cast<size_t>(i)]).normalized();
}

namespace {

struct Constraints {
  Mat A;                  // rows: (free node, coordinate); columns: edges
  Vec b;
  std::vector<int> row_node;
};

Constraints build_constraints(const GroundStructure& gs) {
  const int n = gs.dim();
  const int m = static_cast<int>(gs.edges.size());
  std::vector<int> free_nodes;
  for (int i = 0; i < static_cast<int>(gs.nodes.size()); ++i)
    if (!gs.is_support(i)) free_nodes.push_back(i);
  Constraints c;
  c.A = Mat::Zero(static_cast<int>(free_nodes.size()) * n, m);
  c.b = Vec::Zero(c.A.rows());
  for (size_t f = 0; f < free_nodes.size(); ++f) {
    const int node = free_nodes[f];
    const int r0 = static_cast<int>(f) * n;
    for (int e = 0; e < m; ++e) {
      const auto [i, j] = gs.edges[static_cast<size_t>(e)];
      const Vec u = edge_direction(gs, e);
      if (i == node) c.A.block(r0, e, n, 1) += u;
      if (j == node) c.A.block(r0, e, n, 1) -= u;
    }
    c.b.segment(r0, n) = gs.load_at(node);
    for (int d = 0; d < n; ++d) c.row_node.push_back(node);
  }
  return c;
}

std::vector<std::pair<int, Vec>> residuals_of(const GroundStructure& gs, const std::vector<double>& lambda) {
  TrussSolution tmp;
  tmp.lambda = lambda;
  auto net = truss_boundary(tmp, gs);
  std::vector<std::pair<int, Vec>> out;
  for (auto& [node, f] : net)
    if (!gs.is_support(node)) out.push_back({node, f - gs.load_at(node)});
  return out;
}

double mass_of(const GroundStructure& gs, const std::vector<double>& lambda) {
  double m = 0;
  for (size_t e = 0; e < lambda.size(); ++e) m += std::abs(lambda[e]) * edge_length(gs, static_cast<int>(e));
  return m;
}

// Dense tableau simplex for  min c^T x,  A x = b,  x >= 0  (b >= 0 after row flips).
class Simplex {
 public:
  Simplex(const Mat& A, const Vec& b, double tol) : tol_(tol) {
    rows_ = static_cast<int>(A.rows());
    vars_ = static_cast<int>(A.cols());
    T_ = Mat::Zero(rows_ + 1, vars_ + rows_ + 1);
    for (int r = 0; r < rows_; ++r) {
      const double s = b(r) < 0 ? -1.0 : 1.0;
      T_.block(r, 0, 1, vars_) = s * A.row(r);
      T_(r, vars_ + r) = 1.0;
      T_(r, last()) = s * b(r);
      basis_.push_back(vars_ + r);
    }
  }

  // Phase one: minimise the sum of artificials. Returns the optimal value.
  double phase_one() {
    objective_.assign(static_cast<size_t>(vars_ + rows_), 0.0);
    for (int r = 0; r < rows_; ++r) objective_[static_cast<size_t>(vars_ + r)] = 1.0;
    load_objective();
    iterate(vars_ + rows_);
    return -T_(rows_, last());
  }

  // Phase two with the real costs; artificials are never allowed to enter.
  void phase_two(const Vec& c) {
    drive_out_artificials();
    objective_.assign(static_cast<size_t>(vars_ + rows_), 0.0);
    for (int j = 0; j < vars_; ++j) objective_[static_cast<size_t>(j)] = c(j);
    load_objective();
    iterate(vars_);
  }

  Vec solution() const {
    Vec x = Vec::Zero(vars_);
    for (int r = 0; r < rows_; ++r)
      if (basis_[static_cast<size_t>(r)] < vars_) x(basis_[static_cast<size_t>(r)]) = T_(r, last());
    return x;
  }

  // Value of each artificial in the current basis (used for the infeasibility report).
  Vec artificials() const {
    Vec a = Vec::Zero(rows_);
    for (int r = 0; r < rows_; ++r)
      if (basis_[static_cast<size_t>(r)] >= vars_) a(basis_[static_cast<size_t>(r)] - vars_) = T_(r, last());
    return a;
  }

 private:
  int last() const { return static_cast<int>(T_.cols()) - 1; }

  void load_objective() {
    T_.row(rows_).setZero();
    for (size_t j = 0; j < objective_.size(); ++j) T_(rows_, static_cast<int>(j)) = objective_[j];
    for (int r = 0; r < rows_; ++r) {
      const double cb = objective_[static_cast<size_t>(basis_[static_cast<size_t>(r)])];
      if (cb != 0.0) T_.row(rows_) -= cb * T_.row(r);
    }
  }

  void pivot(int r, int j) {
    T_.row(r) /= T_(r, j);
    for (int i = 0; i <= rows_; ++i)
      if (i != r && T_(i, j) != 0.0) T_.row(i) -= T_(i, j) * T_.row(r);
    basis_[static_cast<size_t>(r)] = j;
  }

  void iterate(int enter_limit) {
    const int max_iter = 50 * (vars_ + rows_ + 10);
    for (int it = 0; it < max_iter; ++it) {
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j)
        if (T_(rows_, j) < -tol_) {
          enter = j;  // Bland: lowest index with negative reduced cost
          break;
        }
      if (enter < 0) return;
      int leave = -1;
      double best = 0;
      for (int r = 0; r < rows_; ++r) {
        if (T_(r, enter) <= tol_) continue;
        const double ratio = T_(r, last()) / T_(r, enter);
        if (leave < 0 || ratio < best - tol_ ||
            (std::abs(ratio - best) <= tol_ && basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) throw VerificationError("minimize_truss: objective unbounded below");
      pivot(leave, enter);
    }
    throw VerificationError("minimize_truss: simplex iteration limit reached");
  }

  void drive_out_artificials() {
    for (int r = 0; r < rows_; ++r) {
      if (basis_[static_cast<size_t>(r)] < vars_) continue;
      for (int j = 0; j < vars_; ++j)
        if (std::abs(T_(r, j)) > tol_) {
          pivot(r, j);
          break;
        }
      // A row with no structural entry is redundant; its artificial stays at zero and
      // can never enter again.
    }
  }

  double tol_;
  int rows_ = 0, vars_ = 0;
  Mat T_;
  std::vector<int> basis_;
  std::vector<double> objective_;
};

}  // namespace

TrussSolution minimize_truss(const GroundStructure& gs, double tol) {
  gs.validate();
  const int m = static_cast<int>(gs.edges.size());
  const Constraints c = build_constraints(gs);
  TrussSolution out;
  out.lambda.assign(static_cast<size_t>(m), 0.0);
  const double scale = std::max(1.0, c.b.cwiseAbs().maxCoeff());
  if (c.A.rows() > 0) {
    // x = [p; q], lambda = p - q.
    Mat A2(c.A.rows(), 2 * m);
    A2 << c.A, -c.A;
    Simplex lp(A2, c.b / scale, tol);
    const double infeas = lp.phase_one();
    if (infeas > std::sqrt(tol)) {
      const Vec art = lp.artificials();
      std::set<int> bad;
      for (int r = 0; r < art.size(); ++r)
        if (std::abs(art(r)) > std::sqrt(tol)) bad.insert(c.row_node[static_cast<size_t>(r)]);
      std::string msg = "minimize_truss: loads cannot be balanced on the candidate edges; unbalanced nodes:";
      for (int node : bad) msg += " " + std::to_string(node);
      throw PreconditionError(msg);
    }
    Vec cost(2 * m);
    for (int e = 0; e < m; ++e) cost(e) = cost(m + e) = edge_length(gs, e);
    lp.phase_two(cost);
    const Vec x = lp.solution() * scale;
    for (int e = 0; e < m; ++e) out.lambda[static_cast<size_t>(e)] = x(e) - x(m + e);
  }
  out.mass = mass_of(gs, out.lambda);
  out.residuals = residuals_of(gs, out.lambda);
  return out;
}

std::vector<std::pair<int, Vec>> truss_boundary(const TrussSolution& ts, const GroundStructure& gs) {
  const int N = static_cast<int>(gs.nodes.size());
  if (ts.lambda.size() != gs.edges.size()) throw SchemaError("truss_boundary: lambda/edge count mismatch");
  std::vector<Vec> net(static_cast<size_t>(N), Vec::Zero(gs.dim()));
  for (size_t e = 0; e < gs.edges.size(); ++e) {
    const auto [i, j] = gs.edges[e];
    const Vec u = edge_direction(gs, static_cast<int>(e));
    net[static_cast<size_t>(i)] += ts.lambda[e] * u;
    net[static_cast<size_t>(j)] -= ts.lambda[e] * u;
  }
  std::vector<std::pair<int, Vec>> out;
  for (int i = 0; i < N; ++i) out.push_back({i, net[static_cast<size_t>(i)]});
  return out;
}

TrussSolution brute_force_truss(const GroundStructure& gs, double tol) {
  gs.validate();
  const int m = static_cast<int>(gs.edges.size());
  if (m > 16) throw PreconditionError("brute_force_truss: too many candidate edges");
  const Constraints c = build_constraints(gs);
  const double scale = std::max(1.0, c.b.cwiseAbs().maxCoeff());
  TrussSolution best;
  best.mass = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> cols;
    for (int e = 0; e < m; ++e)
      if (mask & (1u << e)) cols.push_back(e);
    Mat S(c.A.rows(), static_cast<int>(cols.size()));
    for (size_t t = 0; t < cols.size(); ++t) S.col(static_cast<int>(t)) = c.A.col(cols[t]);
    Vec y = Vec::Zero(static_cast<int>(cols.size()));
    if (!cols.empty()) {
      Eigen::ColPivHouseholderQR<Mat> qr(S);
      if (qr.rank() < static_cast<int>(cols.size())) continue;
      y = qr.solve(c.b);
    }
    if (c.A.rows() > 0 && (S * y - c.b).norm() > 1e3 * tol * scale) continue;
    std::vector<double> lambda(static_cast<size_t>(m), 0.0);
    for (size_t t = 0; t < cols.size(); ++t) lambda[static_cast<size_t>(cols[t])] = y(static_cast<int>(t));
    const double mass = mass_of(gs, lambda);
    if (mass < best.mass) {
      best.mass = mass;
      best.lambda = lambda;
    }
  }
  if (!std::isfinite(best.mass)) throw PreconditionError("brute_force_truss: infeasible loads");
  best.residuals = residuals_of(gs, best.lambda);
  return best;
}

std::string render_svg(const TrussSolution& ts, const GroundStructure& gs, double drop) {
  if (gs.dim() != 2) throw PreconditionError("render_svg: only planar ground structures can be drawn");
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!gs.nodes.empty()) {
    xmin = xmax = gs.nodes[0](0);
    ymin = ymax = gs.nodes[0](1);
    for (const auto& a : gs.nodes) {
      xmin = std::min(xmin, a(0));
      xmax = std::max(xmax, a(0));
      ymin = std::min(ymin, a(1));
      ymax = std::max(ymax, a(1));
    }
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double W = 400, pad = 20, s = (W - 2 * pad) / span;
  auto X = [&](const Vec& a) { return pad + (a(0) - xmin) * s; };
  auto Y = [&](const Vec& a) { return W - pad - (a(1) - ymin) * s; };
  double lmax = 0;
  for (double l : ts.lambda) lmax = std::max(lmax, std::abs(l));
  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << W
     << "\" viewBox=\"0 0 " << W << " " << W << "\">\n";
  for (size_t e = 0; e < gs.edges.size(); ++e) {
    const double l = ts.lambda[e];
    if (std::abs(l) <= drop * std::max(1.0, lmax)) continue;
    const auto [i, j] = gs.edges[e];
    const Vec& a = gs.nodes[static_cast<size_t>(i)];
    const Vec& b = gs.nodes[static_cast<size_t>(j)];
    os << "  <line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b)
       << "\" stroke=\"" << (l > 0 ? "red" : "blue") << "\" stroke-width=\""
       << 1.0 + 5.0 * std::abs(l) / lmax << "\"/>\n";
  }
  for (size_t i = 0; i < gs.nodes.size(); ++i)
    os << "  <circle cx=\"" << X(gs.nodes[i]) << "\" cy=\"" << Y(gs.nodes[i]) << "\" r=\"3\" fill=\""
       << (gs.is_support(static_cast<int>(i)) ? "black" : "gray") << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace sc
