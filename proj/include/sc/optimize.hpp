#pragma once
// Minimum-mass trusses (k = 1) over a fixed ground structure.

#include "sc/common.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sc {

struct GroundStructure {
  std::vector<Vec> nodes;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, Vec>> loads;
  std::vector<bool> support;  // support[i]: node i absorbs any reaction; empty = all free

  int dim() const { return nodes.empty() ? 0 : static_cast<int>(nodes.front().size()); }
  bool is_support(int i) const {
    return !support.empty() && support[static_cast<size_t>(i)];
  }
  /// Total applied load at node i.
  Vec load_at(int i) const;
  /// Throws SchemaError on bad indices, duplicate or zero-length edges, or dimension mismatch.
  void validate() const;
};

/// lambda_e > 0 means edge e is stretched (it pulls its endpoints together).
struct TrussSolution {
  std::vector<double> lambda;
  double mass = 0.0;
  std::vector<std::pair<int, Vec>> residuals;  // per free node: net spring force minus load
};

double edge_length(const GroundStructure& gs, int e);
/// Unit vector from the first to the second endpoint of edge e.
Vec edge_direction(const GroundStructure& gs, int e);

/// Minimises sum |lambda_e| L_e subject to, at every free node i,
/// sum_j lambda_ij (a_j - a_i)/|a_j - a_i| = F_i. Two-phase dense simplex with Bland's rule.
/// Infeasible loads raise PreconditionError naming the nodes that cannot be balanced.
TrussSolution minimize_truss(const GroundStructure& gs, double tol = 1e-9);

/// Net spring force at each node.
std::vector<std::pair<int, Vec>> truss_boundary(const TrussSolution& ts, const GroundStructure& gs);

/// Exhaustive search over linearly independent edge subsets. Only for small instances
/// (throws PreconditionError above 16 edges).
TrussSolution brute_force_truss(const GroundStructure& gs, double tol = 1e-9);

/// Planar drawing: stretched members red, compressed blue, width proportional to |lambda|.
std::string render_svg(const TrussSolution& ts, const GroundStructure& gs, double drop = 1e-9);

}  // namespace sc
