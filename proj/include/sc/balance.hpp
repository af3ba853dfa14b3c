#pragma once
// Force systems on (k-1)-simplices, boundary forces of stressed k-simplices (beams),
// and the constructive balancing of equilibrium force systems by beams.

#include "sc/decompose.hpp"
#include "sc/stress.hpp"

#include <optional>
#include <string>

namespace sc {

struct ForceEntry {
  Vec density;  // force per unit (k-1)-dimensional measure
  Simplex simplex;
};

struct ForceSystem {
  int dim = 0;
  int grade = 0;  // grade of the carrying simplices (k-1)
  std::vector<ForceEntry> entries;

  ForceSystem() = default;
  ForceSystem(int n, int g) : dim(n), grade(g) {}
  void add(const Vec& d, const Simplex& s) { entries.push_back({d, s}); }
};

/// (k-1)-dimensional measure of a carrying simplex; 1 for points.
double carrier_measure(const Simplex& s);

ForceSystem operator+(const ForceSystem& a, const ForceSystem& b);
ForceSystem scaled(const ForceSystem& a, double s);

enum class Convention { Literal, Weighted };

struct EquilibriumReport {
  Vec net_force;            // sum of densities
  MultiVector net_torque;   // sum of density ^ barycentre
  Vec weighted_force;       // sum of density * measure
  MultiVector weighted_torque;
  bool literal_ok = false;
  bool weighted_ok = false;
  bool is_equilibrium = false;  // per the selected convention
  Convention convention = Convention::Literal;
};

EquilibriumReport equilibrium_check(const ForceSystem& F, Convention c = Convention::Literal,
                                    double tol = 1e-9);

struct BeamTerm {
  Mat tensor;
  Simplex simplex;
};

/// Boundary forces of a constantly stressed simplex: density tensor * outward normal on
/// every face. Throws PreconditionError if the tensor is not structural.
ForceSystem beam_boundary(const BeamTerm& b);
ForceSystem beam_boundary(const std::vector<BeamTerm>& beams, int n, int k);

/// The same densities through the interior-product expression
/// (-1)^(i+k+1) A (zeta _| d eta_i) / (|zeta| * area_i), with Gram volumes. For odd k the
/// sign reduces to (-1)^i.
Vec beam_face_density_by_interior_product(const BeamTerm& b, int i);
/// zeta _| d eta_i for face i.
Vec zeta_contract_eta(const Simplex& s, int i);

/// Spring coefficients lambda_ij with sum_j lambda_ij (a_j - a_i)/|a_j - a_i| = F_i.
/// A positive lambda pulls its endpoints towards each other.
struct SpringSystem {
  std::vector<Vec> points;
  Mat lambda;
  /// Beam terms for every nonzero spring; the stress tensor is -lambda u u^T.
  std::vector<BeamTerm> beams(double drop = 0.0) const;
};

struct PointForce {
  Vec force;
  Vec point;
};

/// Requires equilibrium of the point forces. Up to 2(n+1) points are first tried with the
/// complete graph on the points alone; otherwise each loaded point is tied to n of n + 1
/// generic anchor points, which are braced by their complete graph. Springs collinear
/// with any forbidden point are never used.
SpringSystem spring_decompose(const std::vector<PointForce>& pointed, Rng& rng,
                              const std::vector<Vec>& forbidden = {});

/// Balances a force system whose simplices all have O as a vertex. Returns k-beams
/// (k = grade + 1) whose boundary equals F.
std::vector<BeamTerm> balance_radial(const ForceSystem& F, const Vec& O, Rng& rng,
                                     const std::vector<Vec>& forbidden = {});

/// Scale factor applied to an extended inner beam in balance_radial.
double radial_lift_factor(int k, double apex_distance_to_extended_face);

struct Reduction {
  std::vector<BeamTerm> beams;
  ForceSystem Fh;  // lies in the hyperplane {origin + frame * y : y_n = 0}
  Mat frame;       // orthonormal n x n
  Vec origin;
};

/// Requires n >= k + 2 and weighted equilibrium. F = boundary(beams) + Fh.
Reduction reduce_dimension(const ForceSystem& F, Rng& rng, const std::vector<Vec>& forbidden = {});

/// Parallel push of a force entry onto the hyperplane {x : normal . (x - origin) = 0}
/// along its own direction. Returns the beams and the transferred entry.
std::pair<std::vector<BeamTerm>, ForceEntry> push_to_hyperplane(const ForceEntry& e,
                                                               const Vec& origin,
                                                               const Vec& normal);

/// Translation push: moves the entry by `offset`, keeping its density.
std::pair<std::vector<BeamTerm>, ForceEntry> push_by_translation(const ForceEntry& e,
                                                                const Vec& offset);

struct BalanceOptions {
  std::uint64_t seed = 1;
  int max_retries = 100;
  double tol = 1e-9;
  bool try_planar_cones = true;  // solve_boundary: attempt the per-plane cone route first
};

/// k-beams (k = grade + 1) whose boundary equals F. Requires n >= k + 1 and weighted
/// equilibrium. Retries with fresh generic choices on degeneracy; every returned result
/// has passed force_systems_equal against F.
std::vector<BeamTerm> balance(const ForceSystem& F, const BalanceOptions& opt = {});

/// Single attempt with the caller's generator; throws on degeneracy.
std::vector<BeamTerm> balance_once(const ForceSystem& F, Rng& rng,
                                   const std::vector<Vec>& forbidden = {});

/// Equality of vector-valued measures, tested against random quadratic vector fields.
bool force_systems_equal(const ForceSystem& a, const ForceSystem& b, int trials = 4,
                         std::uint64_t seed = 7, double tol = 1e-7);

/// P = sum A_i (w * sigma_i) for a generic apex w. Requires structural terms and dR = 0.
StressedChain cone_fill(const StressedChain& R, Rng& rng);

/// Force carried by each term of a boundary chain: coefficient * nu, with nu the unit
/// normal of the term inside its generalized Cauchy space V, oriented so that
/// nu ^ tau is positive relative to V (V oriented by its largest Plucker coordinate).
ForceSystem force_system_of(const StressedChain& Q, double tol = 1e-8);

struct SolveReport {
  std::string route;  // "planar-cones" or "balance"
  int attempts = 0;
  double force_residual = 0.0;
  bool verified = false;
  std::vector<std::string> log;
};

/// Structural P with boundary_stressed(P) = Q as currents.
StressedChain solve_boundary(const StressedChain& Q, const BalanceOptions& opt = {},
                             SolveReport* report = nullptr);

/// Thrown internally when a random choice lands on a degenerate configuration.
struct DegenerateChoice : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sc
