#pragma once
// Three-spring fan constructions, their mass comparisons and the associated inequalities;
// the four-spring split; and an angle audit for truss solutions.

#include "sc/optimize.hpp"

#include <string>
#include <vector>

namespace sc {

/// Case1: acute junction, 0 < alpha, beta < pi/2.  Case2: alpha = pi/2.
/// Case3: alpha + beta < pi/2 with the right angle on the other side.
/// FourSpringAcute: inequality only, parametrised by beta in (0, pi/2).
enum class FanCase { Case1, Case2, Case3, FourSpringAcute };

std::string to_string(FanCase c);
FanCase fan_case_from_string(const std::string& s);  // throws SchemaError

struct FanConfig {
  double alpha = 0, beta = 0, x = 0;
  double F1mag = 0, F2mag = 0;
  double slope_k = 0;
  double Omega = 0;  // atan(slope_k)
};

/// Magnitudes and slope for the given offset. Throws PreconditionError outside the case
/// domain, for x <= 0, or where the fan formula's singular denominator is not positive.
FanConfig fan_config(double alpha, double beta, double x, FanCase c);

/// 1 + |F1| + |F2|.
double mass_original(double alpha, double beta, FanCase c);

/// Mass after the fan replacement at offset cfg.x.
double mass_fan(const FanConfig& cfg, FanCase c);

/// f(x) = mass_fan - mass_original.
double fan_difference(double alpha, double beta, double x, FanCase c);

/// The Case 1 display exactly as printed (its x -> 0 limit is 2|F1| - |F2| - 1, not 0).
double mass_fan_case1_as_printed(const FanConfig& cfg);

/// Slope k for offset x (tends to cot(beta) as x -> 0).
double fan_slope(double alpha, double beta, double x, FanCase c);

struct Extrapolated {
  double value = 0;
  double error = 0;  // difference between the last two diagonal Richardson entries
};

/// Richardson-extrapolated forward differences f(x)/x at x = 1e-3 / 2^j.
/// Throws VerificationError when the extrapolation does not settle.
Extrapolated fprime_at_zero(double alpha, double beta, FanCase c);
/// Richardson-extrapolated lim_{x -> 0+} f(x).
Extrapolated limit_at_zero(double alpha, double beta, FanCase c);

struct InequalityResult {
  bool holds = false;
  double margin = 0;  // rhs - lhs
  double lhs = 0, rhs = 0;
};

/// alpha is ignored for FourSpringAcute and must equal pi/2 for Case2.
InequalityResult check_inequality(FanCase c, double alpha, double beta);

/// 0.01 cos(b) b (cos((a+b)/2) - sin((a+b)/2)) / (cos((a-b)/2) - sin((a-b)/2)); requires a + b < pi/2.
double sample_x(double alpha, double beta);

struct FourSpringSplit {
  double a = 0, b = 0;
  double c = 0;                   // scale actually used (after any shrinking)
  std::vector<Vec> subsystemA;    // {c F1, c a F2, c b F3}
  std::vector<Vec> subsystemB;    // {(1-c) F1, (1-ca) F2, (1-cb) F3, F4}
};

/// Solves F1 = -a F2 - b F3. Requires F1+F2+F3+F4 = 0 and independent F2, F3; c is shrunk
/// to keep a c < 1 and b c < 1.
FourSpringSplit four_spring_split(const Vec& F1, const Vec& F2, const Vec& F3, const Vec& F4,
                                  double c, double tol = 1e-9);

/// Which sign of the spring tensor eigenvalue (-lambda) counts as compressed.
enum class SignConvention { CompressPositive, StretchPositive };

SignConvention sign_convention_from_string(const std::string& s);  // throws SchemaError

struct AuditViolation {
  std::string kind;  // "angle" or "net-force"
  int node = -1;
  int edge_a = -1, edge_b = -1;
  double angle = 0;  // radians, for "angle"
  double net_force = 0;  // norm, for "net-force"
};

/// Flags mixed stretched/compressed pairs at unloaded nodes that are not perpendicular
/// within angle_tol, and unloaded nodes whose springs do not balance.
std::vector<AuditViolation> perpendicularity_audit(const TrussSolution& ts, const GroundStructure& gs,
                                                   double angle_tol,
                                                   SignConvention sign = SignConvention::CompressPositive,
                                                   double force_tol = 1e-8, double drop = 1e-9);

}  // namespace sc
