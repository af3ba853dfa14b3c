#include "sc/fans.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace sc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;

void require_domain(double alpha, double beta, FanCase c) {
  auto fail = [&](const char* why) {
    throw PreconditionError(std::string("fan ") + to_string(c) + ": " + why);
  };
  if (!std::isfinite(alpha) || !std::isfinite(beta)) fail("angles must be finite");
  switch (c) {
    case FanCase::Case1:
      if (!(alpha > 0 && alpha < kHalfPi && beta > 0 && beta < kHalfPi))
        fail("requires 0 < alpha, beta < pi/2");
      break;
    case FanCase::Case2:
      if (std::abs(alpha - kHalfPi) > 1e-12) fail("requires alpha = pi/2");
      if (!(beta > 0 && beta < kHalfPi)) fail("requires 0 < beta < pi/2");
      break;
    case FanCase::Case3:
      if (!(alpha >= 0 && beta > 0 && alpha + beta < kHalfPi))
        fail("requires alpha >= 0, beta > 0 and alpha + beta < pi/2");
      break;
    case FanCase::FourSpringAcute:
      if (!(beta > 0 && beta < kHalfPi)) fail("requires 0 < beta < pi/2");
      break;
  }
}

// Cases 1 and 2 share one formula, Case 3 swaps sin(alpha) and cos(alpha) in the slope.
double slope_unchecked(double a, double b, double x, FanCase c) {
  const double s = (c == FanCase::Case3) ? std::cos(a) : std::sin(a);
  const double t = (c == FanCase::Case3) ? std::sin(a) : std::cos(a);
  const double r = std::sqrt(1 - 2 * std::cos(b) * x + t * t * x * x);
  const double den = std::sin(b) * r - (std::cos(b) - x) * s * x;
  if (!(den > 0)) throw PreconditionError("fan: slope denominator vanishes at this offset");
  return (s * std::sin(b) * x + (std::cos(b) - x) * r) / den;
}

// Shared rational term (|F1| sin(b) k - |F1| cos(b)) (1 - 2x cos(b) + x^2) / (k sin(b) - cos(b) + x).
double corner_term(const FanConfig& g) {
  const double sb = std::sin(g.beta), cb = std::cos(g.beta);
  const double den = g.slope_k * sb - cb + g.x;
  return g.F1mag * (sb * g.slope_k - cb) * (1 - 2 * g.x * cb + g.x * g.x) / den;
}

Extrapolated richardson(const std::function<double(double)>& g) {
  constexpr int L = 5;
  constexpr double h0 = 1e-3;
  double T[L][L] = {};
  for (int i = 0; i < L; ++i) {
    T[i][0] = g(h0 / std::pow(2.0, i));
    for (int j = 1; j <= i; ++j) {
      const double p = std::pow(2.0, j);
      T[i][j] = (p * T[i][j - 1] - T[i - 1][j - 1]) / (p - 1);
    }
  }
  Extrapolated e{T[L - 1][L - 1], std::abs(T[L - 1][L - 1] - T[L - 2][L - 2])};
  if (!std::isfinite(e.value) || e.error > 1e-4 * std::max(1.0, std::abs(e.value)))
    throw VerificationError("fan: Richardson extrapolation did not converge");
  return e;
}

}  // namespace

std::string to_string(FanCase c) {
  switch (c) {
    case FanCase::Case1: return "case1";
    case FanCase::Case2: return "case2";
    case FanCase::Case3: return "case3";
    case FanCase::FourSpringAcute: return "four-spring-acute";
  }
  return "?";
}

FanCase fan_case_from_string(const std::string& s) {
  if (s == "case1" || s == "1") return FanCase::Case1;
  if (s == "case2" || s == "2") return FanCase::Case2;
  if (s == "case3" || s == "3") return FanCase::Case3;
  if (s == "four-spring-acute" || s == "four") return FanCase::FourSpringAcute;
  throw SchemaError("unknown fan case '" + s + "'");
}

double fan_slope(double alpha, double beta, double x, FanCase c) {
  if (c == FanCase::FourSpringAcute) throw PreconditionError("fan: no fan formula for the four-spring case");
  require_domain(alpha, beta, c);
  if (!(x > 0)) throw PreconditionError("fan: offset x must be positive");
  return slope_unchecked(alpha, beta, x, c);
}

FanConfig fan_config(double alpha, double beta, double x, FanCase c) {
  FanConfig g;
  g.alpha = alpha;
  g.beta = beta;
  g.x = x;
  g.slope_k = fan_slope(alpha, beta, x, c);
  g.Omega = std::atan(g.slope_k);
  if (c == FanCase::Case3) {
    g.F1mag = std::cos(alpha) / std::cos(alpha + beta);
    g.F2mag = std::sin(beta) / std::cos(alpha + beta);
  } else {
    g.F1mag = std::sin(alpha) / std::sin(alpha + beta);
    g.F2mag = std::sin(beta) / std::sin(alpha + beta);
  }
  if (!(g.slope_k * std::sin(beta) - std::cos(beta) + x > 0))
    throw PreconditionError("fan: offset lies beyond the singular denominator");
  return g;
}

double mass_original(double alpha, double beta, FanCase c) {
  if (c == FanCase::FourSpringAcute) throw PreconditionError("fan: no three-spring mass for the four-spring case");
  require_domain(alpha, beta, c);
  if (c == FanCase::Case3)
    return 1 + (std::cos(alpha) + std::sin(beta)) / std::cos(alpha + beta);
  return 1 + (std::sin(alpha) + std::sin(beta)) / std::sin(alpha + beta);
}

double mass_fan(const FanConfig& g, FanCase c) {
  const double sa = std::sin(g.alpha), ca = std::cos(g.alpha), sb = std::sin(g.beta);
  const double x = g.x, k = g.slope_k;
  const double hyp = std::sqrt(1 + k * k);
  if (c == FanCase::Case3) {
    const double f = -g.F1mag - x + g.F2mag * sa * x + 2 * g.F2mag * ca * x * (g.Omega - g.alpha) +
                     corner_term(g) + g.F2mag * (sb * hyp - k * ca * x);
    return f + 1 + g.F1mag + g.F2mag;
  }
  return (1 - x) + g.F2mag * (1 - x * ca) + 2 * (kHalfPi + g.Omega - g.alpha) * g.F2mag * sa * x +
         corner_term(g) + g.F2mag * (sb * hyp - k * sa * x);
}

double mass_fan_case1_as_printed(const FanConfig& g) {
  const double sa = std::sin(g.alpha), ca = std::cos(g.alpha), sb = std::sin(g.beta);
  const double x = g.x, k = g.slope_k;
  return g.F1mag * (1 - x) + g.F1mag * (1 - x * ca) + 2 * (kHalfPi + g.Omega - g.alpha) * g.F2mag * sa * x +
         corner_term(g) + g.F2mag * (sb * std::sqrt(1 + k * k) - k * sa * x);
}

double fan_difference(double alpha, double beta, double x, FanCase c) {
  return mass_fan(fan_config(alpha, beta, x, c), c) - mass_original(alpha, beta, c);
}

Extrapolated fprime_at_zero(double alpha, double beta, FanCase c) {
  require_domain(alpha, beta, c);
  return richardson([&](double x) { return fan_difference(alpha, beta, x, c) / x; });
}

Extrapolated limit_at_zero(double alpha, double beta, FanCase c) {
  require_domain(alpha, beta, c);
  return richardson([&](double x) { return fan_difference(alpha, beta, x, c); });
}

InequalityResult check_inequality(FanCase c, double alpha, double beta) {
  require_domain(alpha, beta, c);
  InequalityResult r;
  switch (c) {
    case FanCase::Case1:
      r.lhs = (kPi - alpha - beta) * std::sin(alpha) * std::sin(beta);
      r.rhs = std::sin(alpha + beta);
      break;
    case FanCase::Case2:
      r.lhs = (kHalfPi - beta) * std::sin(beta);
      r.rhs = std::sin(kHalfPi + beta);
      break;
    case FanCase::Case3:
      r.lhs = std::cos(alpha) * std::sin(beta) * (kHalfPi - alpha - beta);
      r.rhs = std::cos(alpha + beta);
      break;
    case FanCase::FourSpringAcute:
      r.lhs = (kPi - 2 * beta + std::cos(beta)) * std::sin(beta);
      r.rhs = 3 * std::cos(beta);
      break;
  }
  r.margin = r.rhs - r.lhs;
  r.holds = r.margin > 0;
  return r;
}

double sample_x(double alpha, double beta) {
  if (!(alpha > 0 && beta > 0 && alpha + beta < kHalfPi))
    throw PreconditionError("sample_x: requires alpha, beta > 0 and alpha + beta < pi/2");
  const double num = std::cos((alpha + beta) / 2) - std::sin((alpha + beta) / 2);
  const double den = std::cos((alpha - beta) / 2) - std::sin((alpha - beta) / 2);
  return 0.01 * std::cos(beta) * beta * num / den;
}

FourSpringSplit four_spring_split(const Vec& F1, const Vec& F2, const Vec& F3, const Vec& F4, double c,
                                  double tol) {
  const auto n = F1.size();
  if (F2.size() != n || F3.size() != n || F4.size() != n)
    throw SchemaError("four_spring_split: forces have different dimensions");
  const double scale = std::max({F1.norm(), F2.norm(), F3.norm(), F4.norm(), 1e-300});
  if ((F1 + F2 + F3 + F4).norm() > tol * scale)
    throw PreconditionError("four_spring_split: forces do not sum to zero");
  if (!(c > 0)) throw PreconditionError("four_spring_split: c must be positive");
  Mat M(n, 2);
  M << F2, F3;
  Eigen::ColPivHouseholderQR<Mat> qr(M);
  qr.setThreshold(1e-9);
  if (qr.rank() < 2) throw PreconditionError("four_spring_split: F2 and F3 are linearly dependent");
  const Vec ab = qr.solve(-F1);
  if ((M * ab + F1).norm() > 1e3 * tol * scale)
    throw PreconditionError("four_spring_split: F1 is not in the span of F2 and F3");
  FourSpringSplit s;
  s.a = ab(0);
  s.b = ab(1);
  const double top = std::max(s.a, s.b);
  s.c = (top * c >= 1) ? 0.5 / top : c;
  s.subsystemA = {s.c * F1, s.c * s.a * F2, s.c * s.b * F3};
  s.subsystemB = {(1 - s.c) * F1, (1 - s.c * s.a) * F2, (1 - s.c * s.b) * F3, F4};
  return s;
}

SignConvention sign_convention_from_string(const std::string& s) {
  if (s == "compress-positive") return SignConvention::CompressPositive;
  if (s == "stretch-positive") return SignConvention::StretchPositive;
  throw SchemaError("unknown sign convention '" + s + "'");
}

std::vector<AuditViolation> perpendicularity_audit(const TrussSolution& ts, const GroundStructure& gs,
                                                   double angle_tol, SignConvention sign,
                                                   double force_tol, double drop) {
  if (ts.lambda.size() != gs.edges.size()) throw SchemaError("audit: lambda/edge count mismatch");
  const int N = static_cast<int>(gs.nodes.size());
  double lmax = 0;
  for (double l : ts.lambda) lmax = std::max(lmax, std::abs(l));
  std::vector<std::vector<int>> incident(static_cast<size_t>(N));
  for (size_t e = 0; e < gs.edges.size(); ++e) {
    if (std::abs(ts.lambda[e]) <= drop * std::max(1.0, lmax)) continue;
    incident[static_cast<size_t>(gs.edges[e].first)].push_back(static_cast<int>(e));
    incident[static_cast<size_t>(gs.edges[e].second)].push_back(static_cast<int>(e));
  }
  // The spring tensor is -lambda u u^T; under compress-positive a positive eigenvalue
  // (lambda < 0) is compressed.
  auto compressed = [&](int e) {
    const bool eig_positive = ts.lambda[static_cast<size_t>(e)] < 0;
    return sign == SignConvention::CompressPositive ? eig_positive : !eig_positive;
  };
  auto outward = [&](int node, int e) {
    const auto [i, j] = gs.edges[static_cast<size_t>(e)];
    const int other = (i == node) ? j : i;
    return Vec((gs.nodes[static_cast<size_t>(other)] - gs.nodes[static_cast<size_t>(node)]).normalized());
  };
  const auto net = truss_boundary(ts, gs);
  std::vector<AuditViolation> out;
  for (int v = 0; v < N; ++v) {
    if (gs.is_support(v) || gs.load_at(v).norm() > 0) continue;
    const auto& inc = incident[static_cast<size_t>(v)];
    if (inc.empty()) continue;
    for (size_t p = 0; p < inc.size(); ++p)
      for (size_t q = p + 1; q < inc.size(); ++q) {
        if (compressed(inc[p]) == compressed(inc[q])) continue;
        const double cosang = std::clamp(outward(v, inc[p]).dot(outward(v, inc[q])), -1.0, 1.0);
        const double ang = std::acos(cosang);
        if (std::abs(ang - kHalfPi) > angle_tol) out.push_back({"angle", v, inc[p], inc[q], ang, 0.0});
      }
    const double f = net[static_cast<size_t>(v)].second.norm();
    if (f > force_tol * std::max(1.0, lmax)) out.push_back({"net-force", v, -1, -1, 0.0, f});
  }
  return out;
}

}  // namespace sc
