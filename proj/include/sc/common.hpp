#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Input violates a documented precondition (CLI exit code 2).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A construction produced a result that failed its own self-check (CLI exit code 3).
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed document or shape mismatch at an API boundary (CLI exit code 4).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTol = 1e-9;

inline Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}

/// Uniform vector in [-1,1]^n.
inline Vec random_vec(int n, Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * u(rng);
  return v;
}

}  // namespace sc
