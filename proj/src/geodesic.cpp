#include "flagfold/geodesic.hpp"

#include "flagfold/distances.hpp"
#include "flagfold/flagcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace flagfold {

namespace {

/// Tail sums lambda_k = sum_{i>=k} mu_i / i without simplex validation;
/// trajectory states satisfy the simplex constraint only up to drift.
Vector lambda_of(const Vector& mu) {
  Vector lambda(mu.size());
  double tail = 0.0;
  for (Eigen::Index k = mu.size() - 1; k >= 0; --k) {
    tail += mu[k] / static_cast<double>(k + 1);
    lambda[k] = tail;
  }
  return lambda;
}

Matrix recover_from_ambient(const Vector& mu, const Matrix& U, const Matrix& ambient,
                            const PinchFunction& f, double singular_tol) {
  const int n = static_cast<int>(mu.size());
  const Matrix M = U.transpose() * ambient * U;  // skew, conjugate of a skew matrix
  Matrix B = Matrix::Zero(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double fij = f.value(mu_slice(mu, i, j));
      if (!(fij > singular_tol))
        throw singular_pinch("recover_B: pinch value below singular tolerance at pair (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
      const double w = 1.0 / (fij * fij);
      B(i - 1, j - 1) = w * M(i - 1, j - 1);
      B(j - 1, i - 1) = w * M(j - 1, i - 1);
    }
  return B;
}

}  // namespace

Vector mu_acceleration(const Vector& mu, const Matrix& B, const PinchFunction& f) {
  const int n = static_cast<int>(mu.size());
  require(n >= 1, "mu_acceleration: empty weights");
  require((mu.array() > 0.0).all(), "mu_acceleration: weights must be interior");
  require(B.rows() == n && B.cols() == n, "mu_acceleration: B size mismatch");
  require(is_skew(B, 1e-10), "mu_acceleration: B is not skew-symmetric");

  // T_l = sum over pairs (i,j) with i <= l < j of f(mu_{i->j}) d_l f(mu_{i->j}) b_ij^2.
  // The frame energy counts both triangles of the skew matrix (full sum over
  // ordered pairs), hence the factor 2; this is the convention the reference
  // trajectories of the shooting scheme follow.
  Vector T = Vector::Zero(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double b = B(i - 1, j - 1);
      if (b == 0.0) continue;
      const Vector slice = mu_slice(mu, i, j);
      const double fij = f.value(slice);
      const Vector grad = f.gradient(slice);
      for (int l = i; l < j; ++l) T[l - 1] += 2.0 * fij * grad[l - 1] * b * b;
    }

  const double total = T.sum();
  Vector acc(n);
  for (int k = 0; k < n; ++k) acc[k] = total / static_cast<double>(n) - T[k];
  return acc;
}

Matrix momentum_coefficients(const Vector& mu, const Matrix& B, const PinchFunction& f) {
  const int n = static_cast<int>(mu.size());
  require(B.rows() == n && B.cols() == n, "momentum_coefficients: B size mismatch");
  require(is_skew(B, 1e-10), "momentum_coefficients: B is not skew-symmetric");
  Matrix C = Matrix::Zero(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double fij = f.value(mu_slice(mu, i, j));
      C(i - 1, j - 1) = fij * fij * B(i - 1, j - 1);
      C(j - 1, i - 1) = -C(i - 1, j - 1);
    }
  return C;
}

Matrix recover_B(const Vector& mu, const Matrix& U, const Matrix& U0, const Matrix& C0,
                 const PinchFunction& f, double singular_tol) {
  require(is_orthogonal(U, 1e-8) && is_orthogonal(U0, 1e-8), "recover_B: frames not orthogonal");
  require(is_skew(C0, 1e-10), "recover_B: C0 is not skew-symmetric");
  return recover_from_ambient(mu, U, U0 * C0 * U0.transpose(), f, singular_tol);
}

Matrix expm_skew(const Matrix& A) {
  require(A.rows() == A.cols(), "expm_skew: matrix must be square");
  require(is_skew(A, 1e-12), "expm_skew: matrix is not skew-symmetric");
  if (A.norm() == 0.0) return Matrix::Identity(A.rows(), A.cols());
  return A.exp();
}

Trajectory shoot(const GeodesicState& init, double h, long max_steps, const PinchFunction& f,
                 double mu_min, double singular_tol) {
  const int n = static_cast<int>(init.mu.size());
  require(h > 0.0, "shoot: step must be positive");
  require(max_steps >= 0, "shoot: negative step count");
  require(mu_min > 0.0, "shoot: mu_min must be positive");
  require(std::abs(init.mu.sum() - 1.0) <= 1e-9, "shoot: initial weights do not sum to 1");
  require((init.mu.array() > mu_min).all(), "shoot: initial weights must exceed mu_min");
  require(init.mu_dot.size() == n && std::abs(init.mu_dot.sum()) <= 1e-9,
          "shoot: initial weight velocity must sum to 0");
  require(is_orthogonal(init.U, 1e-8), "shoot: initial frame is not orthogonal");
  require(is_skew(init.B, 1e-10), "shoot: initial velocity is not skew-symmetric");

  Trajectory traj;
  traj.h = h;
  traj.C0 = momentum_coefficients(init.mu, init.B, f);
  const Matrix ambient = init.U * traj.C0 * init.U.transpose();

  GeodesicState s = init;
  s.t = 0.0;
  traj.states.reserve(static_cast<std::size_t>(max_steps) + 1);
  traj.states.push_back(s);

  for (long p = 0; p < max_steps; ++p) {
    GeodesicState next;
    next.t = s.t + h;
    next.mu = s.mu + h * s.mu_dot;
    next.mu_dot = s.mu_dot + h * mu_acceleration(s.mu, s.B, f);
    next.U = s.U * expm_skew(h * s.B);

    const bool boundary = next.mu.minCoeff() <= mu_min;
    try {
      next.B = recover_from_ambient(next.mu, next.U, ambient, f, singular_tol);
    } catch (const singular_pinch&) {
      if (!boundary) {
        traj.termination = Termination::step_failure;
        return traj;
      }
      next.B = Matrix::Zero(n, n);  // stopping here anyway
    }

    traj.states.push_back(next);

    if (std::abs(next.mu.sum() - 1.0) > 1e-6 || std::abs(next.mu_dot.sum()) > 1e-6 ||
        (next.U.transpose() * next.U - Matrix::Identity(n, n)).norm() > 1e-6) {
      traj.termination = Termination::step_failure;
      return traj;
    }
    if (boundary) {
      traj.termination = Termination::boundary_hit;
      return traj;
    }
    s = std::move(next);
  }
  traj.termination = Termination::horizon_reached;
  return traj;
}

Matrix conserved_momentum(const GeodesicState& state, const PinchFunction& f) {
  const Matrix C = momentum_coefficients(state.mu, state.B, f);
  return state.U * C * state.U.transpose();
}

std::vector<FlagRep> euclidean_geodesic(const Matrix& A0, const Matrix& A1, int steps) {
  require(steps >= 1, "euclidean_geodesic: need at least one step");
  require(A0.rows() == A1.rows() && A0.cols() == A1.cols(),
          "euclidean_geodesic: endpoint sizes differ");
  std::vector<FlagRep> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  for (int p = 0; p <= steps; ++p) {
    const double t = static_cast<double>(p) / static_cast<double>(steps);
    path.push_back(decompose((1.0 - t) * A0 + t * A1));
  }
  return path;
}

std::vector<EllipsoidFrame> ellipsoid_frames(const Trajectory& traj) {
  require(!traj.states.empty() && traj.states.front().mu.size() == 3,
          "ellipsoid_frames: defined for n = 3 only");
  std::vector<EllipsoidFrame> frames;
  frames.reserve(traj.states.size());
  for (const GeodesicState& s : traj.states) {
    const Vector lambda = lambda_of(s.mu);
    frames.push_back({s.U, (3.0 * lambda.cwiseMax(0.0)).cwiseSqrt()});
  }
  return frames;
}

std::vector<std::pair<double, double>> angle_diagnostics(const Trajectory& traj) {
  require(!traj.states.empty() && traj.states.front().mu.size() == 3,
          "angle_diagnostics: defined for n = 3 only");
  const Matrix& U0 = traj.states.front().U;
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.states.size());
  for (const GeodesicState& s : traj.states) {
    const double theta1 = principal_angles(U0.leftCols(1), s.U.leftCols(1)).angles[0];
    const Vector a2 = principal_angles(U0.leftCols(2), s.U.leftCols(2)).angles;
    out.emplace_back(theta1, a2[0]);
  }
  return out;
}

}  // namespace flagfold
