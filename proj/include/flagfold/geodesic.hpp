#ifndef FLAGFOLD_GEODESIC_HPP
#define FLAGFOLD_GEODESIC_HPP

#include "flagfold/riemann.hpp"
#include "flagfold/types.hpp"

#include <utility>
#include <vector>

namespace flagfold {

/// Point of a geodesic trajectory; B is the current frame velocity U^T U'.
struct GeodesicState {
  double t = 0.0;
  Vector mu;
  Vector mu_dot;
  Matrix U;
  Matrix B;
};

enum class Termination { horizon_reached, boundary_hit, step_failure };

struct Trajectory {
  std::vector<GeodesicState> states;
  Matrix C0;  // momentum coefficients f(mu_{i->j}(0))^2 b_ij(0)
  double h = 0.0;
  Termination termination = Termination::horizon_reached;
};

inline constexpr double kDefaultSingularTol = 1e-8;
inline constexpr double kDefaultMuMin = 1e-3;

/// Right-hand side of the weight equation:
/// mu_k'' = (1/n) sum_{l != k} T_l - ((n-1)/n) T_k with
/// T_l = 2 sum_{i <= l < j} f(mu_{i->j}) d_l f(mu_{i->j}) b_ij^2,
/// the frame energy counting both triangles of the skew velocity.
/// Components sum to zero by construction.
Vector mu_acceleration(const Vector& mu, const Matrix& B, const PinchFunction& f);

/// Momentum coefficients C with c_ij = f(mu_{i->j})^2 b_ij.
Matrix momentum_coefficients(const Vector& mu, const Matrix& B, const PinchFunction& f);

/// Velocity recovered from the conserved momentum:
/// b_ij = f(mu_{i->j})^{-2} (U^T U0 C0 U0^T U)_ij. Throws singular_pinch when
/// some pinch value drops below singular_tol: the trajectory is leaving the
/// region where this division is meaningful.
Matrix recover_B(const Vector& mu, const Matrix& U, const Matrix& U0, const Matrix& C0,
                 const PinchFunction& f, double singular_tol = kDefaultSingularTol);

/// Matrix exponential of a skew-symmetric matrix; exactly the identity for
/// zero input, orthogonal to machine precision otherwise.
Matrix expm_skew(const Matrix& A);

/// Explicit first-order shooting loop: per step, recover B, advance mu by
/// h mu', advance mu' by h mu'', advance U by exp(h B). Stops with
/// boundary_hit once some weight falls to mu_min, with step_failure on
/// singular pinch values or invariant drift beyond 1e-6.
Trajectory shoot(const GeodesicState& init, double h, long max_steps, const PinchFunction& f,
                 double mu_min = kDefaultMuMin, double singular_tol = kDefaultSingularTol);

/// U C U^T for the current state; constant along exact geodesics and, by
/// construction of recover_B, along shot trajectories up to rounding.
Matrix conserved_momentum(const GeodesicState& state, const PinchFunction& f);

/// Linear interpolation between two covariance matrices, eigen-decomposed at
/// each of the N+1 uniform interpolation times.
std::vector<FlagRep> euclidean_geodesic(const Matrix& A0, const Matrix& A1, int steps);

/// Visualization ellipsoid for n = 3: axes along the frame columns, semi-axis
/// lengths sqrt(3 lambda_i).
struct EllipsoidFrame {
  Matrix axes;
  Vector lengths;
};

std::vector<EllipsoidFrame> ellipsoid_frames(const Trajectory& traj);

/// Per state: angle between the initial and current first columns, and the
/// largest principal angle between the initial and current leading 2-planes.
/// Defined for n = 3.
std::vector<std::pair<double, double>> angle_diagnostics(const Trajectory& traj);

}  // namespace flagfold

#endif
