#ifndef FLAGFOLD_MEASURES_HPP
#define FLAGFOLD_MEASURES_HPP

#include "flagfold/flagcore.hpp"
#include "flagfold/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace flagfold {

/// Atom of a point-cloud flagfold: position, trace-one PSD direction matrix,
/// nonnegative mass. Atom lists are immutable snapshots; every operation
/// below is a pure reduction over atoms in fixed order.
struct FlagfoldAtom {
  Vector x;
  Matrix S;
  double mass = 0.0;
};

struct PointCloudFlagfold {
  int dim = 0;
  std::vector<FlagfoldAtom> atoms;
};

/// Atom of a point-cloud d-varifold: position, orthonormal n x d basis, mass.
struct VarifoldAtom {
  Vector x;
  Matrix basis;
  double mass = 0.0;
};

struct PointCloudVarifold {
  int dim = 0;  // ambient dimension n
  int d = 0;    // plane dimension
  std::vector<VarifoldAtom> atoms;
};

struct WeightedPoint {
  Vector x;
  double mass = 0.0;
};

/// C^1 vector field with its analytic Jacobian.
struct VectorFieldWithJacobian {
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;
};

/// Diffeomorphism (on the region of interest) with its analytic Jacobian.
struct MapWithJacobian {
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;
};

/// Even nonnegative profile supported on (-1, 1).
using KernelProfile = std::function<double(double)>;

KernelProfile indicator_kernel();
KernelProfile bump_kernel();
KernelProfile kernel_by_name(const std::string& name);

/// Spatial marginal: positions with summed masses, atoms at equal positions
/// merged, first-occurrence order.
std::vector<WeightedPoint> mass(const PointCloudFlagfold& W);

/// Local normalized covariance at x and scale eta:
/// sum m w(|y-x|/eta) ((y-x)/eta) ox ((y-x)/eta) over
/// sum m w(|y-x|/eta) |(y-x)/eta|^2. Throws empty_neighborhood when no point
/// carries kernel weight at a nonzero offset.
Matrix local_covariance(const std::vector<WeightedPoint>& points, const Vector& x, double eta,
                        const KernelProfile& kernel);

/// Each d-plane becomes the weighted flag (1/d) Pi_P; masses unchanged.
PointCloudFlagfold varifold_to_flagfold(const PointCloudVarifold& V);

/// Level-d slice: atom (x, S, m) contributes (x, E_d(S), m mu_d(S)) whenever
/// mu_d(S) exceeds zero_tol. The result may be empty.
PointCloudVarifold flagfold_to_varifolds(const PointCloudFlagfold& W, int d,
                                         double zero_tol = kDefaultZeroTol);

/// Mass-weighted average of the linear dimension over the atoms at x.
double dimension_field(const PointCloudFlagfold& W, const Vector& x);

/// Push-forward: atom (x, S, m) yields one atom per active weight mu_k, at
/// phi(x), with flag (1/k) Pi_{DPhi(x) E_k(S)} and mass m mu_k J, J the
/// k-Jacobian of DPhi restricted to E_k. Atoms landing at the same image
/// position are kept as a mixture.
PointCloudFlagfold pushforward(const PointCloudFlagfold& W, const MapWithJacobian& phi,
                               double zero_tol = kDefaultZeroTol);

/// First variation sum_atoms m tr(Sbar DX(x)).
double first_variation(const PointCloudFlagfold& W, const VectorFieldWithJacobian& X);

/// e^(Lambda rho) rho^(-d*) ||W||(B_rho(x)) per radius; closed balls.
std::vector<double> monotonicity_ratio(const PointCloudFlagfold& W, const Vector& x,
                                       double d_star, double Lambda,
                                       const std::vector<double>& radii);

// Built-in vector fields exposed by name through the CLI.
VectorFieldWithJacobian affine_field(const Matrix& A, const Vector& b);
VectorFieldWithJacobian radial_field(const Vector& center);
VectorFieldWithJacobian bump_field(int component, const Vector& center, double radius,
                                   double amplitude);

}  // namespace flagfold

#endif
