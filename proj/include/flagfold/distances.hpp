#ifndef FLAGFOLD_DISTANCES_HPP
#define FLAGFOLD_DISTANCES_HPP

#include "flagfold/types.hpp"

namespace flagfold {

/// Canonical angles between two subspaces, largest first, each in [0, pi/2].
struct PrincipalAngles {
  Vector angles;
};

/// Frobenius distance sqrt(tr((A-B)^2)) between symmetric matrices.
double euclidean_distance(const Matrix& A, const Matrix& B);

/// Principal angles between the column spans of two orthonormal frames,
/// via singular values of E^T F. Cosines are clamped to [0, 1] and angles
/// below 1e-8 snapped to zero.
PrincipalAngles principal_angles(const Matrix& E, const Matrix& F);

/// Geodesic distance sqrt(sum theta_k^2) on the Grassmannian of i-planes;
/// divided by sqrt(i) when normalized, so the diameter stays below 2.
double grassmann_distance(const Matrix& E, const Matrix& F, bool normalized);

/// Sum over levels of |alpha_i - beta_i| + min(alpha_i, beta_i) d_i, with d_i
/// the normalized Grassmann distance between the spans of the leading i
/// columns.
double krakus_distance(const FlagRep& X, const FlagRep& Y);

/// Cone distance sqrt(sum alpha_i^2 + beta_i^2 - 2 alpha_i beta_i cos d_i)
/// over the same per-level data as the Krakus distance.
double conic_distance(const FlagRep& X, const FlagRep& Y);

}  // namespace flagfold

#endif
