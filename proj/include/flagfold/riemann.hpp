#ifndef FLAGFOLD_RIEMANN_HPP
#define FLAGFOLD_RIEMANN_HPP

#include "flagfold/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace flagfold {

/// Pinch profile f: [0,1]^n -> R+ vanishing exactly at 0, with its gradient
/// away from 0. Both callables must be pure so values can be shared across
/// threads.
struct PinchFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::string name;
};

/// f(nu) = |nu| / 4, the profile used throughout the numerical experiments.
PinchFunction quarter_norm_pinch();

/// f(nu) = |nu|.
PinchFunction norm_pinch();

PinchFunction default_pinch();

/// Lookup by the names accepted in run configs: "quarter-norm" or "norm".
PinchFunction pinch_by_name(const std::string& name);

/// Tangent vector to a cell: weight direction with zero sum plus a skew
/// frame direction B = U^T X.
struct TangentVector {
  Vector alpha;
  Matrix B;
};

/// Slice (0,...,0, mu_i, ..., mu_{j-1}, 0,...,0) feeding the pinch weights;
/// indices are 1-based with i < j.
Vector mu_slice(const Vector& mu, int i, int j);

/// Pinched metric sum alpha_i beta_i + sum_{i<j} f(mu_{i->j})^2 b_ij c_ij.
/// Tangents must lie in the horizontal space of type_of(mu): entries of B
/// inside diagonal blocks are rejected.
double metric_eval(const Vector& mu, const TangentVector& T1, const TangentVector& T2,
                   const PinchFunction& f);

/// First-order skew estimate of U^T U' from consecutive frames.
Matrix discrete_frame_velocity(const Matrix& U, const Matrix& U_next, double h);

/// Length of a uniformly sampled path by midpoint quadrature of
/// sqrt(|mu'|^2 + sum f(mu_{i->j})^2 (U^T U')_ij^2).
double path_length(const std::vector<FlagRep>& samples, double h, const PinchFunction& f);

/// Half the integral of the squared speed, by the same quadrature.
double path_energy(const std::vector<FlagRep>& samples, double h, const PinchFunction& f);

}  // namespace flagfold

#endif
