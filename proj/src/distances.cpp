#include "flagfold/distances.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace flagfold {

namespace {

// Angles below this are rounding noise: arccos amplifies an ulp-level error
// of a singular value near 1 into an angle of order 1e-8.
constexpr double kAngleSnapTol = 1e-7;

void require_orthonormal_columns(const Matrix& E, const char* who) {
  require(E.rows() >= E.cols() && E.cols() >= 1, "principal_angles: bad frame shape");
  if ((E.transpose() * E - Matrix::Identity(E.cols(), E.cols())).norm() > 1e-8)
    throw std::invalid_argument(std::string(who) + ": columns are not orthonormal");
}

bool lexicographically_before(const Matrix& A, const Matrix& B) {
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
      if (A(r, c) < B(r, c)) return true;
      if (A(r, c) > B(r, c)) return false;
    }
  return false;
}

/// Normalized Grassmann distance between the spans of the leading i columns.
/// Arguments are ordered canonically so the value is bit-exact symmetric.
double level_distance(const FlagRep& X, const FlagRep& Y, int i) {
  Matrix E = X.frame.leftCols(i);
  Matrix F = Y.frame.leftCols(i);
  if (lexicographically_before(F, E)) std::swap(E, F);
  return grassmann_distance(E, F, /*normalized=*/true);
}

}  // namespace

double euclidean_distance(const Matrix& A, const Matrix& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), "euclidean_distance: size mismatch");
  return (A - B).norm();
}

PrincipalAngles principal_angles(const Matrix& E, const Matrix& F) {
  require_orthonormal_columns(E, "principal_angles");
  require_orthonormal_columns(F, "principal_angles");
  require(E.rows() == F.rows(), "principal_angles: ambient dimensions differ");

  Eigen::JacobiSVD<Matrix> svd(E.transpose() * F);
  Vector sigma = svd.singularValues();  // nonincreasing
  Vector angles(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    const double c = std::clamp(sigma[sigma.size() - 1 - k], 0.0, 1.0);
    double theta = std::acos(c);
    if (theta < kAngleSnapTol) theta = 0.0;
    angles[k] = theta;
  }
  return PrincipalAngles{std::move(angles)};
}

double grassmann_distance(const Matrix& E, const Matrix& F, bool normalized) {
  require(E.cols() == F.cols(), "grassmann_distance: subspace dimensions differ");
  const PrincipalAngles theta = principal_angles(E, F);
  double d = theta.angles.norm();
  if (normalized) d /= std::sqrt(static_cast<double>(E.cols()));
  return d;
}

double krakus_distance(const FlagRep& X, const FlagRep& Y) {
  require(X.n() == Y.n(), "krakus_distance: ambient dimensions differ");
  require(is_simplex_point(X.mu) && is_simplex_point(Y.mu), "krakus_distance: invalid weights");

  const int n = X.n();
  double d = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double a = X.mu[i - 1];
    const double b = Y.mu[i - 1];
    d += std::abs(a - b);
    const double m = std::min(a, b);
    if (m > 0.0) d += m * level_distance(X, Y, i);
  }
  return d;
}

double conic_distance(const FlagRep& X, const FlagRep& Y) {
  require(X.n() == Y.n(), "conic_distance: ambient dimensions differ");
  require(is_simplex_point(X.mu) && is_simplex_point(Y.mu), "conic_distance: invalid weights");

  const int n = X.n();
  double sq = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double a = X.mu[i - 1];
    const double b = Y.mu[i - 1];
    double term = a * a + b * b;
    if (a * b > 0.0) {
      const double di = std::min(level_distance(X, Y, i), M_PI);
      term -= 2.0 * a * b * std::cos(di);
    } else {
      // cos d_i = 1 contributes nothing when a or b vanishes; (a-b)^2 remains.
      term -= 2.0 * a * b;
    }
    sq += std::max(term, 0.0);
  }
  return std::sqrt(sq);
}

}  // namespace flagfold
