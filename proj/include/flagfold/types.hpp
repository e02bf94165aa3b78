#ifndef FLAGFOLD_TYPES_HPP
#define FLAGFOLD_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace flagfold {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical failure (eigen-solver breakdown, NaN propagation, ...),
/// kept distinct from precondition violations which throw std::invalid_argument.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The pinch value dropped below the singular tolerance: the geodesic is
/// leaving the region where the velocity can be recovered from the momentum.
class singular_pinch : public numerical_error {
public:
  using numerical_error::numerical_error;
};

/// No point carries kernel weight near the evaluation point.
class empty_neighborhood : public numerical_error {
public:
  using numerical_error::numerical_error;
};

/// Ordered dimension increments (p_1, ..., p_r) of a flag; parts sum to n.
struct FlagType {
  std::vector<int> parts;

  int n() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
  }
  int rank() const { return static_cast<int>(parts.size()); }

  /// Cumulative dimensions d_0 = 0 < d_1 < ... < d_r = n.
  std::vector<int> cuts() const {
    std::vector<int> d(parts.size() + 1, 0);
    for (std::size_t k = 0; k < parts.size(); ++k) d[k + 1] = d[k] + parts[k];
    return d;
  }

  bool operator==(const FlagType& other) const { return parts == other.parts; }
};

/// Representative (mu, U) of a weighted flag: simplex weights plus an
/// orthogonal frame whose leading column spans come first.
struct FlagRep {
  Vector mu;
  Matrix frame;

  int n() const { return static_cast<int>(mu.size()); }
};

// --- validation helpers ------------------------------------------------

inline bool is_simplex_point(const Vector& mu, double tol = 1e-12) {
  if (mu.size() == 0) return false;
  if ((mu.array() < 0.0).any()) return false;
  return std::abs(mu.sum() - 1.0) <= tol;
}

inline bool is_nonincreasing(const Vector& v) {
  for (Eigen::Index i = 0; i + 1 < v.size(); ++i)
    if (v[i] < v[i + 1]) return false;
  return true;
}

inline bool is_orthogonal(const Matrix& U, double tol = 1e-10) {
  if (U.rows() != U.cols()) return false;
  return (U.transpose() * U - Matrix::Identity(U.cols(), U.cols())).norm() <= tol;
}

inline bool is_skew(const Matrix& B, double tol = 1e-12) {
  if (B.rows() != B.cols()) return false;
  return (B + B.transpose()).norm() <= tol;
}

inline bool is_symmetric(const Matrix& S, double tol = 1e-12) {
  if (S.rows() != S.cols()) return false;
  return (S - S.transpose()).norm() <= tol;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool is_valid_type(const FlagType& I, int n) {
  if (I.parts.empty()) return false;
  int s = 0;
  for (int p : I.parts) {
    if (p < 1) return false;
    s += p;
  }
  return s == n;
}

}  // namespace flagfold

#endif
