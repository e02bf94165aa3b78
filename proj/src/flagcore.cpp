#include "flagfold/flagcore.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace flagfold {

Vector lambda_to_mu(const Vector& lambda) {
  require(lambda.size() > 0, "lambda_to_mu: empty input");
  require(is_nonincreasing(lambda), "lambda_to_mu: eigenvalues must be nonincreasing");
  require((lambda.array() >= 0.0).all(), "lambda_to_mu: eigenvalues must be nonnegative");
  require(std::abs(lambda.sum() - 1.0) <= 1e-12, "lambda_to_mu: eigenvalues must sum to 1");

  const Eigen::Index n = lambda.size();
  Vector mu(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    mu[k] = static_cast<double>(k + 1) * (lambda[k] - lambda[k + 1]);
  mu[n - 1] = static_cast<double>(n) * lambda[n - 1];
  return mu;
}

Vector mu_to_lambda(const Vector& mu) {
  require(is_simplex_point(mu), "mu_to_lambda: input is not a simplex point");

  const Eigen::Index n = mu.size();
  Vector lambda(n);
  double tail = 0.0;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    tail += mu[k] / static_cast<double>(k + 1);
    lambda[k] = tail;
  }
  return lambda;
}

FlagType type_of(const Vector& mu, double zero_tol) {
  require(zero_tol >= 0.0, "type_of: zero_tol must be nonnegative");
  require(mu.size() > 0, "type_of: empty input");

  const int n = static_cast<int>(mu.size());
  std::vector<int> support;  // 1-based indices with mu_i > zero_tol
  for (int i = 0; i < n; ++i)
    if (mu[i] > zero_tol) support.push_back(i + 1);
  require(!support.empty(), "type_of: all entries below zero_tol");

  // Increments between support indices; a trailing zero block, if any,
  // contributes one extra part of size n - max(support).
  FlagType I;
  int prev = 0;
  for (int d : support) {
    I.parts.push_back(d - prev);
    prev = d;
  }
  if (prev < n) I.parts.push_back(n - prev);
  return I;
}

bool is_cov_matrix(const Matrix& S, double sym_tol, double eig_tol, double trace_tol) {
  if (!is_symmetric(S, sym_tol)) return false;
  if (std::abs(S.trace() - 1.0) > trace_tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return false;
  return solver.eigenvalues().minCoeff() >= -eig_tol;
}

FlagRep decompose(const Matrix& S, double zero_tol) {
  require(S.rows() == S.cols() && S.rows() > 0, "decompose: matrix must be square");
  require(is_symmetric(S), "decompose: matrix must be symmetric");
  require(std::abs(S.trace() - 1.0) <= 1e-12, "decompose: trace must be 1");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(S);
  if (solver.info() != Eigen::Success)
    throw numerical_error("decompose: eigen-solver did not converge");

  // Eigen sorts increasingly; reverse to the nonincreasing convention.
  Vector lambda = solver.eigenvalues().reverse();
  Matrix U = solver.eigenvectors().rowwise().reverse();

  require(lambda.minCoeff() >= -1e-10, "decompose: matrix is not positive semidefinite");
  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();

  (void)zero_tol;  // ordering inside an eigenvalue cluster is solver-defined
  return FlagRep{lambda_to_mu(lambda), std::move(U)};
}

Matrix compose(const FlagRep& rep) {
  require(rep.mu.size() == rep.frame.rows(), "compose: size mismatch between mu and frame");
  require(is_orthogonal(rep.frame), "compose: frame is not orthogonal");
  const Vector lambda = mu_to_lambda(rep.mu);
  return rep.frame * lambda.asDiagonal() * rep.frame.transpose();
}

double dimension(const Vector& mu) {
  require(is_simplex_point(mu), "dimension: input is not a simplex point");
  double d = 0.0;
  for (Eigen::Index k = 0; k < mu.size(); ++k) d += static_cast<double>(k + 1) * mu[k];
  return d;
}

Matrix sbar(const Matrix& S, double zero_tol) {
  const FlagRep rep = decompose(S, zero_tol);
  const Eigen::Index n = rep.mu.size();
  // Same eigenvectors, eigenvalues replaced by the tail sums of mu.
  Vector bar(n);
  double tail = 0.0;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    tail += rep.mu[k];
    bar[k] = tail;
  }
  return rep.frame * bar.asDiagonal() * rep.frame.transpose();
}

Matrix embed_grassmannian(const Matrix& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index d = basis.cols();
  require(d >= 1 && d <= n, "embed_grassmannian: need 1 <= d <= n");
  require((basis.transpose() * basis - Matrix::Identity(d, d)).norm() <= 1e-10,
          "embed_grassmannian: columns are not orthonormal");
  return (basis * basis.transpose()) / static_cast<double>(d);
}

Matrix canonicalize_signs(const Matrix& frame) {
  Matrix out = frame;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      if (std::abs(out(i, j)) > 1e-9) {
        if (out(i, j) < 0.0) out.col(j) *= -1.0;
        break;
      }
    }
  }
  return out;
}

}  // namespace flagfold
