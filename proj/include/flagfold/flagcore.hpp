#ifndef FLAGFOLD_FLAGCORE_HPP
#define FLAGFOLD_FLAGCORE_HPP

#include "flagfold/types.hpp"

namespace flagfold {

/// Default threshold separating genuine zero weights from eigen-solver noise.
inline constexpr double kDefaultZeroTol = 1e-9;

/// Linear bijection from nonincreasing eigenvalues to simplex weights:
/// mu_k = k (lambda_k - lambda_{k+1}) for k < n, mu_n = n lambda_n.
Vector lambda_to_mu(const Vector& lambda);

/// Inverse bijection: lambda_k = sum_{i >= k} mu_i / i.
Vector mu_to_lambda(const Vector& mu);

/// Type of the flag read off the support of mu. Entries <= zero_tol count as
/// zero; fails when every entry does.
FlagType type_of(const Vector& mu, double zero_tol = kDefaultZeroTol);

/// Eigen-decompose a trace-one PSD matrix into a weighted-flag representative.
/// Columns of the frame are ordered by nonincreasing eigenvalue; eigenvalues
/// in [-1e-10, 0) are clamped to zero and the spectrum renormalized.
FlagRep decompose(const Matrix& S, double zero_tol = kDefaultZeroTol);

/// Rebuild the matrix U diag(lambda) U^T from a representative.
Matrix compose(const FlagRep& rep);

/// Linear dimension sum_k k mu_k, valued in [1, n].
double dimension(const Vector& mu);

/// Replace each eigenvalue ladder step by its projector weight:
/// Sbar = sum_k mu_k(S) Pi_{E_k(S)}; same eigenvectors, trace = dimension.
Matrix sbar(const Matrix& S, double zero_tol = kDefaultZeroTol);

/// Embed a d-plane (given by an orthonormal n x d basis) as (1/d) Pi_E.
Matrix embed_grassmannian(const Matrix& basis);

/// Flip frame columns so the first entry larger than 1e-9 in magnitude is
/// positive. Text-output reproducibility only; represents the same flag.
Matrix canonicalize_signs(const Matrix& frame);

/// Checks symmetry, near-positive spectrum and unit trace.
bool is_cov_matrix(const Matrix& S, double sym_tol = 1e-12, double eig_tol = 1e-10,
                   double trace_tol = 1e-12);

}  // namespace flagfold

#endif
