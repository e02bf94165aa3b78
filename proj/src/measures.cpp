#include "flagfold/measures.hpp"

#include <Eigen/QR>

#include <cmath>

namespace flagfold {

KernelProfile indicator_kernel() {
  return [](double s) { return std::abs(s) < 1.0 ? 1.0 : 0.0; };
}

KernelProfile bump_kernel() {
  return [](double s) {
    const double u = std::abs(s);
    if (u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  };
}

KernelProfile kernel_by_name(const std::string& name) {
  if (name == "indicator") return indicator_kernel();
  if (name == "bump") return bump_kernel();
  throw std::invalid_argument("unknown kernel profile: " + name);
}

namespace {

void require_atom(const FlagfoldAtom& a, int dim, const char* who) {
  require(a.x.size() == dim, std::string(who) + ": atom position dimension mismatch");
  require(a.S.rows() == dim && a.S.cols() == dim, std::string(who) + ": atom matrix size mismatch");
  require(a.mass >= 0.0, std::string(who) + ": negative mass");
}

}  // namespace

std::vector<WeightedPoint> mass(const PointCloudFlagfold& W) {
  std::vector<WeightedPoint> out;
  for (const FlagfoldAtom& a : W.atoms) {
    require_atom(a, W.dim, "mass");
    bool merged = false;
    for (WeightedPoint& p : out) {
      if ((p.x.array() == a.x.array()).all()) {
        p.mass += a.mass;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({a.x, a.mass});
  }
  return out;
}

Matrix local_covariance(const std::vector<WeightedPoint>& points, const Vector& x, double eta,
                        const KernelProfile& kernel) {
  require(eta > 0.0, "local_covariance: eta must be positive");
  const Eigen::Index n = x.size();

  Matrix num = Matrix::Zero(n, n);
  double den = 0.0;
  for (const WeightedPoint& p : points) {
    require(p.x.size() == n, "local_covariance: point dimension mismatch");
    const Vector z = (p.x - x) / eta;
    const double z2 = z.squaredNorm();
    if (z2 == 0.0) continue;  // zero offset carries no directional information
    const double w = p.mass * kernel(std::sqrt(z2));
    if (w == 0.0) continue;
    num.noalias() += w * z * z.transpose();
    den += w * z2;
  }
  if (!(den > 0.0))
    throw empty_neighborhood("local_covariance: no point carries kernel weight near x");
  Matrix S = num / den;
  S = (0.5 * (S + S.transpose())).eval();
  S /= S.trace();
  return S;
}

PointCloudFlagfold varifold_to_flagfold(const PointCloudVarifold& V) {
  require(V.d >= 1 && V.d <= V.dim, "varifold_to_flagfold: invalid plane dimension");
  PointCloudFlagfold W;
  W.dim = V.dim;
  W.atoms.reserve(V.atoms.size());
  for (const VarifoldAtom& a : V.atoms) {
    require(a.basis.rows() == V.dim && a.basis.cols() == V.d,
            "varifold_to_flagfold: basis size mismatch");
    W.atoms.push_back({a.x, embed_grassmannian(a.basis), a.mass});
  }
  return W;
}

PointCloudVarifold flagfold_to_varifolds(const PointCloudFlagfold& W, int d, double zero_tol) {
  require(d >= 1 && d <= W.dim, "flagfold_to_varifolds: need 1 <= d <= n");
  PointCloudVarifold V;
  V.dim = W.dim;
  V.d = d;
  for (const FlagfoldAtom& a : W.atoms) {
    require_atom(a, W.dim, "flagfold_to_varifolds");
    const FlagRep rep = decompose(a.S, zero_tol);
    const double mu_d = rep.mu[d - 1];
    if (mu_d > zero_tol)
      V.atoms.push_back({a.x, rep.frame.leftCols(d), a.mass * mu_d});
  }
  return V;
}

double dimension_field(const PointCloudFlagfold& W, const Vector& x) {
  double total_mass = 0.0;
  double total_dim = 0.0;
  for (const FlagfoldAtom& a : W.atoms) {
    require_atom(a, W.dim, "dimension_field");
    if (a.x.size() == x.size() && (a.x.array() == x.array()).all()) {
      const FlagRep rep = decompose(a.S);
      total_mass += a.mass;
      total_dim += a.mass * dimension(rep.mu);
    }
  }
  require(total_mass > 0.0, "dimension_field: no mass at x");
  return total_dim / total_mass;
}

PointCloudFlagfold pushforward(const PointCloudFlagfold& W, const MapWithJacobian& phi,
                               double zero_tol) {
  PointCloudFlagfold out;
  out.dim = W.dim;
  for (const FlagfoldAtom& a : W.atoms) {
    require_atom(a, W.dim, "pushforward");
    const Matrix D = phi.jacobian(a.x);
    require(D.rows() == W.dim && D.cols() == W.dim, "pushforward: Jacobian size mismatch");
    require(std::abs(D.determinant()) > 1e-12, "pushforward: Jacobian not invertible at an atom");
    const Vector image = phi.value(a.x);
    const FlagRep rep = decompose(a.S, zero_tol);

    for (int k = 1; k <= W.dim; ++k) {
      const double mu_k = rep.mu[k - 1];
      if (mu_k <= zero_tol) continue;
      const Matrix M = D * rep.frame.leftCols(k);
      const double gram_det = (M.transpose() * M).determinant();
      if (!(gram_det > 1e-24))
        throw numerical_error("pushforward: map is degenerate on an eigenspace");
      const double jac = std::sqrt(gram_det);
      // Orthonormal basis of the image plane via thin QR.
      const Eigen::HouseholderQR<Matrix> qr(M);
      const Matrix Q = qr.householderQ() * Matrix::Identity(W.dim, k);
      out.atoms.push_back({image, embed_grassmannian(Q), a.mass * mu_k * jac});
    }
  }
  return out;
}

double first_variation(const PointCloudFlagfold& W, const VectorFieldWithJacobian& X) {
  double acc = 0.0;
  for (const FlagfoldAtom& a : W.atoms) {
    require_atom(a, W.dim, "first_variation");
    if (a.mass == 0.0) continue;
    const Matrix DX = X.jacobian(a.x);
    acc += a.mass * (sbar(a.S) * DX).trace();
  }
  return acc;
}

std::vector<double> monotonicity_ratio(const PointCloudFlagfold& W, const Vector& x,
                                       double d_star, double Lambda,
                                       const std::vector<double>& radii) {
  require(!radii.empty(), "monotonicity_ratio: empty radius list");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0, "monotonicity_ratio: radii must be positive");
    if (i > 0) require(radii[i] > radii[i - 1], "monotonicity_ratio: radii must increase");
  }

  std::vector<double> out;
  out.reserve(radii.size());
  for (double rho : radii) {
    double m = 0.0;
    for (const FlagfoldAtom& a : W.atoms) {
      require_atom(a, W.dim, "monotonicity_ratio");
      if ((a.x - x).norm() <= rho) m += a.mass;  // boundary atoms count as inside
    }
    out.push_back(std::exp(Lambda * rho) * std::pow(rho, -d_star) * m);
  }
  return out;
}

VectorFieldWithJacobian affine_field(const Matrix& A, const Vector& b) {
  require(A.rows() == A.cols() && A.rows() == b.size(), "affine_field: size mismatch");
  return {[A, b](const Vector& y) -> Vector { return A * y + b; },
          [A](const Vector&) -> Matrix { return A; }};
}

VectorFieldWithJacobian radial_field(const Vector& center) {
  const Eigen::Index n = center.size();
  return {[center](const Vector& y) -> Vector { return y - center; },
          [n](const Vector&) -> Matrix { return Matrix::Identity(n, n); }};
}

VectorFieldWithJacobian bump_field(int component, const Vector& center, double radius,
                                   double amplitude) {
  const Eigen::Index n = center.size();
  require(component >= 0 && component < n, "bump_field: component out of range");
  require(radius > 0.0, "bump_field: radius must be positive");

  auto profile = [](double s) { return std::exp(-1.0 / (1.0 - s * s)); };
  auto value = [=](const Vector& y) -> Vector {
    Vector v = Vector::Zero(n);
    const double s = (y - center).norm() / radius;
    if (s < 1.0) v[component] = amplitude * profile(s);
    return v;
  };
  auto jacobian = [=](const Vector& y) -> Matrix {
    Matrix J = Matrix::Zero(n, n);
    const Vector z = y - center;
    const double r = z.norm();
    const double s = r / radius;
    if (s <= 0.0 || s >= 1.0) return J;
    const double q = 1.0 - s * s;
    const double dprofile = profile(s) * (-2.0 * s) / (q * q);
    J.row(component) = (amplitude * dprofile / (radius * r)) * z.transpose();
    return J;
  };
  return {value, jacobian};
}

}  // namespace flagfold
