#include "flagfold/riemann.hpp"

#include "flagfold/stratify.hpp"

#include <cmath>

namespace flagfold {

PinchFunction quarter_norm_pinch() {
  return PinchFunction{
      [](const Vector& nu) { return 0.25 * nu.norm(); },
      [](const Vector& nu) -> Vector {
        const double r = nu.norm();
        require(r > 0.0, "pinch gradient undefined at 0");
        return nu / (4.0 * r);
      },
      "quarter-norm"};
}

PinchFunction norm_pinch() {
  return PinchFunction{
      [](const Vector& nu) { return nu.norm(); },
      [](const Vector& nu) -> Vector {
        const double r = nu.norm();
        require(r > 0.0, "pinch gradient undefined at 0");
        return nu / r;
      },
      "norm"};
}

PinchFunction default_pinch() { return quarter_norm_pinch(); }

PinchFunction pinch_by_name(const std::string& name) {
  if (name == "quarter-norm") return quarter_norm_pinch();
  if (name == "norm") return norm_pinch();
  throw std::invalid_argument("unknown pinch function: " + name);
}

Vector mu_slice(const Vector& mu, int i, int j) {
  const int n = static_cast<int>(mu.size());
  require(1 <= i && i < j && j <= n, "mu_slice: need 1 <= i < j <= n");
  Vector out = Vector::Zero(n);
  out.segment(i - 1, j - i) = mu.segment(i - 1, j - i);
  return out;
}

namespace {

void require_tangent(const Vector& mu, const TangentVector& T, const char* who) {
  require(T.alpha.size() == mu.size(), std::string(who) + ": alpha size mismatch");
  require(std::abs(T.alpha.sum()) <= 1e-12, std::string(who) + ": alpha does not sum to 0");
  require(T.B.rows() == mu.size() && T.B.cols() == mu.size(),
          std::string(who) + ": B size mismatch");
  require(is_skew(T.B), std::string(who) + ": B is not skew-symmetric");
}

/// sum_{i<j} f(mu_{i->j})^2 B_ij C_ij, the frame part of the metric.
double frame_inner(const Vector& mu, const Matrix& B, const Matrix& C,
                   const PinchFunction& f) {
  const int n = static_cast<int>(mu.size());
  double s = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double bc = B(i - 1, j - 1) * C(i - 1, j - 1);
      if (bc == 0.0) continue;
      const double fij = f.value(mu_slice(mu, i, j));
      s += fij * fij * bc;
    }
  return s;
}

}  // namespace

double metric_eval(const Vector& mu, const TangentVector& T1, const TangentVector& T2,
                   const PinchFunction& f) {
  require(is_simplex_point(mu), "metric_eval: invalid weights");
  require_tangent(mu, T1, "metric_eval");
  require_tangent(mu, T2, "metric_eval");

  // Tangents to the cell live in the horizontal space m_I for I = type_of(mu).
  const FlagType I = type_of(mu);
  for (const auto& [i, j] : block_indices(I).pairs) {
    if (std::abs(T1.B(i - 1, j - 1)) > 1e-12 || std::abs(T2.B(i - 1, j - 1)) > 1e-12)
      throw std::invalid_argument("metric_eval: tangent has a component inside a diagonal block");
  }

  return T1.alpha.dot(T2.alpha) + frame_inner(mu, T1.B, T2.B, f);
}

Matrix discrete_frame_velocity(const Matrix& U, const Matrix& U_next, double h) {
  require(h > 0.0, "discrete_frame_velocity: nonpositive step");
  const Matrix D = U.transpose() * (U_next - U) / h;
  return 0.5 * (D - D.transpose());
}

namespace {

double path_integral(const std::vector<FlagRep>& samples, double h, const PinchFunction& f,
                     bool energy) {
  require(samples.size() >= 2, "path quadrature: need at least 2 samples");
  require(h > 0.0, "path quadrature: nonpositive step");
  const Eigen::Index n = samples.front().mu.size();
  for (const FlagRep& s : samples) {
    require(s.mu.size() == n && s.frame.rows() == n, "path quadrature: inconsistent sizes");
    require(is_orthogonal(s.frame, 1e-8), "path quadrature: frame is not orthogonal");
  }

  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < samples.size(); ++p) {
    const Vector mu_dot = (samples[p + 1].mu - samples[p].mu) / h;
    const Matrix B = discrete_frame_velocity(samples[p].frame, samples[p + 1].frame, h);
    const Vector mu_mid = 0.5 * (samples[p].mu + samples[p + 1].mu);

    double speed_sq = mu_dot.squaredNorm();
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const double b = B(i - 1, j - 1);
        if (b == 0.0) continue;
        const double fij = f.value(mu_slice(mu_mid, i, j));
        speed_sq += fij * fij * b * b;
      }
    acc += energy ? 0.5 * h * speed_sq : h * std::sqrt(speed_sq);
  }
  return acc;
}

}  // namespace

double path_length(const std::vector<FlagRep>& samples, double h, const PinchFunction& f) {
  return path_integral(samples, h, f, /*energy=*/false);
}

double path_energy(const std::vector<FlagRep>& samples, double h, const PinchFunction& f) {
  return path_integral(samples, h, f, /*energy=*/true);
}

}  // namespace flagfold
