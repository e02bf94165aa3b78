#include "flagfold/flagfold.h"

#include "flagfold/distances.hpp"
#include "flagfold/flagcore.hpp"
#include "flagfold/geodesic.hpp"
#include "flagfold/measures.hpp"
#include "flagfold/riemann.hpp"

#include <cstring>
#include <string>

namespace ff = flagfold;

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

template <typename Fn>
ff_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return FF_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return FF_ERR_INVALID_ARGUMENT;
  } catch (const ff::singular_pinch& e) {
    set_error(e.what());
    return FF_ERR_SINGULAR_PINCH;
  } catch (const ff::empty_neighborhood& e) {
    set_error(e.what());
    return FF_ERR_EMPTY_NEIGHBORHOOD;
  } catch (const std::exception& e) {
    set_error(e.what());
    return FF_ERR_NUMERICAL;
  } catch (...) {
    set_error("unknown error");
    return FF_ERR_NUMERICAL;
  }
}

using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>;
using RowMajorOutMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

ff::Matrix read_matrix(const double* data, int rows, int cols) {
  ff::require(data != nullptr, "null matrix pointer");
  ff::require(rows > 0 && cols > 0, "nonpositive matrix size");
  return RowMajorMap(data, rows, cols);
}

ff::Vector read_vector(const double* data, int n) {
  ff::require(data != nullptr, "null vector pointer");
  ff::require(n > 0, "nonpositive vector size");
  return Eigen::Map<const ff::Vector>(data, n);
}

void write_matrix(double* out, const ff::Matrix& M) {
  RowMajorOutMap(out, M.rows(), M.cols()) = M;
}

void write_vector(double* out, const ff::Vector& v) {
  Eigen::Map<ff::Vector>(out, v.size()) = v;
}

void require_out(const void* p) { ff::require(p != nullptr, "null output pointer"); }

}  // namespace

struct ff_trajectory {
  ff::Trajectory traj;
};

struct ff_flagfold {
  ff::PointCloudFlagfold W;
};

struct ff_vectorfield {
  int dim;
  ff::VectorFieldWithJacobian X;
};

extern "C" {

const char* ff_last_error(void) { return g_last_error.c_str(); }

ff_status ff_lambda_to_mu(const double* lambda, int n, double* mu_out) {
  return guarded([&] {
    require_out(mu_out);
    write_vector(mu_out, ff::lambda_to_mu(read_vector(lambda, n)));
  });
}

ff_status ff_mu_to_lambda(const double* mu, int n, double* lambda_out) {
  return guarded([&] {
    require_out(lambda_out);
    write_vector(lambda_out, ff::mu_to_lambda(read_vector(mu, n)));
  });
}

ff_status ff_type_of(const double* mu, int n, double zero_tol, int* parts_out, int* count_out) {
  return guarded([&] {
    require_out(parts_out);
    require_out(count_out);
    const ff::FlagType I = ff::type_of(read_vector(mu, n), zero_tol);
    *count_out = I.rank();
    for (int k = 0; k < I.rank(); ++k) parts_out[k] = I.parts[k];
  });
}

ff_status ff_decompose(const double* S, int n, double zero_tol, double* mu_out,
                       double* frame_out) {
  return guarded([&] {
    require_out(mu_out);
    require_out(frame_out);
    const ff::FlagRep rep = ff::decompose(read_matrix(S, n, n), zero_tol);
    write_vector(mu_out, rep.mu);
    write_matrix(frame_out, rep.frame);
  });
}

ff_status ff_compose(const double* mu, const double* frame, int n, double* S_out) {
  return guarded([&] {
    require_out(S_out);
    write_matrix(S_out, ff::compose({read_vector(mu, n), read_matrix(frame, n, n)}));
  });
}

ff_status ff_dimension(const double* mu, int n, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ff::dimension(read_vector(mu, n));
  });
}

ff_status ff_sbar(const double* S, int n, double* out) {
  return guarded([&] {
    require_out(out);
    write_matrix(out, ff::sbar(read_matrix(S, n, n)));
  });
}

ff_status ff_embed_grassmannian(const double* basis, int n, int d, double* S_out) {
  return guarded([&] {
    require_out(S_out);
    write_matrix(S_out, ff::embed_grassmannian(read_matrix(basis, n, d)));
  });
}

ff_status ff_euclidean_distance(const double* A, const double* B, int n, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ff::euclidean_distance(read_matrix(A, n, n), read_matrix(B, n, n));
  });
}

ff_status ff_principal_angles(const double* E, const double* F, int n, int p, int q,
                              double* angles_out) {
  return guarded([&] {
    require_out(angles_out);
    const ff::PrincipalAngles a = ff::principal_angles(read_matrix(E, n, p), read_matrix(F, n, q));
    write_vector(angles_out, a.angles);
  });
}

ff_status ff_grassmann_distance(const double* E, const double* F, int n, int d, int normalized,
                                double* out) {
  return guarded([&] {
    require_out(out);
    *out = ff::grassmann_distance(read_matrix(E, n, d), read_matrix(F, n, d), normalized != 0);
  });
}

ff_status ff_krakus_distance(const double* mu1, const double* frame1, const double* mu2,
                             const double* frame2, int n, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ff::krakus_distance({read_vector(mu1, n), read_matrix(frame1, n, n)},
                               {read_vector(mu2, n), read_matrix(frame2, n, n)});
  });
}

ff_status ff_conic_distance(const double* mu1, const double* frame1, const double* mu2,
                            const double* frame2, int n, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ff::conic_distance({read_vector(mu1, n), read_matrix(frame1, n, n)},
                              {read_vector(mu2, n), read_matrix(frame2, n, n)});
  });
}

ff_status ff_shoot(int n, const double* mu0, const double* mu_dot0, const double* U0,
                   const double* B0, double h, long max_steps, double mu_min, const char* pinch,
                   ff_trajectory** out) {
  return guarded([&] {
    require_out(out);
    ff::GeodesicState init;
    init.mu = read_vector(mu0, n);
    init.mu_dot = read_vector(mu_dot0, n);
    init.U = U0 ? read_matrix(U0, n, n) : ff::Matrix::Identity(n, n);
    init.B = read_matrix(B0, n, n);
    const ff::PinchFunction f = ff::pinch_by_name(pinch ? pinch : "quarter-norm");
    auto* handle = new ff_trajectory{ff::shoot(init, h, max_steps, f, mu_min)};
    *out = handle;
  });
}

long ff_trajectory_size(const ff_trajectory* traj) {
  return traj ? static_cast<long>(traj->traj.states.size()) : 0;
}

int ff_trajectory_dim(const ff_trajectory* traj) {
  if (!traj || traj->traj.states.empty()) return 0;
  return static_cast<int>(traj->traj.states.front().mu.size());
}

int ff_trajectory_termination(const ff_trajectory* traj) {
  if (!traj) return FF_TERMINATION_STEP_FAILURE;
  switch (traj->traj.termination) {
    case ff::Termination::horizon_reached: return FF_TERMINATION_HORIZON;
    case ff::Termination::boundary_hit: return FF_TERMINATION_BOUNDARY;
    default: return FF_TERMINATION_STEP_FAILURE;
  }
}

ff_status ff_trajectory_state(const ff_trajectory* traj, long index, double* t_out,
                              double* mu_out, double* mu_dot_out, double* lambda_out,
                              double* frame_out) {
  return guarded([&] {
    ff::require(traj != nullptr, "null trajectory");
    ff::require(index >= 0 && index < static_cast<long>(traj->traj.states.size()),
                "trajectory index out of range");
    const ff::GeodesicState& s = traj->traj.states[static_cast<std::size_t>(index)];
    if (t_out) *t_out = s.t;
    if (mu_out) write_vector(mu_out, s.mu);
    if (mu_dot_out) write_vector(mu_dot_out, s.mu_dot);
    if (lambda_out) {
      // tail sums lambda_k = sum_{i >= k} mu_i / i, without simplex validation
      double tail = 0.0;
      for (Eigen::Index k = s.mu.size() - 1; k >= 0; --k) {
        tail += s.mu[k] / static_cast<double>(k + 1);
        lambda_out[k] = tail;
      }
    }
    if (frame_out) write_matrix(frame_out, s.U);
  });
}

ff_status ff_trajectory_angles(const ff_trajectory* traj, long index, double* theta1_out,
                               double* theta2_out) {
  return guarded([&] {
    ff::require(traj != nullptr, "null trajectory");
    ff::require(index >= 0 && index < static_cast<long>(traj->traj.states.size()),
                "trajectory index out of range");
    // Computed per call; trajectories are immutable so this is thread-safe.
    const auto angles = ff::angle_diagnostics(traj->traj);
    if (theta1_out) *theta1_out = angles[static_cast<std::size_t>(index)].first;
    if (theta2_out) *theta2_out = angles[static_cast<std::size_t>(index)].second;
  });
}

ff_status ff_trajectory_ellipsoid(const ff_trajectory* traj, long index, double* axes_out,
                                  double* lengths_out) {
  return guarded([&] {
    ff::require(traj != nullptr, "null trajectory");
    ff::require(index >= 0 && index < static_cast<long>(traj->traj.states.size()),
                "trajectory index out of range");
    const auto frames = ff::ellipsoid_frames(traj->traj);
    const ff::EllipsoidFrame& e = frames[static_cast<std::size_t>(index)];
    if (axes_out) write_matrix(axes_out, e.axes);
    if (lengths_out) write_vector(lengths_out, e.lengths);
  });
}

void ff_trajectory_free(ff_trajectory* traj) { delete traj; }

ff_status ff_euclidean_geodesic(const double* A0, const double* A1, int n, int steps,
                                double* mus_out, double* frames_out) {
  return guarded([&] {
    require_out(mus_out);
    require_out(frames_out);
    const auto path = ff::euclidean_geodesic(read_matrix(A0, n, n), read_matrix(A1, n, n), steps);
    for (std::size_t p = 0; p < path.size(); ++p) {
      write_vector(mus_out + p * static_cast<std::size_t>(n), path[p].mu);
      write_matrix(frames_out + p * static_cast<std::size_t>(n) * n, path[p].frame);
    }
  });
}

ff_flagfold* ff_flagfold_new(int dim) {
  if (dim < 1) {
    set_error("flagfold dimension must be positive");
    return nullptr;
  }
  auto* W = new ff_flagfold;
  W->W.dim = dim;
  return W;
}

ff_status ff_flagfold_add_atom(ff_flagfold* W, const double* x, const double* S, double mass) {
  return guarded([&] {
    ff::require(W != nullptr, "null flagfold");
    ff::require(mass >= 0.0, "negative atom mass");
    W->W.atoms.push_back(
        {read_vector(x, W->W.dim), read_matrix(S, W->W.dim, W->W.dim), mass});
  });
}

int ff_flagfold_dim(const ff_flagfold* W) { return W ? W->W.dim : 0; }

long ff_flagfold_size(const ff_flagfold* W) {
  return W ? static_cast<long>(W->W.atoms.size()) : 0;
}

ff_status ff_flagfold_atom(const ff_flagfold* W, long index, double* x_out, double* S_out,
                           double* mass_out) {
  return guarded([&] {
    ff::require(W != nullptr, "null flagfold");
    ff::require(index >= 0 && index < static_cast<long>(W->W.atoms.size()),
                "atom index out of range");
    const ff::FlagfoldAtom& a = W->W.atoms[static_cast<std::size_t>(index)];
    if (x_out) write_vector(x_out, a.x);
    if (S_out) write_matrix(S_out, a.S);
    if (mass_out) *mass_out = a.mass;
  });
}

void ff_flagfold_free(ff_flagfold* W) { delete W; }

ff_status ff_local_covariance(const double* points, const double* masses, long count, int dim,
                              const double* x, double eta, const char* kernel, double* S_out) {
  return guarded([&] {
    require_out(S_out);
    ff::require(points != nullptr, "null points pointer");
    ff::require(count > 0, "need at least one point");
    std::vector<ff::WeightedPoint> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      ff::WeightedPoint p;
      p.x = read_vector(points + static_cast<std::size_t>(i) * dim, dim);
      p.mass = masses ? masses[i] : 1.0;
      ff::require(p.mass >= 0.0, "negative point mass");
      pts.push_back(std::move(p));
    }
    const ff::KernelProfile profile = ff::kernel_by_name(kernel ? kernel : "indicator");
    write_matrix(S_out, ff::local_covariance(pts, read_vector(x, dim), eta, profile));
  });
}

ff_status ff_vectorfield_affine(int dim, const double* A, const double* b, ff_vectorfield** out) {
  return guarded([&] {
    require_out(out);
    *out = new ff_vectorfield{dim, ff::affine_field(read_matrix(A, dim, dim),
                                                    read_vector(b, dim))};
  });
}

ff_status ff_vectorfield_radial(int dim, const double* center, ff_vectorfield** out) {
  return guarded([&] {
    require_out(out);
    *out = new ff_vectorfield{dim, ff::radial_field(read_vector(center, dim))};
  });
}

ff_status ff_vectorfield_bump(int dim, int component, const double* center, double radius,
                              double amplitude, ff_vectorfield** out) {
  return guarded([&] {
    require_out(out);
    *out = new ff_vectorfield{
        dim, ff::bump_field(component, read_vector(center, dim), radius, amplitude)};
  });
}

void ff_vectorfield_free(ff_vectorfield* X) { delete X; }

ff_status ff_first_variation(const ff_flagfold* W, const ff_vectorfield* X, double* out) {
  return guarded([&] {
    require_out(out);
    ff::require(W != nullptr && X != nullptr, "null handle");
    ff::require(W->W.dim == X->dim, "flagfold and vector field dimensions differ");
    *out = ff::first_variation(W->W, X->X);
  });
}

ff_status ff_monotonicity_ratio(const ff_flagfold* W, const double* x, double d_star,
                                double lambda, const double* radii, long count,
                                double* ratios_out) {
  return guarded([&] {
    require_out(ratios_out);
    ff::require(W != nullptr, "null flagfold");
    ff::require(radii != nullptr && count > 0, "need at least one radius");
    const std::vector<double> rs(radii, radii + count);
    const auto ratios =
        ff::monotonicity_ratio(W->W, read_vector(x, W->W.dim), d_star, lambda, rs);
    for (long i = 0; i < count; ++i) ratios_out[i] = ratios[static_cast<std::size_t>(i)];
  });
}

}  // extern "C"
