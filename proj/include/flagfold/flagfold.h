/* C interface to the weighted-flag geometry library.
 *
 * Conventions: matrices are dense row-major double buffers, frames are
 * orthogonal with eigencolumns ordered by nonincreasing eigenvalue, weight
 * vectors live on the unit simplex. Functions return FF_OK or an error code;
 * ff_last_error() describes the most recent failure on the calling thread.
 * Opaque handles are freed with their matching *_free function. All calls are
 * thread-safe as long as a handle is not mutated concurrently.
 */
#ifndef FLAGFOLD_H
#define FLAGFOLD_H

#if defined(_WIN32)
#define FF_API __declspec(dllexport)
#else
#define FF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ff_status {
  FF_OK = 0,
  FF_ERR_INVALID_ARGUMENT = 1, /* precondition violated */
  FF_ERR_NUMERICAL = 2,        /* solver breakdown or degenerate data */
  FF_ERR_SINGULAR_PINCH = 3,   /* geodesic left the chartable region */
  FF_ERR_EMPTY_NEIGHBORHOOD = 4
} ff_status;

FF_API const char* ff_last_error(void);

/* --- weight algebra and eigen round trip ------------------------------ */

FF_API ff_status ff_lambda_to_mu(const double* lambda, int n, double* mu_out);
FF_API ff_status ff_mu_to_lambda(const double* mu, int n, double* lambda_out);

/* parts_out must hold n ints; *count_out receives the number of parts. */
FF_API ff_status ff_type_of(const double* mu, int n, double zero_tol, int* parts_out,
                            int* count_out);

/* S is n*n row-major; outputs: mu_out (n), frame_out (n*n row-major). */
FF_API ff_status ff_decompose(const double* S, int n, double zero_tol, double* mu_out,
                              double* frame_out);
FF_API ff_status ff_compose(const double* mu, const double* frame, int n, double* S_out);
FF_API ff_status ff_dimension(const double* mu, int n, double* out);
FF_API ff_status ff_sbar(const double* S, int n, double* out);
/* basis: n*d row-major with orthonormal columns. */
FF_API ff_status ff_embed_grassmannian(const double* basis, int n, int d, double* S_out);

/* --- distances --------------------------------------------------------- */

FF_API ff_status ff_euclidean_distance(const double* A, const double* B, int n, double* out);
/* E: n*p, F: n*q row-major orthonormal frames; angles_out holds min(p,q)
 * entries, largest angle first. */
FF_API ff_status ff_principal_angles(const double* E, const double* F, int n, int p, int q,
                                     double* angles_out);
FF_API ff_status ff_grassmann_distance(const double* E, const double* F, int n, int d,
                                       int normalized, double* out);
FF_API ff_status ff_krakus_distance(const double* mu1, const double* frame1, const double* mu2,
                                    const double* frame2, int n, double* out);
FF_API ff_status ff_conic_distance(const double* mu1, const double* frame1, const double* mu2,
                                   const double* frame2, int n, double* out);

/* --- geodesic shooting -------------------------------------------------- */

typedef struct ff_trajectory ff_trajectory;

enum {
  FF_TERMINATION_HORIZON = 0,
  FF_TERMINATION_BOUNDARY = 1,
  FF_TERMINATION_STEP_FAILURE = 2
};

/* U0 may be NULL for the identity frame. B0 is a full n*n row-major
 * skew-symmetric matrix. pinch selects the profile by name: "quarter-norm"
 * (default when NULL) or "norm". */
FF_API ff_status ff_shoot(int n, const double* mu0, const double* mu_dot0, const double* U0,
                          const double* B0, double h, long max_steps, double mu_min,
                          const char* pinch, ff_trajectory** out);

FF_API long ff_trajectory_size(const ff_trajectory* traj);
FF_API int ff_trajectory_dim(const ff_trajectory* traj);
FF_API int ff_trajectory_termination(const ff_trajectory* traj);
/* Any output pointer may be NULL to skip that field. lambda_out receives the
 * eigenvalue ladder of the state's weights; boundary states may overshoot the
 * simplex by one step, so this accessor does not re-validate them. */
FF_API ff_status ff_trajectory_state(const ff_trajectory* traj, long index, double* t_out,
                                     double* mu_out, double* mu_dot_out, double* lambda_out,
                                     double* frame_out);
/* Principal-angle diagnostics against the initial frame; n = 3 only. */
FF_API ff_status ff_trajectory_angles(const ff_trajectory* traj, long index, double* theta1_out,
                                      double* theta2_out);
/* Visualization ellipsoid; n = 3 only. axes_out: 9 doubles (row-major columns
 * are the axes), lengths_out: 3 semi-axis lengths. */
FF_API ff_status ff_trajectory_ellipsoid(const ff_trajectory* traj, long index, double* axes_out,
                                         double* lengths_out);
FF_API void ff_trajectory_free(ff_trajectory* traj);

/* Linear matrix interpolation decomposed at steps+1 uniform times.
 * mus_out: (steps+1)*n, frames_out: (steps+1)*n*n, both row-major. */
FF_API ff_status ff_euclidean_geodesic(const double* A0, const double* A1, int n, int steps,
                                       double* mus_out, double* frames_out);

/* --- point-cloud flagfolds ---------------------------------------------- */

typedef struct ff_flagfold ff_flagfold;

FF_API ff_flagfold* ff_flagfold_new(int dim);
FF_API ff_status ff_flagfold_add_atom(ff_flagfold* W, const double* x, const double* S,
                                      double mass);
FF_API int ff_flagfold_dim(const ff_flagfold* W);
FF_API long ff_flagfold_size(const ff_flagfold* W);
FF_API ff_status ff_flagfold_atom(const ff_flagfold* W, long index, double* x_out, double* S_out,
                                  double* mass_out);
FF_API void ff_flagfold_free(ff_flagfold* W);

/* Local normalized covariance of a weighted point set at x and scale eta.
 * points: count*dim row-major; masses may be NULL (all ones). kernel:
 * "indicator" (default when NULL) or "bump". */
FF_API ff_status ff_local_covariance(const double* points, const double* masses, long count,
                                     int dim, const double* x, double eta, const char* kernel,
                                     double* S_out);

typedef struct ff_vectorfield ff_vectorfield;

FF_API ff_status ff_vectorfield_affine(int dim, const double* A, const double* b,
                                       ff_vectorfield** out);
FF_API ff_status ff_vectorfield_radial(int dim, const double* center, ff_vectorfield** out);
/* component is 0-based. */
FF_API ff_status ff_vectorfield_bump(int dim, int component, const double* center, double radius,
                                     double amplitude, ff_vectorfield** out);
FF_API void ff_vectorfield_free(ff_vectorfield* X);

FF_API ff_status ff_first_variation(const ff_flagfold* W, const ff_vectorfield* X, double* out);
FF_API ff_status ff_monotonicity_ratio(const ff_flagfold* W, const double* x, double d_star,
                                       double lambda, const double* radii, long count,
                                       double* ratios_out);

#ifdef __cplusplus
}
#endif

#endif /* FLAGFOLD_H */
