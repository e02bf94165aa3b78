#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagfold/distances.hpp"
#include "flagfold/flagcore.hpp"
#include "flagfold/geodesic.hpp"
#include "flagfold/riemann.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace flagfold;
namespace ts = test_support;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix line_matrix(double theta) {
  Matrix B(2, 2);
  B << std::cos(theta) * std::cos(theta), std::cos(theta) * std::sin(theta),
      std::cos(theta) * std::sin(theta), std::sin(theta) * std::sin(theta);
  return B;
}

FlagRep random_rep(std::mt19937_64& rng, int n) {
  return {ts::random_simplex(rng, n), ts::random_orthogonal(rng, n)};
}

}  // namespace

TEST_CASE("euclidean distance on the two-line example") {
  const Matrix A = line_matrix(0.0);
  CHECK(euclidean_distance(A, A) == 0.0);
  for (double theta : {M_PI / 6, M_PI / 4, M_PI / 2}) {
    const Matrix B = line_matrix(theta);
    CHECK(std::abs(euclidean_distance(A, B) - std::sqrt(2.0) * std::abs(std::sin(theta))) <
          1e-12);
    // midpoint eigenvalues (1 +- |cos theta|) / 2
    const FlagRep mid = decompose(0.5 * (A + B));
    const Vector lambda = mu_to_lambda(mid.mu);
    CHECK(std::abs(lambda[0] - 0.5 * (1 + std::abs(std::cos(theta)))) < 1e-12);
    CHECK(std::abs(lambda[1] - 0.5 * (1 - std::abs(std::cos(theta)))) < 1e-12);
  }
}

TEST_CASE("principal angles") {
  std::mt19937_64 rng(3);
  const Matrix E = ts::random_frame(rng, 4, 2);
  CHECK(principal_angles(E, E).angles.cwiseAbs().maxCoeff() == 0.0);

  Matrix e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(principal_angles(e1, e2).angles[0] == doctest::Approx(M_PI / 2).epsilon(1e-12));

  for (double theta : {0.3, 0.7, 1.2}) {
    Matrix dir(2, 1);
    dir << std::cos(theta), std::sin(theta);
    CHECK(principal_angles(e1, dir).angles[0] == doctest::Approx(theta).epsilon(1e-12));
  }

  Matrix bad(3, 2);
  bad << 1, 1, 0, 1, 0, 0;
  CHECK_THROWS_AS(principal_angles(bad, bad), std::invalid_argument);
}

TEST_CASE("grassmann distance") {
  std::mt19937_64 rng(5);
  const Matrix E = ts::random_frame(rng, 5, 2);
  CHECK(grassmann_distance(E, E, false) == 0.0);

  Matrix e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(grassmann_distance(e1, e2, false) == doctest::Approx(M_PI / 2).epsilon(1e-12));

  // two planes in R^4 sharing a line, free angle theta in the complement
  for (double theta : {0.4, 1.0}) {
    Matrix F1(4, 2), F2(4, 2);
    F1 << 1, 0, 0, 1, 0, 0, 0, 0;
    F2 << 1, 0, 0, std::cos(theta), 0, std::sin(theta), 0, 0;
    CHECK(grassmann_distance(F1, F2, false) == doctest::Approx(theta).epsilon(1e-10));
    CHECK(grassmann_distance(F1, F2, true) ==
          doctest::Approx(theta / std::sqrt(2.0)).epsilon(1e-10));
  }

  Matrix F3 = ts::random_frame(rng, 5, 3);
  CHECK_THROWS_AS(grassmann_distance(E, F3, false), std::invalid_argument);
}

TEST_CASE("krakus distance basics") {
  std::mt19937_64 rng(7);
  const FlagRep X = random_rep(rng, 4);
  CHECK(krakus_distance(X, X) == 0.0);

  // same frame: pure l1 between weights
  const FlagRep Y{ts::random_simplex(rng, 4), X.frame};
  CHECK(krakus_distance(X, Y) ==
        doctest::Approx((X.mu - Y.mu).cwiseAbs().sum()).epsilon(1e-14));

  // two lines in R^2 at angle theta
  const double theta = 0.6;
  Matrix U = Matrix::Identity(2, 2);
  Matrix V(2, 2);
  V << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const FlagRep L1{vec({1, 0}), U};
  const FlagRep L2{vec({1, 0}), V};
  CHECK(krakus_distance(L1, L2) == doctest::Approx(theta).epsilon(1e-12));
}

TEST_CASE("conic distance basics") {
  std::mt19937_64 rng(11);
  const FlagRep X = random_rep(rng, 4);
  CHECK(conic_distance(X, X) == 0.0);

  const FlagRep Y{ts::random_simplex(rng, 4), X.frame};
  CHECK(conic_distance(X, Y) == doctest::Approx((X.mu - Y.mu).norm()).epsilon(1e-12));

  const double theta = 0.6;
  Matrix V(2, 2);
  V << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const FlagRep L1{vec({1, 0}), Matrix::Identity(2, 2)};
  const FlagRep L2{vec({1, 0}), V};
  CHECK(conic_distance(L1, L2) ==
        doctest::Approx(std::sqrt(2.0 - 2.0 * std::cos(theta))).epsilon(1e-12));
}

TEST_CASE("symmetry and triangle inequality on random triples") {
  std::mt19937_64 rng(13);
  const int n = 3;
  for (int rep = 0; rep < 10000; ++rep) {
    const FlagRep a = random_rep(rng, n);
    const FlagRep b = random_rep(rng, n);
    const FlagRep c = random_rep(rng, n);
    for (auto dist : {krakus_distance, conic_distance}) {
      const double ab = dist(a, b), ba = dist(b, a);
      CHECK(std::abs(ab - ba) < 1e-12);
      CHECK(ab <= dist(a, c) + dist(c, b) + 1e-10);
    }
    CHECK(std::abs(euclidean_distance(compose(a), compose(b)) -
                   euclidean_distance(compose(b), compose(a))) < 1e-13);
    CHECK(euclidean_distance(compose(a), compose(b)) <=
          euclidean_distance(compose(a), compose(c)) +
              euclidean_distance(compose(c), compose(b)) + 1e-10);
  }
}

TEST_CASE("krakus and conic vanish exactly on equal quotient points") {
  std::mt19937_64 rng(17);
  const int n = 4;
  for (int rep = 0; rep < 300; ++rep) {
    const FlagRep a = random_rep(rng, n);
    const FlagRep b = random_rep(rng, n);
    for (auto dist : {krakus_distance, conic_distance}) {
      const double d = dist(a, b);
      const double matrix_gap = euclidean_distance(compose(a), compose(b));
      if (d < 1e-9) CHECK(matrix_gap < 1e-8);
      if (matrix_gap < 1e-8) CHECK(d < 1e-9);
    }
  }
  // equal quotient points with different representatives
  for (int rep = 0; rep < 100; ++rep) {
    Vector mu = ts::random_simplex(rng, n);
    for (int k = 0; k < n; ++k)
      if (mu[k] < 0.05) mu[k] = 0.0;
    mu /= mu.sum();
    const Matrix U = ts::random_orthogonal(rng, n);
    const Matrix R = ts::random_block_orthogonal(rng, type_of(mu));
    const FlagRep a{mu, U};
    const FlagRep b{mu, U * R};
    CHECK(krakus_distance(a, b) < 1e-9);
    CHECK(conic_distance(a, b) < 1e-9);
  }
}

TEST_CASE("invariance under block-orthogonal right multiplication") {
  std::mt19937_64 rng(19);
  const int n = 5;
  for (int rep = 0; rep < 100; ++rep) {
    Vector mu = ts::random_simplex(rng, n);
    for (int k = 0; k < n; ++k)
      if (mu[k] < 0.1) mu[k] = 0.0;
    mu /= mu.sum();
    const FlagType I = type_of(mu);
    const FlagRep a{mu, ts::random_orthogonal(rng, n)};
    const FlagRep a2{mu, a.frame * ts::random_block_orthogonal(rng, I)};
    const FlagRep other = random_rep(rng, n);
    CHECK(std::abs(krakus_distance(a, other) - krakus_distance(a2, other)) < 1e-10);
    CHECK(std::abs(conic_distance(a, other) - conic_distance(a2, other)) < 1e-10);
  }
}

TEST_CASE("both distances metrize convergence to a limit point") {
  std::mt19937_64 rng(23);
  const int n = 3;
  const FlagRep limit{ts::random_interior_simplex(rng, n, 0.1), ts::random_orthogonal(rng, n)};
  const Matrix Omega = ts::random_skew(rng, n);
  const Vector dir = vec({0.5, -0.25, -0.25});

  double prev_kr = 1e300, prev_con = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    Vector mu = limit.mu + eps * dir;
    mu = mu.cwiseMax(0.0);
    mu /= mu.sum();
    const FlagRep near{mu, limit.frame * expm_skew(eps * Omega)};
    const double kr = krakus_distance(near, limit);
    const double con = conic_distance(near, limit);
    CHECK(kr < prev_kr);
    CHECK(con < prev_con);
    prev_kr = kr;
    prev_con = con;
  }
  CHECK(prev_kr < 1e-3);
  CHECK(prev_con < 1e-3);
}

// Projections onto leading spans shorten paths: the normalized Grassmann
// distance between the endpoints' first-k spans is bounded by the length of
// any connecting frame path, measured with an unpinched profile.
TEST_CASE("grassmann distance never exceeds connecting path length") {
  std::mt19937_64 rng(29);
  const int n = 4;
  // Unpinned profile: 1 away from 0 (vanishes only at 0, as a pinch must).
  PinchFunction ones{[](const Vector& nu) { return nu.isZero(0.0) ? 0.0 : 1.0; },
                     [](const Vector& nu) { return Vector::Zero(nu.size()); },
                     "unpinched"};
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix U0 = ts::random_orthogonal(rng, n);
    Matrix B = ts::random_skew(rng, n);
    B *= 1.0 / B.norm();

    const int samples = 400;
    const double h = 1.0 / samples;
    std::vector<FlagRep> path;
    const Vector mu = ts::random_interior_simplex(rng, n);
    for (int p = 0; p <= samples; ++p)
      path.push_back({mu, U0 * expm_skew((p * h) * B)});

    const double L = path_length(path, h, ones);
    for (int k = 1; k <= n; ++k) {
      const double dk = grassmann_distance(path.front().frame.leftCols(k),
                                           path.back().frame.leftCols(k), true);
      CHECK(dk <= L * (1.0 + 1e-6) + 1e-8);
    }
  }
}
