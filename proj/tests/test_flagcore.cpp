#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagfold/flagcore.hpp"
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

}  // namespace

TEST_CASE("lambda_to_mu on the projector cases") {
  CHECK((lambda_to_mu(vec({1, 0, 0})) - vec({1, 0, 0})).norm() == doctest::Approx(0).epsilon(1e-15));
  CHECK((lambda_to_mu(vec({0.5, 0.5, 0})) - vec({0, 1, 0})).norm() < 1e-15);
  // worked example: (2/3, 1/3, 0) <-> (1/3, 2/3, 0)
  const Vector mu = lambda_to_mu(vec({2.0 / 3, 1.0 / 3, 0}));
  CHECK((mu - vec({1.0 / 3, 2.0 / 3, 0})).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("lambda_to_mu rejects bad input") {
  CHECK_THROWS_AS(lambda_to_mu(vec({0.2, 0.5, 0.3})), std::invalid_argument);  // not monotone
  CHECK_THROWS_AS(lambda_to_mu(vec({0.9, 0.3, 0.1})), std::invalid_argument);  // sum != 1
  CHECK_THROWS_AS(lambda_to_mu(vec({1.2, -0.2})), std::invalid_argument);
}

TEST_CASE("mu_to_lambda examples and inverse") {
  CHECK((mu_to_lambda(vec({1.0 / 3, 2.0 / 3, 0})) - vec({2.0 / 3, 1.0 / 3, 0}))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  const int n = 5;
  Vector full = Vector::Zero(n);
  full[n - 1] = 1.0;
  CHECK((mu_to_lambda(full) - Vector::Constant(n, 1.0 / n)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(mu_to_lambda(vec({0.4, 0.4})), std::invalid_argument);
}

TEST_CASE("lambda <-> mu round trip over random simplex samples") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5, 8}) {
    for (int rep = 0; rep < 1000; ++rep) {
      const Vector mu = ts::random_simplex(rng, n);
      const Vector lambda = mu_to_lambda(mu);
      CHECK((lambda_to_mu(lambda) - mu).cwiseAbs().maxCoeff() < 1e-13);
      const Vector lam2 = mu_to_lambda(lambda_to_mu(lambda));
      CHECK((lam2 - lambda).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("type detection") {
  const FlagType I = type_of(vec({0, 0, 1.0 / 6, 0.5, 0, 1.0 / 3, 0}));
  CHECK(I.parts == std::vector<int>{3, 1, 2, 1});

  Vector line = Vector::Zero(5);
  line[0] = 1.0;
  CHECK(type_of(line).parts == std::vector<int>{1, 4});

  Vector full = Vector::Zero(5);
  full[4] = 1.0;
  CHECK(type_of(full).parts == std::vector<int>{5});

  CHECK_THROWS_AS(type_of(vec({1e-12, 1e-12, 1.0 - 2e-12}), 1.0), std::invalid_argument);
}

TEST_CASE("decompose on the worked diagonal example") {
  Matrix S = Matrix::Zero(3, 3);
  S(0, 0) = 2.0 / 3;
  S(1, 1) = 1.0 / 3;
  const FlagRep rep = decompose(S);
  CHECK((rep.mu - vec({1.0 / 3, 2.0 / 3, 0})).cwiseAbs().maxCoeff() < 1e-12);
  // first column spans e1, first two columns span (e1, e2)
  CHECK(std::abs(std::abs(rep.frame(0, 0)) - 1.0) < 1e-12);
  const Matrix P2 = ts::projector(rep.frame.leftCols(2));
  Matrix P2_expected = Matrix::Zero(3, 3);
  P2_expected(0, 0) = P2_expected(1, 1) = 1.0;
  CHECK((P2 - P2_expected).norm() < 1e-12);
}

TEST_CASE("decompose of the isotropic matrix") {
  const int n = 4;
  const FlagRep rep = decompose(Matrix::Identity(n, n) / n);
  Vector full = Vector::Zero(n);
  full[n - 1] = 1.0;
  CHECK((rep.mu - full).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(is_orthogonal(rep.frame));
}

TEST_CASE("decompose of a rank-one line matrix recovers the direction") {
  const double theta = M_PI / 3;
  Matrix B(2, 2);
  B << std::cos(theta) * std::cos(theta), std::cos(theta) * std::sin(theta),
      std::cos(theta) * std::sin(theta), std::sin(theta) * std::sin(theta);
  const FlagRep rep = decompose(B);
  CHECK((rep.mu - vec({1, 0})).cwiseAbs().maxCoeff() < 1e-12);
  Vector dir(2);
  dir << std::cos(theta), std::sin(theta);
  CHECK(std::min((rep.frame.col(0) - dir).norm(), (rep.frame.col(0) + dir).norm()) < 1e-12);
}

TEST_CASE("decompose error reporting") {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;  // eigenvalue well below the clamp window
  CHECK_THROWS_AS(decompose(bad), std::invalid_argument);

  Matrix asym(2, 2);
  asym << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(decompose(asym), std::invalid_argument);
}

TEST_CASE("compose examples") {
  Matrix I3 = Matrix::Identity(3, 3);
  CHECK((compose({vec({1, 0, 0}), I3}) - Vector(vec({1, 0, 0})).asDiagonal().toDenseMatrix())
            .norm() < 1e-15);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 2.0 / 3;
  expected(1, 1) = 1.0 / 3;
  CHECK((compose({vec({1.0 / 3, 2.0 / 3, 0}), I3}) - expected).norm() < 1e-15);
}

TEST_CASE("compose after decompose is the identity on the quotient") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 5, 8}) {
    for (int rep = 0; rep < 500; ++rep) {
      const Matrix S = ts::random_cov(rng, n);
      CHECK((compose(decompose(S)) - S).norm() < 1e-10);
    }
    for (int rep = 0; rep < 500; ++rep) {
      const Matrix S = ts::random_cov_with_ties(rng, n);
      CHECK((compose(decompose(S)) - S).norm() < 1e-10);
    }
  }
}

TEST_CASE("dimension") {
  for (int n : {3, 6}) {
    for (int d = 1; d <= n; ++d) {
      Vector vertex = Vector::Zero(n);
      vertex[d - 1] = 1.0;
      CHECK(dimension(vertex) == doctest::Approx(d).epsilon(1e-15));
    }
  }
  CHECK(dimension(vec({1.0 / 3, 2.0 / 3, 0})) == doctest::Approx(5.0 / 3).epsilon(1e-15));
}

TEST_CASE("dimension equals the trace of sbar") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 3 + static_cast<int>(rep % 4);
    const Vector mu = ts::random_simplex(rng, n);
    const Matrix S = compose({mu, ts::random_orthogonal(rng, n)});
    CHECK(std::abs(sbar(S).trace() - dimension(mu)) < 1e-12);
    CHECK(dimension(mu) >= 1.0 - 1e-12);
    CHECK(dimension(mu) <= n + 1e-12);
  }
}

TEST_CASE("sbar examples") {
  Matrix S = Matrix::Zero(3, 3);
  S(0, 0) = 2.0 / 3;
  S(1, 1) = 1.0 / 3;
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = 2.0 / 3;
  CHECK((sbar(S) - expected).norm() < 1e-12);

  std::mt19937_64 rng(37);
  const Matrix E = ts::random_frame(rng, 5, 3);
  CHECK((sbar(embed_grassmannian(E)) - ts::projector(E)).norm() < 1e-10);

  const int n = 4;
  CHECK((sbar(Matrix::Identity(n, n) / n) - Matrix::Identity(n, n)).norm() < 1e-12);
}

TEST_CASE("embed_grassmannian") {
  Matrix E12(3, 2);
  E12 << 1, 0, 0, 1, 0, 0;
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 0.5;
  CHECK((embed_grassmannian(E12) - expected).norm() < 1e-15);

  Matrix E3(3, 1);
  E3 << 0, 0, 1;
  Matrix e3 = Matrix::Zero(3, 3);
  e3(2, 2) = 1.0;
  CHECK((embed_grassmannian(E3) - e3).norm() < 1e-15);

  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 5;
    const int d = 1 + static_cast<int>(rep % (n - 1));
    const Matrix S = embed_grassmannian(ts::random_frame(rng, n, d));
    const FlagRep r = decompose(S);
    CHECK(std::abs(r.mu[d - 1] - 1.0) < 1e-10);
    CHECK(type_of(r.mu).parts == std::vector<int>{d, n - d});
  }

  Matrix not_orthonormal(3, 2);
  not_orthonormal << 1, 1, 0, 1, 0, 0;
  CHECK_THROWS_AS(embed_grassmannian(not_orthonormal), std::invalid_argument);
}

// Eigenprojector stability under small perturbations: for min_k mu_k >= delta
// and a symmetric perturbation with ||E||_F <= delta/100, every leading
// projector moves by at most 2 sqrt(2) k ||E||_F / delta.
TEST_CASE("eigenprojector perturbation bound") {
  std::mt19937_64 rng(43);
  const double delta = 0.08;
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 3 + static_cast<int>(rep % 3);
    Vector mu = ts::random_interior_simplex(rng, n, delta);
    const Matrix U = ts::random_orthogonal(rng, n);
    const Matrix S = compose({mu, U});

    Matrix E = ts::random_gaussian(rng, n, n);
    E = (0.5 * (E + E.transpose())).eval();
    E -= (E.trace() / n) * Matrix::Identity(n, n);
    E *= (delta / 100.0) / E.norm();

    Matrix Sp = S + E;
    Sp /= Sp.trace();
    const FlagRep a = decompose(S);
    const FlagRep b = decompose(Sp);
    const double budget = (S - Sp).norm();
    for (int k = 1; k <= n; ++k) {
      if (mu[k - 1] < delta) continue;
      const double move =
          (ts::projector(a.frame.leftCols(k)) - ts::projector(b.frame.leftCols(k))).norm();
      CHECK(move <= 2.0 * std::sqrt(2.0) * k * budget / delta + 1e-12);
    }
  }
}

TEST_CASE("sign canonicalization gives a reproducible representative") {
  std::mt19937_64 rng(47);
  const Matrix U = ts::random_orthogonal(rng, 4);
  Matrix flipped = U;
  flipped.col(1) *= -1.0;
  flipped.col(3) *= -1.0;
  const Matrix a = canonicalize_signs(U);
  const Matrix b = canonicalize_signs(flipped);
  CHECK((a - b).norm() < 1e-15);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      if (std::abs(a(i, j)) > 1e-9) {
        CHECK(a(i, j) > 0.0);
        break;
      }
    }
  }
}
