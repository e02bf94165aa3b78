#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagfold/stratify.hpp"
#include "test_support.hpp"

using namespace flagfold;
namespace ts = test_support;

namespace {

FlagType ft(std::initializer_list<int> parts) { return FlagType{std::vector<int>(parts)}; }

/// All compositions (ordered partitions) of n.
std::vector<FlagType> all_types(int n) {
  std::vector<FlagType> out;
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    FlagType I;
    int run = 1;
    for (int pos = 0; pos < n - 1; ++pos) {
      if (mask & (1 << pos)) {
        I.parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    I.parts.push_back(run);
    out.push_back(std::move(I));
  }
  return out;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("coarser on the worked examples") {
  CHECK(coarser(ft({2, 1, 1}), ft({2, 2})));
  CHECK(coarser(ft({1, 1}), ft({2})));
  CHECK_FALSE(coarser(ft({2, 1}), ft({1, 2})));
  CHECK_THROWS_AS(coarser(ft({2, 1}), ft({2, 2})), std::invalid_argument);
}

TEST_CASE("coarser is a partial order (exhaustive up to n = 6)") {
  for (int n = 2; n <= 6; ++n) {
    const auto types = all_types(n);
    for (const auto& a : types) CHECK(coarser(a, a));
    for (const auto& a : types)
      for (const auto& b : types) {
        if (coarser(a, b) && coarser(b, a)) CHECK(a == b);
        for (const auto& c : types)
          if (coarser(a, b) && coarser(b, c)) CHECK(coarser(a, c));
      }
  }
}

TEST_CASE("project_flag reinterprets the frame") {
  const Matrix I4 = Matrix::Identity(4, 4);
  const FlagRep rep{vec({0.4, 0.3, 0.2, 0.1}), I4};
  const FlagRep out = project_flag(rep, ft({2, 1, 1}), ft({2, 2}));
  // The type-(2,2) flag spans {e1,e2} then everything.
  Matrix P = ts::projector(out.frame.leftCols(2));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = 1.0;
  CHECK((P - expected).norm() < 1e-15);

  CHECK((project_flag(rep, ft({2, 1, 1}), ft({2, 1, 1})).frame - rep.frame).norm() == 0.0);
  CHECK_THROWS_AS(project_flag(rep, ft({2, 2}), ft({2, 1, 1})), std::invalid_argument);
}

TEST_CASE("flag projections compose") {
  std::mt19937_64 rng(7);
  const FlagType J = ft({1, 1, 1, 1});
  const FlagType I = ft({2, 1, 1});
  const FlagType I2 = ft({2, 2});
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix U = ts::random_orthogonal(rng, 4);
    const FlagRep r{vec({0.25, 0.25, 0.25, 0.25}), U};
    const FlagRep via = project_flag(project_flag(r, J, I), I, I2);
    const FlagRep direct = project_flag(r, J, I2);
    for (int d : {2, 4}) {
      CHECK((ts::projector(via.frame.leftCols(d)) - ts::projector(direct.frame.leftCols(d)))
                .norm() < 1e-14);
    }
  }
}

TEST_CASE("block index sets") {
  CHECK(block_indices(ft({1, 1, 1})).pairs.empty());
  {
    const auto X = block_indices(ft({1, 2})).pairs;
    CHECK(X == std::set<std::pair<int, int>>{{2, 3}});
  }
  {
    const auto X = block_indices(ft({2, 1})).pairs;
    CHECK(X == std::set<std::pair<int, int>>{{1, 2}});
  }
  // |X_I| = sum p_k (p_k - 1) / 2
  std::mt19937_64 rng(9);
  for (const auto& I : {ft({3, 1, 2, 1}), ft({4, 4}), ft({1, 5, 2})}) {
    std::size_t expected = 0;
    for (int p : I.parts) expected += static_cast<std::size_t>(p) * (p - 1) / 2;
    CHECK(block_indices(I).pairs.size() == expected);
  }
}

TEST_CASE("horizontal projection") {
  std::mt19937_64 rng(13);
  const int n = 5;
  const Matrix B = ts::random_skew(rng, n);

  SUBCASE("finest type keeps everything") {
    CHECK((horizontal_project(B, ft({1, 1, 1, 1, 1})) - B).norm() == 0.0);
  }
  SUBCASE("coarsest type kills everything") {
    CHECK(horizontal_project(B, ft({5})).norm() == 0.0);
  }
  SUBCASE("complement is supported exactly on the block indices") {
    const FlagType I = ft({2, 3});
    const Matrix H = horizontal_project(B, I);
    const Matrix D = B - H;
    const auto X = block_indices(I).pairs;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const bool in_block = X.count({i, j}) > 0;
        if (in_block) {
          CHECK(H(i - 1, j - 1) == 0.0);
          CHECK(D(i - 1, j - 1) == B(i - 1, j - 1));
        } else {
          CHECK(D(i - 1, j - 1) == 0.0);
        }
      }
  }
  SUBCASE("linear, idempotent, orthogonal") {
    const FlagType I = ft({2, 2, 1});
    const Matrix C = ts::random_skew(rng, n);
    CHECK((horizontal_project(B + 2.0 * C, I) -
           (horizontal_project(B, I) + 2.0 * horizontal_project(C, I)))
              .norm() < 1e-14);
    const Matrix PB = horizontal_project(B, I);
    CHECK((horizontal_project(PB, I) - PB).norm() == 0.0);
    const double inner = ((B - PB).transpose() * horizontal_project(C, I)).trace();
    CHECK(std::abs(inner) < 1e-14);
  }
  SUBCASE("inclusion monotonicity") {
    const FlagType J = ft({2, 1, 1, 1});
    const FlagType I = ft({2, 3});
    REQUIRE(coarser(J, I));
    const Matrix both = horizontal_project(horizontal_project(B, I), J);
    CHECK((both - horizontal_project(B, I)).norm() == 0.0);
  }
  SUBCASE("non-skew rejected") {
    Matrix M = ts::random_gaussian(rng, n, n);
    CHECK_THROWS_AS(horizontal_project(M, ft({2, 3})), std::invalid_argument);
  }
}

TEST_CASE("cell identification") {
  CHECK(cell_of(vec({0.5, 0.5, 0})).K == std::set<int>{1, 2});

  const CellKey key = cell_of(vec({0, 0, 1.0 / 6, 0.5, 0, 1.0 / 3, 0}));
  CHECK(key.K == std::set<int>{3, 4, 6});
  CHECK(type_of_cell(key, 7).parts == std::vector<int>{3, 1, 2, 1});

  std::mt19937_64 rng(17);
  const int n = 5;
  const Vector mu = ts::random_interior_simplex(rng, n);
  const CellKey dense = cell_of(mu);
  CHECK(dense.K.size() == static_cast<std::size_t>(n));
}
