#include <cmath>
#include <sstream>

#include "doctest.h"
#include "roompass/ldlt.hpp"
#include "roompass/sparse.hpp"

using namespace roompass;

TEST_CASE("triplet assembly sums duplicates and maps to lower triangle") {
  auto a = SparseSymMatrix::from_triplets(
      3, {{0, 0, 2.0}, {1, 0, -1.0}, {0, 1, -0.5}, {1, 1, 2.0}, {2, 2, 1.0}});
  CHECK(a.get(0, 0) == doctest::Approx(2.0));
  CHECK(a.get(1, 0) == doctest::Approx(-1.5));
  CHECK(a.get(0, 1) == doctest::Approx(-1.5));  // symmetric view
  CHECK(a.get(2, 2) == doctest::Approx(1.0));
  CHECK(a.get(2, 0) == 0.0);
}

TEST_CASE("symmetric matvec matches dense arithmetic") {
  auto a = SparseSymMatrix::from_triplets(
      3, {{0, 0, 4.0}, {1, 1, 3.0}, {2, 2, 5.0}, {1, 0, 1.0}, {2, 1, -2.0}});
  std::vector<double> x{1.0, 2.0, 3.0};
  auto y = a.multiply(x);
  CHECK(y[0] == doctest::Approx(4.0 + 2.0));
  CHECK(y[1] == doctest::Approx(1.0 + 6.0 - 6.0));
  CHECK(y[2] == doctest::Approx(-4.0 + 15.0));
  CHECK(a.one_norm() == doctest::Approx(7.0));  // column 2: 5 + 2
}

TEST_CASE("matrix combo forms linear combinations on the union pattern") {
  auto a = SparseSymMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
  auto b = SparseSymMatrix::from_triplets(2, {{1, 0, 1.0}});
  MatrixCombo combo({&a, &b});
  std::vector<double> v;
  combo.combine({2.0, -3.0}, v);
  const auto& p = combo.pattern();
  SparseSymMatrix c{p.n, p.row_ptr, p.cols, v};
  CHECK(c.get(0, 0) == doctest::Approx(2.0));
  CHECK(c.get(1, 0) == doctest::Approx(-3.0));
  CHECK(c.get(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("ldlt reproduces inertia and solves") {
  // diag(2, -3, 5) with small couplings stays indefinite
  auto a = SparseSymMatrix::from_triplets(
      3, {{0, 0, 2.0}, {1, 1, -3.0}, {2, 2, 5.0}, {1, 0, 0.5}, {2, 1, 0.25}});
  LdltFactor f;
  f.analyze(a);
  auto info = f.factorize(a.vals);
  REQUIRE(info.ok);
  CHECK(info.n_negative == 1);
  CHECK(info.n_positive == 2);
  CHECK(info.n_zero == 0);

  std::vector<double> x{1.0, 2.0, 3.0};
  auto rhs = a.multiply(x);
  f.solve(rhs);
  for (int i = 0; i < 3; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("ldlt on a 1D Laplacian chain with rcm") {
  const int n = 40;
  std::vector<std::tuple<int, int, double>> trips;
  for (int i = 0; i < n; ++i) trips.push_back({i, i, 2.0});
  for (int i = 0; i + 1 < n; ++i) trips.push_back({i + 1, i, -1.0});
  auto a = SparseSymMatrix::from_triplets(n, std::move(trips));
  LdltFactor f;
  f.analyze(a);
  auto info = f.factorize(a.vals);
  REQUIRE(info.ok);
  CHECK(info.n_negative == 0);  // Dirichlet chain is positive definite
  CHECK(info.n_positive == n);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(0.3 * i) + 0.1;
  auto rhs = a.multiply(x);
  f.solve(rhs);
  for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-10));
}

TEST_CASE("coordinate export uses row col value lines") {
  auto a = SparseSymMatrix::from_triplets(2, {{0, 0, 1.5}, {1, 0, -2.0}});
  std::ostringstream os;
  write_coordinate(a, os);
  CHECK(os.str() == "0 0 1.5\n1 0 -2\n");
}
