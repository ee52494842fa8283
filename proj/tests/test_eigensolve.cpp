#include <cmath>
#include <random>

#include "doctest.h"
#include "roompass/eigensolve.hpp"

using namespace roompass;

namespace {

SparseSymMatrix diag(std::vector<double> d) {
  std::vector<std::tuple<int, int, double>> t;
  for (int i = 0; i < static_cast<int>(d.size()); ++i) t.push_back({i, i, d[i]});
  return SparseSymMatrix::from_triplets(static_cast<int>(d.size()), std::move(t));
}

SparseSymMatrix identity(int n) { return diag(std::vector<double>(n, 1.0)); }

// random symmetric pencil with positive definite B, fixed seed
void random_pencil(int n, unsigned seed, SparseSymMatrix& S, SparseSymMatrix& B) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::tuple<int, int, double>> st, bt;
  for (int i = 0; i < n; ++i) {
    st.push_back({i, i, 2.0 * u(rng)});
    bt.push_back({i, i, 2.0 + std::abs(u(rng))});  // diagonally dominant SPD
    for (int j = std::max(0, i - 3); j < i; ++j) {
      st.push_back({i, j, u(rng)});
      bt.push_back({i, j, 0.2 * u(rng)});
    }
  }
  S = SparseSymMatrix::from_triplets(n, std::move(st));
  B = SparseSymMatrix::from_triplets(n, std::move(bt));
}

}  // namespace

TEST_CASE("count_below on a diagonal pencil") {
  auto s = diag({1.0, 2.0, 3.0});
  auto b = identity(3);
  CHECK(count_below(s, b, 2.5) == 2);
  CHECK(count_below(s, b, -1.0) == 0);
  CHECK(count_below(s, b, 10.0) == 3);
}

TEST_CASE("count_below rejects a shift sitting on an eigenvalue") {
  auto s = diag({1.0, 2.0, 3.0});
  auto b = identity(3);
  CHECK_THROWS_AS(count_below(s, b, 2.0), SingularShiftError);
}

TEST_CASE("eigs_smallest resolves a diagonal case") {
  auto s = diag({3.0, 1.0, 2.0, 7.0, 5.0});
  auto b = identity(5);
  auto r = eigs_smallest(s, b, 2);
  auto v = r.spectrum.values_with_multiplicity();
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("2x2 pencil hand solve") {
  auto s = diag({2.0, 3.0});
  auto b = diag({1.0, 2.0});
  auto r = dense_eig_oracle(s, b);
  auto v = r.values_with_multiplicity();
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(1.5));
  CHECK(v[1] == doctest::Approx(2.0));
  auto sp = eigs_smallest(s, b, 2).spectrum.values_with_multiplicity();
  CHECK(sp[0] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(sp[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("identity pencil returns all ones") {
  auto r = dense_eig_oracle(identity(6), identity(6));
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].value == doctest::Approx(1.0));
  CHECK(r.entries[0].multiplicity == 6);
}

TEST_CASE("eigs_in_interval with certification") {
  auto s = diag({1.0, 2.0, 3.0});
  auto b = identity(3);
  auto sp = eigs_in_interval(s, b, 1.5, 3.5);
  auto v = sp.values_with_multiplicity();
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(v[1] == doctest::Approx(3.0).epsilon(1e-10));

  auto empty = eigs_in_interval(s, b, 3.5, 9.0);
  CHECK(empty.empty());
}

TEST_CASE("sparse path matches the dense oracle on random pencils") {
  for (unsigned seed : {11u, 42u}) {
    SparseSymMatrix s, b;
    random_pencil(50, seed, s, b);
    auto dense = dense_eig_oracle(s, b).values_with_multiplicity();
    auto sparse = eigs_smallest(s, b, 50).spectrum.values_with_multiplicity();
    REQUIRE(sparse.size() == dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
      CHECK(std::abs(sparse[i] - dense[i]) <=
            1e-8 * std::max(1.0, std::abs(dense[i])));
    }
  }
}

TEST_CASE("eigenvectors are B-orthonormal") {
  SparseSymMatrix s, b;
  random_pencil(40, 7u, s, b);
  auto r = eigs_smallest(s, b, 8);
  REQUIRE(r.vectors.size() == 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double g = b.quadratic_form(r.vectors[i], r.vectors[j]);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("monotone consistency of eigs_smallest") {
  SparseSymMatrix s, b;
  random_pencil(30, 3u, s, b);
  auto a5 = eigs_smallest(s, b, 5).spectrum.values_with_multiplicity();
  auto a6 = eigs_smallest(s, b, 6).spectrum.values_with_multiplicity();
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(a5[i] - a6[i]) <= 1e-8 * std::max(1.0, std::abs(a5[i])));
}

TEST_CASE("multiplicity: repeated eigenvalues are all found") {
  // diag(1,1,1,2,2,5) forces true multiplicities
  auto s = diag({1.0, 1.0, 1.0, 2.0, 2.0, 5.0});
  auto b = identity(6);
  auto sp = eigs_in_interval(s, b, 0.0, 4.0);
  REQUIRE(sp.total_multiplicity() == 5);
  CHECK(sp.entries[0].value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sp.entries[0].multiplicity == 3);
  CHECK(sp.entries[1].multiplicity == 2);
}

TEST_CASE("residuals meet the declared tolerance") {
  SparseSymMatrix s, b;
  random_pencil(60, 5u, s, b);
  EigSolveOptions opts;
  auto r = eigs_smallest(s, b, 10, opts);
  for (const auto& e : r.spectrum.entries) CHECK(e.residual <= opts.tolerance);
}

TEST_CASE("dense oracle rejects oversized systems") {
  CHECK_THROWS(dense_eig_oracle(identity(2001), identity(2001)));
}
