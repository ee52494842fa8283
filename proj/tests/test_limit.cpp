#include <cmath>

#include "doctest.h"
#include "roompass/limit.hpp"

using namespace roompass;

namespace {
constexpr double kPi = 3.14159265358979323846;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}
}  // namespace

TEST_CASE("Neumann rectangle analytic spectrum") {
  auto s = neumann_rectangle_analytic(1.0, 1.0, 25.0);
  REQUIRE(s.entries.size() == 3);
  CHECK(s.entries[0].value == doctest::Approx(0.0));
  CHECK(s.entries[0].multiplicity == 1);
  CHECK(s.entries[1].value == doctest::Approx(kPi * kPi));
  CHECK(s.entries[1].multiplicity == 2);
  CHECK(s.entries[2].value == doctest::Approx(2.0 * kPi * kPi));

  auto low = neumann_rectangle_analytic(1.0, 1.0, 5.0);
  REQUIRE(low.entries.size() == 1);
  CHECK(low.entries[0].value == 0.0);

  auto wide = neumann_rectangle_analytic(2.0, 1.0, 10.0);
  auto v = wide.values();
  REQUIRE(v.size() == 3);
  CHECK(v[1] == doctest::Approx(kPi * kPi / 4.0));
  CHECK(v[2] == doctest::Approx(kPi * kPi));
}

TEST_CASE("Dirichlet-on-Gamma analytic spectrum") {
  auto s = dirichlet_gamma_rectangle_analytic(1.0, 1.0, 30.0);
  auto v = s.values();
  REQUIRE(v.size() >= 3);
  CHECK(v[0] == doctest::Approx(kPi * kPi / 4.0));
  CHECK(v[1] == doctest::Approx(kPi * kPi + kPi * kPi / 4.0));
  CHECK(v[2] == doctest::Approx(2.25 * kPi * kPi));
  CHECK(v[0] > 0.0);
}

TEST_CASE("FEM Neumann spectrum converges at second order") {
  auto exact = neumann_rectangle_analytic(1.0, 1.0, 25.0).values_with_multiplicity();
  auto coarse = spectrum_A(mesh_base({1.0, 1.0}, 1.0 / 16), 25.0)
                    .values_with_multiplicity();
  auto fine = spectrum_A(mesh_base({1.0, 1.0}, 1.0 / 32), 25.0)
                  .values_with_multiplicity();
  REQUIRE(coarse.size() == exact.size());
  REQUIRE(fine.size() == exact.size());
  CHECK(std::abs(coarse[0]) <= 1e-9);
  for (std::size_t k = 1; k < exact.size(); ++k) {
    const double ec = coarse[k] - exact[k];
    const double ef = fine[k] - exact[k];
    CHECK(ec > 0.0);  // conforming upper bounds
    CHECK(ef > 0.0);
    CHECK(ec / ef == doctest::Approx(4.0).epsilon(0.15));
    CHECK(close_rel(fine[k], exact[k], 2e-2));
  }
}

TEST_CASE("A_q merges the essential point") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 8);
  auto s = spectrum_Aq(mesh, 1.6, 25.0);
  bool tagged = false;
  for (const auto& e : s.entries)
    for (const auto& t : e.tags)
      if (t == "essential-limit") {
        tagged = true;
        CHECK(e.value == doctest::Approx(1.6));
      }
  CHECK(tagged);
  // q beyond the window leaves the spectrum unchanged
  auto plain = spectrum_A(mesh, 25.0);
  auto far = spectrum_Aq(mesh, 40.0, 25.0);
  CHECK(far.entries.size() == plain.entries.size());
}

TEST_CASE("A_r spectrum: kernel and small-r continuity") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 8);
  auto tiny = spectrum_Ar(mesh, 1e-9, 25.0);
  auto plain = spectrum_A(mesh, 25.0);
  REQUIRE(tiny.total_multiplicity() == plain.total_multiplicity());
  auto tv = tiny.values_with_multiplicity();
  auto pv = plain.values_with_multiplicity();
  CHECK(std::abs(tv[0]) <= 1e-9);
  for (std::size_t k = 0; k < tv.size(); ++k) CHECK(close_rel(tv[k], pv[k], 1e-6));
}

TEST_CASE("A_r matches the separable oracle") {
  LimitProblem prob{LimitVariant::Ar, 0.0, 1.0};
  auto oracle = separable_oracle(1.0, 1.0, prob, 25.0);
  auto fem = spectrum_Ar(mesh_base({1.0, 1.0}, 1.0 / 32), 1.0, 25.0);
  auto ov = oracle.values_with_multiplicity();
  auto fv = fem.values_with_multiplicity();
  REQUIRE(ov.size() >= 10);
  CHECK(std::abs(ov[0]) <= 1e-12);
  CHECK(close_rel(fv[1], ov[1], 1e-2));  // lambda_2 against the 1-D reduction
  // conforming values bound the oracle from above; steep surface modes
  // drift upward and the last one may leave the window, so match FEM
  // values to their oracle partners rather than compare counts
  REQUIRE(fv.size() >= ov.size() - 1);
  for (std::size_t k = 1; k < fv.size(); ++k) {
    double below = -1e300;
    for (double o : ov)
      if (o <= fv[k] + 1e-9) below = std::max(below, o);
    CHECK(below > -1e300);  // some oracle value at or below each FEM value
  }
  // low-lying values (well-resolved) match tightly
  for (int k = 1; k <= 3; ++k) CHECK(close_rel(fv[k], ov[k], 2e-2));
}

TEST_CASE("Robin curve: Neumann at zero, Dirichlet limit, monotone in mu") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 16);
  auto neumann = robin_eigenvalues(mesh, 0.0, 4).values_with_multiplicity();
  auto plain = spectrum_A(mesh, 25.0).values_with_multiplicity();
  for (int k = 0; k < 4; ++k) CHECK(close_rel(neumann[k], plain[k], 1e-9));

  auto hard = robin_eigenvalues(mesh, -1e6, 1).values_with_multiplicity();
  CHECK(close_rel(hard[0], kPi * kPi / 4.0, 1e-2));

  // discrete monotonicity: lambda_k nonincreasing in mu
  std::vector<double> prev;
  for (double mu : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
    auto cur = robin_eigenvalues(mesh, mu, 5).values_with_multiplicity();
    if (!prev.empty())
      for (int k = 0; k < 5; ++k) CHECK(cur[k] <= prev[k] + 1e-8 * std::abs(prev[k]) + 1e-10);
    prev = cur;
  }
}

TEST_CASE("Dirichlet-on-Gamma eigenvalues: conforming upper bounds") {
  auto exact = dirichlet_gamma_rectangle_analytic(1.0, 1.0, 30.0).values();
  auto coarse = dirichlet_gamma_eigenvalues(mesh_base({1.0, 1.0}, 1.0 / 8), 3)
                    .values_with_multiplicity();
  auto fine = dirichlet_gamma_eigenvalues(mesh_base({1.0, 1.0}, 1.0 / 16), 3)
                  .values_with_multiplicity();
  for (int k = 0; k < 3; ++k) {
    CHECK(coarse[k] >= exact[k]);
    CHECK(fine[k] >= exact[k]);
    CHECK(fine[k] - exact[k] < coarse[k] - exact[k]);  // gap shrinks
    CHECK(close_rel(fine[k], exact[k], 2e-2));
  }
}

TEST_CASE("k0 counts Dirichlet values below q") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 16);
  CHECK(compute_k0(mesh, 1.6) == 0);   // lambda_1^D ~ 2.467
  CHECK(compute_k0(mesh, 3.0) == 1);   // 2.467 < 3 < 12.34
  CHECK(compute_k0(mesh, 0.0) == 0);
  const double lam1d =
      dirichlet_gamma_eigenvalues(mesh, 1).values_with_multiplicity()[0];
  CHECK_THROWS_AS(compute_k0(mesh, lam1d + 1e-8), DegenerateQError);
}

TEST_CASE("fixed point solver reproduces the branch structure") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 16);
  const double q = 1.6, r = 0.25, Lambda = 30.0;
  auto branches = spectrum_Aqr_fixedpoint(mesh, q, r, Lambda);
  REQUIRE(!branches.empty());

  double prev_plus = -1.0;
  int n_plus = 0, n_minus = 0;
  for (const auto& b : branches) {
    CHECK(b.width <= 5e-10 * std::max(1.0, q) * 1.0001);
    if (b.plus) {
      ++n_plus;
      CHECK(b.lambda < q);
      CHECK(b.lambda >= 0.0);
      CHECK(b.lambda > prev_plus);  // strictly increasing here
      prev_plus = b.lambda;
    } else {
      ++n_minus;
      CHECK(b.lambda > q);
    }
  }
  CHECK(branches[0].plus);
  CHECK(std::abs(branches[0].lambda) < 1e-9);  // lambda_1^+ = 0
  CHECK(n_plus >= 5);
  CHECK(n_minus >= 3);

  // interlacing against the discrete Dirichlet ladder: the k-th minus root
  // sits strictly below the (k + k0)-th Dirichlet value
  auto dvals = dirichlet_gamma_eigenvalues(mesh, n_minus).values_with_multiplicity();
  int k = 0;
  for (const auto& b : branches) {
    if (b.plus) continue;
    CHECK(b.lambda < dvals[k]);
    ++k;
  }
}

TEST_CASE("block and fixed-point spectra agree off the window") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 16);
  const double q = 1.6, r = 0.25, Lambda = 30.0;
  AqrOptions aqr;
  auto branches = spectrum_Aqr_fixedpoint(mesh, q, r, Lambda, {}, aqr);
  auto block = spectrum_Aqr_block(mesh, q, r, Lambda, {}, aqr);

  // every fixed-point value off the window has a block twin within 1e-6
  for (const auto& b : branches) {
    if (std::abs(b.lambda - q) <= aqr.window * q) continue;
    double best = 1e300;
    for (const auto& e : block.entries)
      best = std::min(best, std::abs(e.value - b.lambda));
    CHECK(best <= 1e-6 * std::max(1.0, std::abs(b.lambda)));
  }
  // the window cluster exists and is tagged
  bool cluster = false;
  for (const auto& e : block.entries)
    for (const auto& t : e.tags)
      if (t == "essential-limit-cluster") cluster = true;
  CHECK(cluster);
}

TEST_CASE("window cluster count grows under refinement") {
  const double q = 1.6, r = 0.25;
  AqrOptions aqr;
  auto count_window = [&](double h) {
    auto block = spectrum_Aqr_block(mesh_base({1.0, 1.0}, h), q, r, 5.0, {}, aqr);
    int c = 0;
    for (const auto& e : block.entries)
      if (std::abs(e.value - q) <= aqr.window * q) c += e.multiplicity;
    return c;
  };
  const int coarse = count_window(1.0 / 8);
  const int fine = count_window(1.0 / 16);
  CHECK(fine > coarse);
}

TEST_CASE("separable oracle matches the fixed point for A_qr") {
  const double q = 1.6, r = 0.25, Lambda = 30.0;
  AqrOptions aqr;
  LimitProblem prob{LimitVariant::Aqr, q, r};
  auto oracle = separable_oracle(1.0, 1.0, prob, Lambda, aqr);
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 32);
  auto branches = spectrum_Aqr_fixedpoint(mesh, q, r, Lambda, {}, aqr);

  // compare off the window, skipping oracle values the mesh cannot see
  for (const auto& b : branches) {
    if (std::abs(b.lambda - q) <= 1.5 * aqr.window * q) continue;
    double best = 1e300;
    for (const auto& e : oracle.entries)
      best = std::min(best, std::abs(e.value - b.lambda));
    CHECK(best <= 5e-3 * std::max(1.0, std::abs(b.lambda)));
  }
  // plus values below q, minus above, zero present
  CHECK(std::abs(oracle.entries[0].value) <= 1e-12);
}

TEST_CASE("sigma0 dispatch covers the four regimes") {
  auto mesh = mesh_base({1.0, 1.0}, 1.0 / 8);
  const ShapeSpec shape{};
  const BaseDomain base{1.0, 1.0};
  const double Lambda = 25.0;

  auto plain = sigma0_for_regime(classify_regime(1.0, 0.0, shape, base), mesh, Lambda);
  auto a_ref = spectrum_A(mesh, Lambda);
  CHECK(plain.values() == a_ref.values());

  auto ar = sigma0_for_regime(classify_regime(1.0, -1.0, shape, base), mesh, Lambda);
  CHECK(ar.values() != a_ref.values());  // boundary mass shifts values

  auto aq0 = sigma0_for_regime(classify_regime(4.0, 0.0, shape, base), mesh, Lambda);
  bool zero_tag = false;
  for (const auto& e : aq0.entries)
    for (const auto& t : e.tags)
      if (t == "essential-limit") zero_tag = (std::abs(e.value) < 1e-6);
  CHECK(zero_tag);

  auto aqr = sigma0_for_regime(classify_regime(2.0, -1.0, shape, base), mesh, Lambda);
  bool has_plus = false, has_minus = false, has_q = false;
  for (const auto& e : aqr.entries)
    for (const auto& t : e.tags) {
      has_plus = has_plus || t == "branch+";
      has_minus = has_minus || t == "branch-";
      has_q = has_q || (t == "essential-limit" && std::abs(e.value - 1.6) < 1e-12);
    }
  CHECK(has_plus);
  CHECK(has_minus);
  CHECK(has_q);
}
