#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "roompass/analysis.hpp"

using namespace roompass;

namespace {
Spectrum make(std::initializer_list<double> vals) {
  return Spectrum::from_values(std::vector<double>(vals));
}
}  // namespace

TEST_CASE("Hausdorff distance hand values") {
  CHECK(hausdorff_distance(make({0.0, 1.0, 2.0}), make({0.0, 1.0, 2.0}),
                           {-1.0, 3.0}) == doctest::Approx(0.0));
  CHECK(hausdorff_distance(make({0.0}), make({0.0, 1.0}), {-1.0, 2.0}) ==
        doctest::Approx(1.0));
  CHECK(hausdorff_distance(make({0.0, 0.5}), make({0.2, 0.6}), {0.0, 1.0}) ==
        doctest::Approx(0.2));
}

TEST_CASE("Hausdorff distance rejects empty truncations") {
  CHECK_THROWS_AS(hausdorff_distance(make({5.0}), make({0.5}), {0.0, 1.0}),
                  AnalysisError);
}

TEST_CASE("Hausdorff metric axioms on random finite sets") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> len(1, 8);
  const Interval l{-1.0, 11.0};
  for (int it = 0; it < 500; ++it) {
    auto rand_set = [&] {
      std::vector<double> v(len(rng));
      for (auto& x : v) x = u(rng);
      return Spectrum::from_values(std::move(v));
    };
    auto X = rand_set(), Y = rand_set(), Z = rand_set();
    const double dxy = hausdorff_distance(X, Y, l);
    const double dyx = hausdorff_distance(Y, X, l);
    CHECK(dxy == doctest::Approx(dyx));  // symmetry
    CHECK(dxy >= 0.0);
    const double dxz = hausdorff_distance(X, Z, l);
    const double dzy = hausdorff_distance(Z, Y, l);
    CHECK(dxy <= dxz + dzy + 1e-12);  // triangle inequality
    CHECK(hausdorff_distance(X, X, l) == doctest::Approx(0.0));
  }
}

TEST_CASE("threshold bound formula and limits") {
  ScalingNumbers s;
  s.q_eps = 1.6;
  PerturbationParams p;
  p.h = 0.1;
  CHECK(theorem2_bound(s, p) == doctest::Approx(1.5915119).epsilon(1e-6));
  // h -> 0 recovers q_eps
  p.h = 1e-9;
  CHECK(theorem2_bound(s, p) == doctest::Approx(1.6));
  // q -> 0 collapses the threshold
  s.q_eps = 1e-12;
  p.h = 0.1;
  CHECK(theorem2_bound(s, p) <= 1e-12);
}

TEST_CASE("threshold bound is monotone in q and h") {
  PerturbationParams p;
  double prev = 0.0;
  for (double q : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    ScalingNumbers s;
    s.q_eps = q;
    p.h = 0.2;
    const double b = theorem2_bound(s, p);
    CHECK(b > prev);
    prev = b;
  }
  ScalingNumbers s;
  s.q_eps = 2.0;
  prev = 1e300;
  for (double h : {0.05, 0.1, 0.2, 0.4}) {
    p.h = h;
    const double b = theorem2_bound(s, p);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("per-k threshold checks") {
  auto spec = make({0.0, 1.0, 1.5, 3.0});
  auto checks = check_threshold(spec, 2.0, 3, 0.05);
  REQUIRE(checks.size() == 3);
  CHECK(checks[0].pass);  // lambda_1 = 0
  CHECK(checks[1].pass);
  CHECK(checks[2].pass);
  auto failing = check_threshold(spec, 1.2, 4, 0.05);
  CHECK_FALSE(failing[3].pass);  // 3.0 > 1.26
  CHECK(failing[3].margin < 0.0);
  CHECK_THROWS_AS(check_threshold(spec, 1.0, 9, 0.0), AnalysisError);
}

TEST_CASE("convergence trend verdict") {
  CHECK(convergence_table({{0.25, 0.8}, {0.125, 0.35}, {0.0625, 0.15}}).pass);
  CHECK_FALSE(convergence_table({{0.25, 0.3}, {0.125, 0.3}, {0.0625, 0.3}}).pass);
  // one jitter bump within 10% then final below half
  CHECK(convergence_table({{0.25, 0.8}, {0.125, 0.86}, {0.0625, 0.3}}).pass);
  // bump beyond 10% fails even if halved at the end
  CHECK_FALSE(convergence_table({{0.25, 0.8}, {0.125, 0.95}, {0.0625, 0.3}}).pass);
  CHECK_THROWS_AS(convergence_table({{0.25, 0.8}, {0.125, 0.4}}), AnalysisError);
  CHECK_THROWS_AS(convergence_table({{0.25, 0.8}, {0.3, 0.4}, {0.1, 0.1}}),
                  AnalysisError);
}

TEST_CASE("Lambda placement lands in a spectral gap") {
  auto sigma0 = make({0.0, 9.87, 19.74, 39.48});
  const double shifted = place_lambda_in_gap(sigma0, 30.0);
  CHECK(shifted == doctest::Approx(0.5 * (19.74 + 39.48)));
  // already-deep gap keeps Lambda nearby
  const double kept = place_lambda_in_gap(make({0.0, 100.0}), 30.0);
  CHECK(kept >= 27.0);
  CHECK(kept <= 33.0);
}

TEST_CASE("spectrum CSV round trip") {
  Spectrum s;
  s.insert(0.0, 1, "", 1e-12);
  s.insert(1.6, 2, "essential-limit", 0.0);
  s.entries[1].tags.push_back("branch+");
  std::ostringstream os;
  write_spectrum_csv(s, 0.25, os);
  CHECK(os.str().rfind("eps,k,lambda,multiplicity,tag,residual\n", 0) == 0);
  std::istringstream is(os.str());
  auto back = read_spectrum_csv(is);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[1].value == 1.6);
  CHECK(back.entries[1].multiplicity == 2);
  REQUIRE(back.entries[1].tags.size() == 2);
  CHECK(back.entries[1].tags[1] == "branch+");
}
