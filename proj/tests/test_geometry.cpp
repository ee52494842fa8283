#include <cmath>

#include "doctest.h"
#include "roompass/geometry.hpp"

using namespace roompass;

TEST_CASE("power-law family evaluation") {
  auto p = exponents_to_params(0.1, 2.0, -1.0);
  CHECK(p.b == doctest::Approx(0.1));
  CHECK(p.h == doctest::Approx(0.1));
  CHECK(p.d == doctest::Approx(0.01));
  CHECK(p.rho == doctest::Approx(10.0));

  auto u = exponents_to_params(0.1, 1.0, 0.0);
  CHECK(u.d == doctest::Approx(0.1));
  CHECK(u.rho == doctest::Approx(1.0));

  auto q = exponents_to_params(0.25, 4.0, 0.0);
  CHECK(q.d == doctest::Approx(0.00390625).epsilon(1e-14));

  CHECK_THROWS_AS(exponents_to_params(0.1, 0.5, 0.0), GeometryError);
  CHECK_THROWS_AS(exponents_to_params(1.5, 2.0, 0.0), GeometryError);
  CHECK_THROWS_AS(exponents_to_params(0.1, 2.0, -2.0), GeometryError);
}

TEST_CASE("scaling numbers for the coupled family") {
  const BaseDomain base{1.0, 1.0};
  const ShapeSpec shape{};  // |B| = 0.25, |D| = 0.4
  auto p = exponents_to_params(0.1, 2.0, -1.0);
  auto s = compute_scaling(p, shape, base);
  CHECK(s.q_eps == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(s.r_eps == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.d_eps == doctest::Approx(std::abs(std::log(0.01))));

  auto p2 = exponents_to_params(0.1, 4.0, 0.0);
  auto s2 = compute_scaling(p2, shape, base);
  CHECK(s2.q_eps == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("scaling identity q*r = d|D|/(h eps)") {
  const BaseDomain base{1.0, 1.0};
  const ShapeSpec shape{};
  for (double eps : {0.25, 0.125, 0.05}) {
    for (double alpha : {1.0, 2.0, 3.0}) {
      auto p = exponents_to_params(eps, alpha, -0.5);
      auto s = compute_scaling(p, shape, base);
      CHECK(s.q_eps * s.r_eps ==
            doctest::Approx(p.d * shape.passage_measure() / (p.h * eps))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("regime classification matches the exponent table") {
  const BaseDomain base{1.0, 1.0};
  const ShapeSpec shape{};
  auto c = classify_regime(2.0, -1.0, shape, base);
  CHECK(c.q_kind == RegimeClass::Q::FinitePositive);
  CHECK(c.q_value == doctest::Approx(1.6));
  CHECK(c.r_positive);
  CHECK(c.r_value == doctest::Approx(0.25));

  auto z = classify_regime(4.0, 0.0, shape, base);
  CHECK(z.q_kind == RegimeClass::Q::Zero);
  CHECK_FALSE(z.r_positive);

  auto inf = classify_regime(1.0, 0.0, shape, base);
  CHECK(inf.q_kind == RegimeClass::Q::Infinite);
  CHECK_FALSE(inf.r_positive);
}

TEST_CASE("classification agrees with the numeric q_eps trend") {
  const BaseDomain base{1.0, 1.0};
  const ShapeSpec shape{};
  struct Case {
    double alpha, beta;
  } cases[] = {{2.0, -1.0}, {4.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}, {1.0, -1.0}};
  for (const auto& c : cases) {
    auto regime = classify_regime(c.alpha, c.beta, shape, base);
    double prev = -1.0;
    bool monotone_up = true, monotone_down = true, constant = true;
    for (int k = 3; k <= 8; ++k) {
      auto p = exponents_to_params(std::pow(2.0, -k), c.alpha, c.beta);
      auto s = compute_scaling(p, shape, base);
      if (prev >= 0.0) {
        monotone_up = monotone_up && s.q_eps >= prev * 0.999;
        monotone_down = monotone_down && s.q_eps <= prev * 1.001;
        constant = constant && std::abs(s.q_eps - prev) <= 1e-12 * prev;
      }
      prev = s.q_eps;
    }
    switch (regime.q_kind) {
      case RegimeClass::Q::Zero: CHECK(monotone_down); break;
      case RegimeClass::Q::Infinite: CHECK(monotone_up); break;
      case RegimeClass::Q::FinitePositive:
        CHECK(constant);  // powers cancel exactly for alpha = beta + 3
        CHECK(prev == doctest::Approx(regime.q_value).epsilon(1e-12));
        break;
    }
  }
}

TEST_CASE("assumption validator") {
  const ShapeSpec shape{};
  auto good = validate_assumptions({0.1, 0.1, 0.01, 0.1, 1.0}, shape);
  CHECK(good.hard_pass);
  CHECK(good.eps_log_term == doctest::Approx(0.460517).epsilon(1e-5));
  CHECK_FALSE(good.smallness_warning);

  auto bad = validate_assumptions({0.1, 0.1, 0.2, 0.1, 1.0}, shape);
  CHECK_FALSE(bad.hard_pass);
  bool found = false;
  for (const auto& c : bad.checks)
    if (c.name == "size-ordering") found = !c.pass;
  CHECK(found);

  ShapeSpec wide = shape;
  wide.passage_width = wide.room_width;  // as wide as the room
  auto r = validate_assumptions({0.1, 0.1, 0.01, 0.1, 1.0}, wide);
  CHECK_FALSE(r.hard_pass);
  found = false;
  for (const auto& c : r.checks)
    if (c.name == "passage-in-disk") found = !c.pass;
  CHECK(found);
}

TEST_CASE("index set follows the anchor distance rule") {
  const BaseDomain base{1.0, 1.0};
  CHECK(index_set(base, 0.25) == std::vector<int>{1, 2, 3});
  CHECK(index_set(base, 0.5) == std::vector<int>{1});
  CHECK(index_set(base, 1.5).empty());
}

TEST_CASE("perturbed domain construction and area identity") {
  const BaseDomain base{1.0, 1.0};
  const ShapeSpec shape{};
  auto p = exponents_to_params(0.25, 2.0, -1.0);
  auto dom = build_perturbed_domain(base, p, shape);
  REQUIRE(dom.indices.size() == 3);
  const double expected =
      1.0 + 3.0 * (p.d * shape.passage_width * p.h) +
      3.0 * (p.b * p.b * shape.room_width * shape.room_height);
  CHECK(dom.total_area() == doctest::Approx(expected).epsilon(1e-14));

  // passages sit on Gamma, rooms directly above their passages
  for (std::size_t k = 0; k < dom.indices.size(); ++k) {
    CHECK(dom.passages[k].y0 == 0.0);
    CHECK(dom.passages[k].y1 == doctest::Approx(p.h));
    CHECK(dom.rooms[k].y0 == doctest::Approx(p.h));
    CHECK(dom.passages[k].x0 > dom.rooms[k].x0);
    CHECK(dom.passages[k].x1 < dom.rooms[k].x1);
  }
  // rooms pairwise disjoint
  for (std::size_t k = 0; k + 1 < dom.rooms.size(); ++k)
    CHECK(dom.rooms[k].x1 < dom.rooms[k + 1].x0);

  CHECK_THROWS_AS(build_perturbed_domain(base, exponents_to_params(0.9, 2.0, 0.0), shape),
                  GeometryError);

  auto json = domain_to_json(dom);
  CHECK(json.find("\"omega\"") != std::string::npos);
  CHECK(json.find("\"passage\"") != std::string::npos);
  CHECK(json.find("\"room\"") != std::string::npos);
}
