#include "roompass/geometry.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace roompass {

double PerturbedDomain::total_area() const {
  double a = base.width * base.height;
  for (const auto& r : passages) a += r.area();
  for (const auto& r : rooms) a += r.area();
  return a;
}

PerturbationParams exponents_to_params(double eps, double alpha, double beta) {
  if (!(eps > 0.0 && eps < 1.0))
    throw GeometryError("exponents_to_params: eps must lie in (0, 1)");
  if (alpha < 1.0)
    throw GeometryError("exponents_to_params: alpha < 1 violates d <= b");
  if (beta < -1.0)
    throw GeometryError("exponents_to_params: beta < -1 gives unbounded room mass");
  PerturbationParams p;
  p.eps = eps;
  p.b = eps;
  p.h = eps;
  p.d = std::pow(eps, alpha);
  p.rho = std::pow(eps, beta);
  return p;
}

std::vector<int> index_set(const BaseDomain& base, double eps) {
  // anchors (eps*i, 0) interior to Gamma with
  // dist(anchor, boundary minus Gamma) >= eps*sqrt(2)/2
  const double margin = eps * std::sqrt(2.0) / 2.0;
  std::vector<int> idx;
  for (int i = 1; eps * i < base.width; ++i) {
    const double x = eps * i;
    if (x >= margin && base.width - x >= margin) idx.push_back(i);
  }
  return idx;
}

ScalingNumbers compute_scaling(const PerturbationParams& params,
                               const ShapeSpec& shape, const BaseDomain& base) {
  ScalingNumbers s;
  const double vol_b = shape.room_area();
  const double vol_d = shape.passage_measure();
  s.q_eps = (params.d * vol_d) / (params.h * params.rho * params.b * params.b * vol_b);
  s.r_eps = (params.rho * params.b * params.b * vol_b) / params.eps;
  s.d_eps = std::abs(std::log(params.d));
  s.n_eps = static_cast<int>(index_set(base, params.eps).size());
  s.room_mass = params.rho * params.b * params.b * vol_b * s.n_eps;
  return s;
}

RegimeClass classify_regime(double alpha, double beta, const ShapeSpec& shape,
                            const BaseDomain& /*base*/) {
  if (alpha < 1.0 || beta < -1.0)
    throw GeometryError("classify_regime: exponents outside the admissible family");
  RegimeClass r;
  const double gap = alpha - (beta + 3.0);
  if (gap > 0.0) {
    r.q_kind = RegimeClass::Q::Zero;
    r.q_value = 0.0;
  } else if (gap == 0.0) {
    r.q_kind = RegimeClass::Q::FinitePositive;
    r.q_value = shape.passage_measure() / shape.room_area();
  } else {
    r.q_kind = RegimeClass::Q::Infinite;
  }
  r.r_positive = (beta == -1.0);
  r.r_value = r.r_positive ? shape.room_area() : 0.0;
  return r;
}

ValidationReport validate_assumptions(const PerturbationParams& params,
                                      const ShapeSpec& shape,
                                      double smallness_threshold) {
  ValidationReport rep;
  auto add = [&rep](const std::string& name, bool pass, double margin,
                    const std::string& detail) {
    rep.checks.push_back({name, pass, margin, detail});
  };

  const double wb = shape.room_width, hb = shape.room_height;
  const double wd = shape.passage_width, R = shape.glue_radius;

  add("room-in-cell", wb > 0.0 && wb < 1.0 && hb > 0.0, std::min(wb, 1.0 - wb),
      "room fits the unit reference cell");
  add("glue-radius", R > 0.0 && R < 0.5 && 2.0 * R <= wb,
      std::min(0.5 - R, wb - 2.0 * R), "flat disk of radius R on the room floor");
  add("passage-in-disk", wd > 0.0 && wd < 2.0 * R, 2.0 * R - wd,
      "passage cross-section inside the gluing disk");
  add("size-ordering", params.d > 0.0 && params.d <= params.b && params.b <= params.eps,
      std::min(params.b - params.d, params.eps - params.b),
      "d <= b <= eps");
  add("passage-length", params.h > 0.0, params.h, "h positive (vanishes with eps)");
  add("density-positive", params.rho > 0.0, params.rho, "room density positive");

  rep.hard_pass = true;
  for (const auto& c : rep.checks) rep.hard_pass = rep.hard_pass && c.pass;

  rep.eps_log_term = params.eps * std::abs(std::log(params.d));
  rep.smallness_warning = rep.eps_log_term > smallness_threshold;
  add("log-smallness", !rep.smallness_warning,
      smallness_threshold - rep.eps_log_term,
      "eps*|ln d| against the smallness threshold (warning only)");
  return rep;
}

PerturbedDomain build_perturbed_domain(const BaseDomain& base,
                                       const PerturbationParams& params,
                                       const ShapeSpec& shape) {
  const ValidationReport rep = validate_assumptions(params, shape);
  if (!rep.hard_pass) {
    std::ostringstream os;
    os << "build_perturbed_domain: assumption violations:";
    for (const auto& c : rep.checks)
      if (!c.pass) os << " " << c.name;
    throw GeometryError(os.str());
  }

  PerturbedDomain dom;
  dom.base = base;
  dom.shape = shape;
  dom.params = params;
  dom.indices = index_set(base, params.eps);
  if (dom.indices.empty())
    throw GeometryError("build_perturbed_domain: empty index set (eps too large)");

  const double half_pass = params.d * shape.passage_width / 2.0;
  const double half_room = params.b * shape.room_width / 2.0;
  const double room_top = params.h + params.b * shape.room_height;
  for (int i : dom.indices) {
    const double cx = params.eps * i;
    dom.passages.push_back({cx - half_pass, cx + half_pass, 0.0, params.h});
    dom.rooms.push_back({cx - half_room, cx + half_room, params.h, room_top});
  }
  return dom;
}

std::string domain_to_json(const PerturbedDomain& domain) {
  nlohmann::json j;
  j["rectangles"] = nlohmann::json::array();
  j["rectangles"].push_back(
      {{"rect", {0.0, domain.base.width, -domain.base.height, 0.0}},
       {"tag", "omega"}});
  for (std::size_t k = 0; k < domain.indices.size(); ++k) {
    const auto& t = domain.passages[k];
    const auto& r = domain.rooms[k];
    j["rectangles"].push_back({{"rect", {t.x0, t.x1, t.y0, t.y1}},
                               {"tag", "passage"},
                               {"index", domain.indices[k]}});
    j["rectangles"].push_back({{"rect", {r.x0, r.x1, r.y0, r.y1}},
                               {"tag", "room"},
                               {"index", domain.indices[k]}});
  }
  j["eps"] = domain.params.eps;
  return j.dump(2);
}

}  // namespace roompass
