#include "roompass/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace roompass {

PerturbationParams StudyConfig::params_for(std::size_t j) const {
  if (!explicit_params.empty()) return explicit_params.at(j);
  return exponents_to_params(eps_list.at(j), *alpha, *beta);
}

double StudyConfig::mesh_h_for(std::size_t j) const {
  if (mesh_h.size() == 1) return mesh_h.front();
  return mesh_h.at(j);
}

RegimeClass StudyConfig::regime() const {
  if (alpha && beta) return classify_regime(*alpha, *beta, shape, base);
  RegimeClass r;
  if (std::isinf(*q_limit)) {
    r.q_kind = RegimeClass::Q::Infinite;
  } else if (*q_limit == 0.0) {
    r.q_kind = RegimeClass::Q::Zero;
  } else {
    r.q_kind = RegimeClass::Q::FinitePositive;
    r.q_value = *q_limit;
  }
  r.r_positive = *r_limit > 0.0;
  r.r_value = *r_limit;
  return r;
}

void StudyConfig::validate() const {
  if (eps_list.empty()) throw ConfigError("config: eps list is empty");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw ConfigError("config: eps list must be strictly decreasing");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("config: eps must lie in (0, 1)");
  if (!(lambda > 0.0)) throw ConfigError("config: lambda must be positive");
  if (!(tolerance > 0.0 && tolerance < 1e-3))
    throw ConfigError("config: tol must lie in (0, 1e-3)");
  if (mesh_h.empty()) throw ConfigError("config: mesh_h missing");
  if (mesh_h.size() != 1 && mesh_h.size() != eps_list.size())
    throw ConfigError("config: mesh_h needs one entry or one per eps");
  for (double h : mesh_h)
    if (!(h > 0.0)) throw ConfigError("config: mesh_h entries must be positive");
  if (!(sigma0_h > 0.0)) throw ConfigError("config: sigma0_h must be positive");
  if (sigma0_max_refine < 0)
    throw ConfigError("config: sigma0_max_refine must be nonnegative");
  if (!(fem_slack >= 0.0)) throw ConfigError("config: fem_slack must be nonnegative");
  if (!(q_window > 0.0 && q_window < 0.5))
    throw ConfigError("config: q_window must lie in (0, 0.5)");
  if (!(aspect_limit >= 1.0)) throw ConfigError("config: aspect_limit must be >= 1");

  if (explicit_params.empty()) {
    if (!alpha || !beta)
      throw ConfigError("config: provide alpha and beta, or explicit param lists");
    if (*alpha < 1.0) throw ConfigError("config: alpha < 1 violates d <= b");
    if (*beta < -1.0) throw ConfigError("config: beta < -1 gives unbounded mass");
  } else {
    if (explicit_params.size() != eps_list.size())
      throw ConfigError("config: explicit parameter lists must match eps length");
    if ((!alpha || !beta) && (!q_limit || !r_limit))
      throw ConfigError(
          "config: explicit parameters need declared q_limit and r_limit "
          "(or alpha/beta) to classify the regime");
    if (r_limit && (*r_limit < 0.0 || std::isinf(*r_limit)))
      throw ConfigError("config: r_limit must be finite and nonnegative");
    if (q_limit && *q_limit < 0.0)
      throw ConfigError("config: q_limit must be nonnegative (or inf)");
  }
  if (!(shape.room_width > 0.0 && shape.room_width < 1.0 &&
        shape.room_height > 0.0))
    throw ConfigError("config: room shape outside the reference cell");
  if (!(shape.glue_radius > 0.0 && shape.glue_radius < 0.5 &&
        2.0 * shape.glue_radius <= shape.room_width))
    throw ConfigError("config: glue radius incompatible with the room");
  if (!(shape.passage_width > 0.0 &&
        shape.passage_width < 2.0 * shape.glue_radius))
    throw ConfigError("config: passage width must fit the gluing disk");
}

namespace {

struct RawValue {
  int line = 0;
  std::string scalar;               // empty if list
  std::vector<std::string> list;
  bool is_list = false;
};

double parse_number(const RawValue& v, const std::string& key,
                    const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key +
                      "': not a number: '" + text + "'");
  }
  if (used != text.size())
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key +
                      "': trailing characters in number '" + text + "'");
  return x;
}

double scalar_number(const RawValue& v, const std::string& key) {
  if (v.is_list)
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key +
                      "' expects a scalar");
  return parse_number(v, key, v.scalar);
}

std::vector<double> number_list(const RawValue& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_list) {
    for (const auto& item : v.list) out.push_back(parse_number(v, key, item));
  } else {
    out.push_back(parse_number(v, key, v.scalar));
  }
  if (out.empty())
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key +
                      "': empty list");
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

StudyConfig parse_config(const std::string& text, StudyConfig start) {
  std::vector<std::pair<std::string, RawValue>> entries;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    RawValue raw;
    raw.line = line_no;
    if (value.front() == '[') {
      if (value.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated list");
      raw.is_list = true;
      std::string body = value.substr(1, value.size() - 2);
      std::size_t pos = 0;
      while (pos <= body.size()) {
        const auto comma = body.find(',', pos);
        const std::string item =
            trim(body.substr(pos, comma == std::string::npos ? std::string::npos
                                                             : comma - pos));
        if (!item.empty()) raw.list.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      raw.scalar = value;
    }
    entries.emplace_back(key, std::move(raw));
  }

  // a preset key rebases everything else on the named preset
  for (const auto& [key, raw] : entries) {
    if (key == "preset") {
      if (raw.is_list)
        throw ConfigError("config line " + std::to_string(raw.line) +
                          ": preset expects a name");
      start = preset_config(raw.scalar);
    }
  }

  StudyConfig cfg = std::move(start);
  std::vector<double> pe, pb, pd, ph, pr;
  for (const auto& [key, raw] : entries) {
    if (key == "preset") {
      continue;  // applied above
    } else if (key == "alpha") {
      cfg.alpha = scalar_number(raw, key);
    } else if (key == "beta") {
      cfg.beta = scalar_number(raw, key);
    } else if (key == "eps") {
      cfg.eps_list = number_list(raw, key);
    } else if (key == "base_width") {
      cfg.base.width = scalar_number(raw, key);
    } else if (key == "base_height") {
      cfg.base.height = scalar_number(raw, key);
    } else if (key == "room_width") {
      cfg.shape.room_width = scalar_number(raw, key);
    } else if (key == "room_height") {
      cfg.shape.room_height = scalar_number(raw, key);
    } else if (key == "passage_width") {
      cfg.shape.passage_width = scalar_number(raw, key);
    } else if (key == "glue_radius") {
      cfg.shape.glue_radius = scalar_number(raw, key);
    } else if (key == "lambda") {
      cfg.lambda = scalar_number(raw, key);
    } else if (key == "mesh_h") {
      cfg.mesh_h = number_list(raw, key);
    } else if (key == "sigma0_h") {
      cfg.sigma0_h = scalar_number(raw, key);
    } else if (key == "sigma0_max_refine") {
      cfg.sigma0_max_refine = static_cast<int>(scalar_number(raw, key));
    } else if (key == "tol") {
      cfg.tolerance = scalar_number(raw, key);
    } else if (key == "fem_slack") {
      cfg.fem_slack = scalar_number(raw, key);
    } else if (key == "q_window") {
      cfg.q_window = scalar_number(raw, key);
    } else if (key == "aspect_limit") {
      cfg.aspect_limit = scalar_number(raw, key);
    } else if (key == "smallness_threshold") {
      cfg.smallness_threshold = scalar_number(raw, key);
    } else if (key == "vertex_budget") {
      cfg.vertex_budget = static_cast<std::size_t>(scalar_number(raw, key));
    } else if (key == "out_dir") {
      if (raw.is_list)
        throw ConfigError("config line " + std::to_string(raw.line) +
                          ": out_dir expects a path");
      cfg.out_dir = raw.scalar;
    } else if (key == "q_limit") {
      if (!raw.is_list && (raw.scalar == "inf" || raw.scalar == "infinity"))
        cfg.q_limit = std::numeric_limits<double>::infinity();
      else
        cfg.q_limit = scalar_number(raw, key);
    } else if (key == "r_limit") {
      cfg.r_limit = scalar_number(raw, key);
    } else if (key == "param_eps") {
      pe = number_list(raw, key);
    } else if (key == "param_b") {
      pb = number_list(raw, key);
    } else if (key == "param_d") {
      pd = number_list(raw, key);
    } else if (key == "param_h") {
      ph = number_list(raw, key);
    } else if (key == "param_rho") {
      pr = number_list(raw, key);
    } else {
      throw ConfigError("config line " + std::to_string(raw.line) +
                        ": unknown key '" + key + "'");
    }
  }

  if (!pe.empty() || !pb.empty() || !pd.empty() || !ph.empty() || !pr.empty()) {
    const std::size_t n = pe.size();
    if (pb.size() != n || pd.size() != n || ph.size() != n || pr.size() != n)
      throw ConfigError(
          "config: param_eps/param_b/param_d/param_h/param_rho must have equal "
          "lengths");
    cfg.explicit_params.clear();
    for (std::size_t j = 0; j < n; ++j)
      cfg.explicit_params.push_back({pe[j], pb[j], pd[j], ph[j], pr[j]});
    cfg.eps_list = pe;
    cfg.alpha.reset();
    cfg.beta.reset();
  }

  cfg.validate();
  return cfg;
}

StudyConfig preset_config(const std::string& name) {
  StudyConfig cfg;
  cfg.preset = name;
  cfg.eps_list = {0.25, 0.125, 0.0625};
  cfg.mesh_h = {1.0 / 64.0};
  if (name == "coupled") {
    cfg.alpha = 2.0;
    cfg.beta = -1.0;
    cfg.lambda = 30.0;
  } else if (name == "courant-hilbert") {
    cfg.alpha = 4.0;
    cfg.beta = 0.0;
    cfg.lambda = 30.0;
  } else if (name == "steklov") {
    cfg.alpha = 1.0;
    cfg.beta = -1.0;
    cfg.lambda = 30.0;
  } else if (name == "neumann") {
    cfg.alpha = 1.0;
    cfg.beta = 0.0;
    cfg.lambda = 30.0;
  } else {
    throw ConfigError("unknown preset '" + name +
                      "' (available: coupled, courant-hilbert, steklov, neumann)");
  }
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"coupled", "courant-hilbert", "steklov", "neumann"};
}

}  // namespace roompass
