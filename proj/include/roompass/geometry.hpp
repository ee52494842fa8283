#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace roompass {

/// Base rectangle Omega = (0, W) x (-H, 0); Gamma is the full top side.
struct BaseDomain {
  double width = 1.0;
  double height = 1.0;
};

/// Reference-cell shapes: room B = (-w_B/2, w_B/2) x (0, h_B), passage
/// cross-section D = (-w_D/2, w_D/2), gluing radius R.  All dimensionless.
struct ShapeSpec {
  double room_width = 0.5;     // w_B
  double room_height = 0.5;    // h_B
  double passage_width = 0.4;  // w_D
  double glue_radius = 0.25;   // R

  double room_area() const { return room_width * room_height; }     // |B|
  double passage_measure() const { return passage_width; }          // |D|
};

/// Sizes of one epsilon-member of the perturbation family.
struct PerturbationParams {
  double eps = 0.0;
  double b = 0.0;    // room scale
  double d = 0.0;    // passage width scale
  double h = 0.0;    // passage length
  double rho = 1.0;  // mass density multiplier in the rooms
};

struct ScalingNumbers {
  double q_eps = 0.0;
  double r_eps = 0.0;
  double d_eps = 0.0;      // |ln d| (n = 2)
  int n_eps = 0;           // number of attached room-passage pairs
  double room_mass = 0.0;  // rho * b^2 * |B| * N
};

struct RegimeClass {
  enum class Q { Zero, FinitePositive, Infinite };
  Q q_kind = Q::Infinite;
  double q_value = 0.0;  // lim q_eps when finite-positive
  bool r_positive = false;
  double r_value = 0.0;  // lim r_eps when positive
};

struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

struct PerturbedDomain {
  BaseDomain base;
  ShapeSpec shape;
  PerturbationParams params;
  std::vector<int> indices;    // the index set
  std::vector<Rect> passages;  // aligned with indices
  std::vector<Rect> rooms;     // aligned with indices
  double total_area() const;
};

struct AssumptionCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // >= 0 means satisfied, by how much
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;
  bool hard_pass = false;      // every inequality constraint holds
  double eps_log_term = 0.0;   // eps * |ln d|
  bool smallness_warning = false;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The power-law family d = eps^alpha, b = h = eps, rho = eps^beta.
PerturbationParams exponents_to_params(double eps, double alpha, double beta);

ScalingNumbers compute_scaling(const PerturbationParams& params,
                               const ShapeSpec& shape, const BaseDomain& base);

RegimeClass classify_regime(double alpha, double beta, const ShapeSpec& shape,
                            const BaseDomain& base);

ValidationReport validate_assumptions(const PerturbationParams& params,
                                      const ShapeSpec& shape,
                                      double smallness_threshold = 1.0);

PerturbedDomain build_perturbed_domain(const BaseDomain& base,
                                       const PerturbationParams& params,
                                       const ShapeSpec& shape);

/// Anchor indices passing the boundary-distance rule.
std::vector<int> index_set(const BaseDomain& base, double eps);

std::string domain_to_json(const PerturbedDomain& domain);

}  // namespace roompass
