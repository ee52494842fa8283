#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "roompass/geometry.hpp"

namespace roompass {

enum class RegionKind { Omega, Passage, Room };

struct RegionTag {
  RegionKind kind = RegionKind::Omega;
  int index = -1;  // attachment index for passage/room, -1 for omega
  bool operator==(const RegionTag&) const = default;
};

enum class BoundaryTag { Gamma, Outer };

/// Conforming triangulation of a multi-rectangle domain.  Triangles are
/// counterclockwise; vertices on rectangle interfaces are shared, never
/// duplicated.
struct TriMesh {
  std::vector<double> vx, vy;
  std::vector<std::array<int, 3>> triangles;
  std::vector<RegionTag> region;  // per triangle
  std::vector<std::array<int, 2>> boundary_edges;
  std::vector<BoundaryTag> boundary_tags;
  std::vector<int> gamma_vertices;  // ordered by x coordinate

  int vertex_count() const { return static_cast<int>(vx.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  double region_area(RegionKind kind) const;
};

struct MeshOptions {
  double target_h = 1.0 / 32.0;
  double aspect_limit = 8.0;   // passage cells: length cap = aspect * width
  double grading_ratio = 2.0;  // geometric growth per layer away from openings
  std::size_t vertex_budget = 2'000'000;
};

struct QualityReport {
  double min_angle_deg = 0.0;
  double max_aspect_ratio = 0.0;  // longest/shortest edge over all triangles
  double min_edge_length = 0.0;
  std::size_t vertex_count = 0;
  std::size_t triangle_count = 0;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform tensor mesh of the base rectangle (0,W) x (-H,0); the whole top
/// side is Gamma.
TriMesh mesh_base(const BaseDomain& base, double target_h,
                  std::size_t vertex_budget = MeshOptions{}.vertex_budget);

TriMesh mesh_perturbed_domain(const PerturbedDomain& domain, const MeshOptions& opts);

/// Split every triangle into four by edge midpoints; tags inherited.
TriMesh refine_uniform(const TriMesh& mesh,
                       std::size_t vertex_budget = MeshOptions{}.vertex_budget);

QualityReport mesh_quality(const TriMesh& mesh);

/// Structural checks: positive areas, edge conformity (interior edges
/// shared by exactly two triangles), no near-duplicate vertices.
/// Throws MeshError on violation.
void validate_mesh(const TriMesh& mesh);

/// Plain-text export: header "V T E", V lines "x y", T lines
/// "i j k region", E lines "i j boundary".  Bit-exact round trip.
void write_mesh(const TriMesh& mesh, std::ostream& os);
TriMesh read_mesh(std::istream& is);

/// Partition of [a, b] with end cell caps h_left / h_right, geometric
/// growth toward the middle, and a global cap h_max.
std::vector<double> graded_partition(double a, double b, double h_left,
                                     double h_right, double h_max,
                                     double ratio = 2.0);

}  // namespace roompass
