#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "roompass/mesh.hpp"

using namespace roompass;

namespace {

PerturbedDomain sample_domain(double eps = 0.25, double alpha = 2.0,
                              double beta = -1.0) {
  return build_perturbed_domain({1.0, 1.0}, exponents_to_params(eps, alpha, beta),
                                ShapeSpec{});
}

}  // namespace

TEST_CASE("base mesh of the unit square at target 0.5") {
  auto mesh = mesh_base({1.0, 1.0}, 0.5);
  CHECK(mesh.vertex_count() == 9);
  CHECK(mesh.triangle_count() == 8);
  validate_mesh(mesh);
  auto q = mesh_quality(mesh);
  CHECK(q.min_angle_deg == doctest::Approx(45.0));
  CHECK(mesh.region_area(RegionKind::Omega) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mesh.gamma_vertices.size() == 3);
}

TEST_CASE("graded partition covers the interval with capped steps") {
  auto pts = graded_partition(0.0, 1.0, 0.25, 0.001, 0.25);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i] > pts[i - 1]);
    CHECK(pts[i] - pts[i - 1] <= 0.25 * (1 + 1e-12));
  }
  // fine cap honored at the right end
  CHECK(pts[pts.size() - 1] - pts[pts.size() - 2] <= 0.001 * (1 + 1e-12));
  // tiny interval falls back to a fine uniform split
  auto tiny = graded_partition(0.0, 1e-4, 0.25, 0.25, 0.25);
  CHECK(tiny.size() == 2);
}

TEST_CASE("uniform refinement quadruples triangles and preserves area") {
  auto mesh = mesh_base({1.0, 1.0}, 0.5);
  auto fine = refine_uniform(mesh);
  CHECK(fine.triangle_count() == 32);
  validate_mesh(fine);
  CHECK(fine.region_area(RegionKind::Omega) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mesh_quality(fine).min_angle_deg ==
        doctest::Approx(mesh_quality(mesh).min_angle_deg));
  // Gamma edge count doubles
  auto count_gamma = [](const TriMesh& m) {
    int c = 0;
    for (auto t : m.boundary_tags)
      if (t == BoundaryTag::Gamma) ++c;
    return c;
  };
  CHECK(count_gamma(fine) == 2 * count_gamma(mesh));
}

TEST_CASE("perturbed domain mesh is conforming with exact region areas") {
  auto dom = sample_domain();
  MeshOptions opts;
  opts.target_h = 1.0 / 16.0;
  auto mesh = mesh_perturbed_domain(dom, opts);
  validate_mesh(mesh);

  const double pass_area = 3.0 * dom.passages[0].area();
  const double room_area = 3.0 * dom.rooms[0].area();
  CHECK(mesh.region_area(RegionKind::Omega) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mesh.region_area(RegionKind::Passage) ==
        doctest::Approx(pass_area).epsilon(1e-10));
  CHECK(mesh.region_area(RegionKind::Room) ==
        doctest::Approx(room_area).epsilon(1e-10));

  // every passage has at least 2 cells across: at least 3 distinct x
  // among passage vertices of each index
  for (std::size_t k = 0; k < dom.indices.size(); ++k) {
    std::set<double> xs;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      if (mesh.region[t].kind == RegionKind::Passage &&
          mesh.region[t].index == dom.indices[k]) {
        for (int v : mesh.triangles[t]) xs.insert(mesh.vx[v]);
      }
    }
    CHECK(xs.size() >= 3);
  }

  // interface conformity: every vertex on a passage top belongs to both a
  // passage triangle and a room triangle
  for (std::size_t k = 0; k < dom.indices.size(); ++k) {
    const double ytop = dom.passages[k].y1;
    std::set<int> pass_verts, room_verts;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      if (mesh.region[t].index != dom.indices[k] &&
          mesh.region[t].kind != RegionKind::Omega)
        continue;
      for (int v : mesh.triangles[t]) {
        if (std::abs(mesh.vy[v] - ytop) > 1e-14) continue;
        if (mesh.region[t].kind == RegionKind::Passage) pass_verts.insert(v);
        if (mesh.region[t].kind == RegionKind::Room) room_verts.insert(v);
      }
    }
    CHECK(!pass_verts.empty());
    for (int v : pass_verts) CHECK(room_verts.count(v) == 1);
  }

  // gamma edges cover exactly Gamma minus the passage openings
  double gamma_len = 0.0;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    if (mesh.boundary_tags[e] != BoundaryTag::Gamma) continue;
    const auto [a, b] = mesh.boundary_edges[e];
    gamma_len += std::abs(mesh.vx[a] - mesh.vx[b]);
    CHECK(mesh.vy[a] == 0.0);
    CHECK(mesh.vy[b] == 0.0);
  }
  const double opening = 3.0 * (dom.passages[0].x1 - dom.passages[0].x0);
  CHECK(gamma_len == doctest::Approx(1.0 - opening).epsilon(1e-12));
}

TEST_CASE("thin passages get anisotropy-capped cells") {
  auto dom = sample_domain(0.25, 4.0, 0.0);  // d = eps^4
  MeshOptions opts;
  opts.target_h = 1.0 / 16.0;
  auto mesh = mesh_perturbed_domain(dom, opts);
  validate_mesh(mesh);
  const double width = dom.passages[0].x1 - dom.passages[0].x0;
  CHECK(mesh_quality(mesh).min_edge_length <= width / 2.0 + 1e-15);
  // passage cell aspect stays near the configured limit
  double worst = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (mesh.region[t].kind != RegionKind::Passage) continue;
    double lmin = 1e300, lmax = 0.0;
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.triangles[t][e], b = mesh.triangles[t][(e + 1) % 3];
      const double len = std::hypot(mesh.vx[b] - mesh.vx[a], mesh.vy[b] - mesh.vy[a]);
      lmin = std::min(lmin, len);
      lmax = std::max(lmax, len);
    }
    worst = std::max(worst, lmax / lmin);
  }
  CHECK(worst <= std::hypot(1.0, opts.aspect_limit) + 1e-9);
}

TEST_CASE("mesh text round trip is bit exact") {
  auto dom = sample_domain();
  MeshOptions opts;
  opts.target_h = 0.1;
  auto mesh = mesh_perturbed_domain(dom, opts);
  std::ostringstream os;
  write_mesh(mesh, os);
  std::istringstream is(os.str());
  auto back = read_mesh(is);
  std::ostringstream os2;
  write_mesh(back, os2);
  CHECK(os.str() == os2.str());
  REQUIRE(back.vertex_count() == mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    CHECK(back.vx[v] == mesh.vx[v]);  // bit exact
    CHECK(back.vy[v] == mesh.vy[v]);
  }
}

TEST_CASE("vertex budget enforcement") {
  CHECK_THROWS_AS(mesh_base({1.0, 1.0}, 1e-4, 1000), MeshError);
  MeshOptions opts;
  opts.target_h = 1.0 / 64.0;
  opts.vertex_budget = 50;
  CHECK_THROWS_AS(mesh_perturbed_domain(sample_domain(), opts), MeshError);
  auto mesh = mesh_base({1.0, 1.0}, 0.5);
  CHECK_THROWS_AS(refine_uniform(mesh, 10), MeshError);
}
