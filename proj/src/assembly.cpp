#include "roompass/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace roompass {

SparseSymMatrix assemble_stiffness(const TriMesh& mesh) {
  std::vector<std::tuple<int, int, double>> trips;
  trips.reserve(mesh.triangles.size() * 6);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.triangles[t];
    const double x[3] = {mesh.vx[tr[0]], mesh.vx[tr[1]], mesh.vx[tr[2]]};
    const double y[3] = {mesh.vy[tr[0]], mesh.vy[tr[1]], mesh.vy[tr[2]]};
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw AssemblyError("assemble_stiffness: degenerate triangle");
    // grad of barycentric i: rotated opposite edge / (2 area)
    double gx[3], gy[3];
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      gx[i] = (y[j] - y[k]) / (2.0 * area);
      gy[i] = (x[k] - x[j]) / (2.0 * area);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j)
        trips.push_back({tr[i], tr[j], area * (gx[i] * gx[j] + gy[i] * gy[j])});
  }
  return SparseSymMatrix::from_triplets(mesh.vertex_count(), std::move(trips));
}

SparseSymMatrix assemble_mass(const TriMesh& mesh, const DensityField& density) {
  if (!(density.omega > 0.0 && density.passage > 0.0 && density.room > 0.0))
    throw AssemblyError("assemble_mass: density must be positive");
  std::vector<std::tuple<int, int, double>> trips;
  trips.reserve(mesh.triangles.size() * 6);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.triangles[t];
    const double w = density.value(mesh.region[t]) * mesh.triangle_area(t) / 12.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j <= i; ++j)
        trips.push_back({tr[i], tr[j], w * (i == j ? 2.0 : 1.0)});
  }
  return SparseSymMatrix::from_triplets(mesh.vertex_count(), std::move(trips));
}

TraceMap make_trace_map(const TriMesh& mesh) {
  if (mesh.gamma_vertices.empty())
    throw AssemblyError("make_trace_map: mesh has no Gamma vertices");
  TraceMap trace;
  trace.gamma_vertex = mesh.gamma_vertices;  // already ordered by x
  trace.volume_to_boundary.assign(mesh.vertex_count(), -1);
  for (int b = 0; b < trace.size(); ++b)
    trace.volume_to_boundary[trace.gamma_vertex[b]] = b;
  return trace;
}

SparseSymMatrix assemble_boundary_mass(const TriMesh& mesh, const TraceMap& trace) {
  std::vector<std::tuple<int, int, double>> trips;
  bool any = false;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    if (mesh.boundary_tags[e] != BoundaryTag::Gamma) continue;
    const int a = trace.volume_to_boundary[mesh.boundary_edges[e][0]];
    const int b = trace.volume_to_boundary[mesh.boundary_edges[e][1]];
    if (a < 0 || b < 0)
      throw AssemblyError("assemble_boundary_mass: trace map misses a Gamma vertex");
    const double len =
        std::hypot(mesh.vx[mesh.boundary_edges[e][0]] - mesh.vx[mesh.boundary_edges[e][1]],
                   mesh.vy[mesh.boundary_edges[e][0]] - mesh.vy[mesh.boundary_edges[e][1]]);
    trips.push_back({a, a, len / 3.0});
    trips.push_back({b, b, len / 3.0});
    trips.push_back({std::max(a, b), std::min(a, b), len / 6.0});
    any = true;
  }
  if (!any) throw AssemblyError("assemble_boundary_mass: Gamma has no edges");
  return SparseSymMatrix::from_triplets(trace.size(), std::move(trips));
}

SparseSymMatrix lift_boundary_mass(const SparseSymMatrix& boundary_mass,
                                   const TraceMap& trace, int n_volume) {
  std::vector<std::tuple<int, int, double>> trips;
  for (int i = 0; i < boundary_mass.n; ++i) {
    for (int p = boundary_mass.row_ptr[i]; p < boundary_mass.row_ptr[i + 1]; ++p) {
      const int vi = trace.gamma_vertex[i];
      const int vj = trace.gamma_vertex[boundary_mass.cols[p]];
      trips.push_back({vi, vj, boundary_mass.vals[p]});
    }
  }
  return SparseSymMatrix::from_triplets(n_volume, std::move(trips));
}

AqrBlocks assemble_Aqr_blocks(const SparseSymMatrix& K, const SparseSymMatrix& M,
                              const SparseSymMatrix& G, const TraceMap& trace,
                              double q, double r) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw AssemblyError("assemble_Aqr_blocks: q must be finite and positive");
  if (!(r > 0.0))
    throw AssemblyError(
        "assemble_Aqr_blocks: r must be positive (r = 0 is the A_q problem)");
  const int n = K.n;
  const int m = G.n;
  const double qr = q * r;

  std::vector<std::tuple<int, int, double>> strips, btrips;
  for (int i = 0; i < n; ++i)
    for (int p = K.row_ptr[i]; p < K.row_ptr[i + 1]; ++p)
      strips.push_back({i, K.cols[p], K.vals[p]});
  for (int i = 0; i < m; ++i) {
    for (int p = G.row_ptr[i]; p < G.row_ptr[i + 1]; ++p) {
      const int j = G.cols[p];
      const double g = G.vals[p];
      const int vi = trace.gamma_vertex[i], vj = trace.gamma_vertex[j];
      // (1,1) block: + qr * T' G T
      strips.push_back({vi, vj, qr * g});
      // (2,1) block: - qr * G T  (entries (n+i, vj) and (n+j, vi))
      strips.push_back({n + i, vj, -qr * g});
      if (i != j) strips.push_back({n + j, vi, -qr * g});
      // (2,2) block: + qr * G
      strips.push_back({n + i, n + j, qr * g});
      btrips.push_back({n + i, n + j, r * g});
    }
  }
  for (int i = 0; i < n; ++i)
    for (int p = M.row_ptr[i]; p < M.row_ptr[i + 1]; ++p)
      btrips.push_back({i, M.cols[p], M.vals[p]});

  AqrBlocks blocks;
  blocks.S = SparseSymMatrix::from_triplets(n + m, std::move(strips));
  blocks.B = SparseSymMatrix::from_triplets(n + m, std::move(btrips));
  blocks.n_volume = n;
  blocks.n_boundary = m;
  return blocks;
}

SparseSymMatrix eliminate_dofs(const SparseSymMatrix& a, const std::vector<int>& drop,
                               std::vector<int>* keep_map) {
  std::vector<char> dropped(a.n, 0);
  for (int d : drop) dropped[d] = 1;
  std::vector<int> new_index(a.n, -1);
  std::vector<int> keep;
  for (int i = 0; i < a.n; ++i) {
    if (!dropped[i]) {
      new_index[i] = static_cast<int>(keep.size());
      keep.push_back(i);
    }
  }
  std::vector<std::tuple<int, int, double>> trips;
  for (int i = 0; i < a.n; ++i) {
    if (dropped[i]) continue;
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const int j = a.cols[p];
      if (dropped[j]) continue;
      trips.push_back({new_index[i], new_index[j], a.vals[p]});
    }
  }
  if (keep_map) *keep_map = keep;
  return SparseSymMatrix::from_triplets(static_cast<int>(keep.size()),
                                        std::move(trips));
}

}  // namespace roompass
