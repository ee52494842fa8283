#include "roompass/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace roompass {

namespace {

constexpr double kDegPerRad = 57.2957795130823208768;

struct VertexKey {
  std::uint64_t x, y;
  bool operator==(const VertexKey&) const = default;
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& k) const {
    std::uint64_t h = k.x * 0x9e3779b97f4a7c15ull;
    h ^= k.y + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

VertexKey key_of(double x, double y) {
  VertexKey k;
  std::memcpy(&k.x, &x, sizeof x);
  std::memcpy(&k.y, &y, sizeof y);
  return k;
}

/// Accumulates grids of several rectangles into one conforming mesh.
/// Interface vertices coincide bit-exactly because the partitions along a
/// shared interface reuse the same coordinate arrays.
class MeshBuilder {
 public:
  int vertex(double x, double y) {
    const VertexKey k = key_of(x, y);
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(mesh_.vx.size());
    mesh_.vx.push_back(x);
    mesh_.vy.push_back(y);
    index_.emplace(k, id);
    return id;
  }

  void add_grid(const std::vector<double>& px, const std::vector<double>& py,
                RegionTag tag) {
    const int nx = static_cast<int>(px.size()) - 1;
    const int ny = static_cast<int>(py.size()) - 1;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int v00 = vertex(px[i], py[j]);
        const int v10 = vertex(px[i + 1], py[j]);
        const int v11 = vertex(px[i + 1], py[j + 1]);
        const int v01 = vertex(px[i], py[j + 1]);
        mesh_.triangles.push_back({v00, v10, v11});
        mesh_.region.push_back(tag);
        mesh_.triangles.push_back({v00, v11, v01});
        mesh_.region.push_back(tag);
      }
    }
  }

  TriMesh take() { return std::move(mesh_); }

 private:
  TriMesh mesh_;
  std::unordered_map<VertexKey, int, VertexKeyHash> index_;
};

void extract_boundary(TriMesh& mesh) {
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_use[{a, b}]++;
    }
  }
  mesh.boundary_edges.clear();
  mesh.boundary_tags.clear();
  double ymax = -1e300, span = 0.0;
  {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      xmin = std::min(xmin, mesh.vx[v]);
      xmax = std::max(xmax, mesh.vx[v]);
      ymin = std::min(ymin, mesh.vy[v]);
      ymax = std::max(ymax, mesh.vy[v]);
    }
    span = std::max(xmax - xmin, ymax - ymin);
  }
  const double tol = 1e-12 * std::max(span, 1.0);
  std::vector<int> gamma_set;
  for (const auto& [e, uses] : edge_use) {
    if (uses == 1) {
      const bool on_gamma = std::abs(mesh.vy[e.first]) <= tol &&
                            std::abs(mesh.vy[e.second]) <= tol;
      mesh.boundary_edges.push_back({e.first, e.second});
      mesh.boundary_tags.push_back(on_gamma ? BoundaryTag::Gamma : BoundaryTag::Outer);
      if (on_gamma) {
        gamma_set.push_back(e.first);
        gamma_set.push_back(e.second);
      }
    } else if (uses != 2) {
      throw MeshError("extract_boundary: non-manifold edge");
    }
  }
  std::sort(gamma_set.begin(), gamma_set.end());
  gamma_set.erase(std::unique(gamma_set.begin(), gamma_set.end()), gamma_set.end());
  std::sort(gamma_set.begin(), gamma_set.end(),
            [&](int a, int b) { return mesh.vx[a] < mesh.vx[b]; });
  mesh.gamma_vertices = std::move(gamma_set);
}

std::vector<double> uniform_partition(double a, double b, int cells) {
  std::vector<double> p(cells + 1);
  for (int i = 0; i <= cells; ++i)
    p[i] = a + (b - a) * (static_cast<double>(i) / cells);
  p.front() = a;
  p.back() = b;
  return p;
}

int cells_for(double length, double cap) {
  return std::max(1, static_cast<int>(std::ceil(length / cap - 1e-12)));
}

std::size_t estimate_vertices(const std::vector<std::pair<std::size_t, std::size_t>>& grids) {
  std::size_t total = 0;
  for (auto [nx, ny] : grids) total += (nx + 1) * (ny + 1);
  return total;
}

}  // namespace

double TriMesh::triangle_area(int t) const {
  const auto& tr = triangles[t];
  const double ax = vx[tr[0]], ay = vy[tr[0]];
  const double bx = vx[tr[1]], by = vy[tr[1]];
  const double cx = vx[tr[2]], cy = vy[tr[2]];
  return 0.5 * ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay));
}

double TriMesh::region_area(RegionKind kind) const {
  double a = 0.0;
  for (int t = 0; t < triangle_count(); ++t)
    if (region[t].kind == kind) a += triangle_area(t);
  return a;
}

std::vector<double> graded_partition(double a, double b, double h_left,
                                     double h_right, double h_max, double ratio) {
  const double length = b - a;
  if (!(length > 0.0)) throw MeshError("graded_partition: empty interval");
  if (!(h_max > 0.0) || !(h_left > 0.0) || !(h_right > 0.0) || !(ratio > 1.0))
    throw MeshError("graded_partition: bad step parameters");
  h_left = std::min(h_left, h_max);
  h_right = std::min(h_right, h_max);

  auto ladder = [&](double h0) {
    std::vector<double> v;
    double s = h0;
    while (s < h_max * (1.0 - 1e-12)) {
      v.push_back(s);
      s = std::min(s * ratio, h_max);
    }
    return v;
  };
  std::vector<double> ls = ladder(h_left), rs = ladder(h_right);
  double sum = std::accumulate(ls.begin(), ls.end(), 0.0) +
               std::accumulate(rs.begin(), rs.end(), 0.0);
  while ((!ls.empty() || !rs.empty()) && sum >= length * (1.0 - 1e-9)) {
    if (!ls.empty() && (rs.empty() || ls.back() >= rs.back())) {
      sum -= ls.back();
      ls.pop_back();
    } else {
      sum -= rs.back();
      rs.pop_back();
    }
  }
  const double rem = length - sum;
  double cap = h_max;
  if (!ls.empty()) cap = std::min(cap, ls.back() * ratio);
  if (!rs.empty()) cap = std::min(cap, rs.back() * ratio);
  if (ls.empty() && rs.empty()) cap = std::min({h_max, h_left, h_right});
  const int mid = cells_for(rem, cap);

  std::vector<double> pts;
  pts.reserve(ls.size() + rs.size() + mid + 1);
  pts.push_back(a);
  double x = a;
  for (double s : ls) {
    x += s;
    pts.push_back(x);
  }
  const double mid_step = rem / mid;
  for (int i = 1; i < mid; ++i) pts.push_back(x + mid_step * i);
  double y = b;
  std::vector<double> tail;
  for (double s : rs) {
    tail.push_back(y);
    y -= s;
  }
  pts.push_back(y);  // right end of the middle band
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) pts.push_back(*it);
  pts.back() = b;
  // monotone guard against pathological parameter combinations
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i] > pts[i - 1]))
      throw MeshError("graded_partition: non-monotone points");
  return pts;
}

TriMesh mesh_base(const BaseDomain& base, double target_h, std::size_t vertex_budget) {
  if (!(target_h > 0.0)) throw MeshError("mesh_base: target_h must be positive");
  const int nx = cells_for(base.width, target_h);
  const int ny = cells_for(base.height, target_h);
  if (static_cast<std::size_t>(nx + 1) * (ny + 1) > vertex_budget)
    throw MeshError("mesh_base: vertex budget exceeded");
  MeshBuilder builder;
  builder.add_grid(uniform_partition(0.0, base.width, nx),
                   uniform_partition(-base.height, 0.0, ny),
                   {RegionKind::Omega, -1});
  TriMesh mesh = builder.take();
  extract_boundary(mesh);
  return mesh;
}

TriMesh mesh_perturbed_domain(const PerturbedDomain& domain, const MeshOptions& opts) {
  if (!(opts.target_h > 0.0))
    throw MeshError("mesh_perturbed_domain: target_h must be positive");
  const double hmax = opts.target_h;
  const std::size_t n_attach = domain.indices.size();

  // passage partitions first; their x points are reused verbatim by the
  // base and room partitions so interfaces match bit-exactly
  std::vector<std::vector<double>> pass_x(n_attach), pass_y(n_attach);
  std::vector<double> pass_cell(n_attach);
  for (std::size_t k = 0; k < n_attach; ++k) {
    const Rect& t = domain.passages[k];
    const double width = t.x1 - t.x0;
    const double xcap = std::min(hmax, width / 2.0);  // at least 2 across
    const int nw = cells_for(width, xcap);
    pass_x[k] = uniform_partition(t.x0, t.x1, nw);
    pass_cell[k] = width / nw;
    const double ycap = std::min(hmax, opts.aspect_limit * pass_cell[k]);
    pass_y[k] = uniform_partition(t.y0, t.y1, cells_for(t.y1 - t.y0, ycap));
  }

  // base x partition: graded segments between consecutive openings
  std::vector<double> base_x;
  {
    double cursor = 0.0;
    double left_step = hmax;  // no constraint at the domain wall
    base_x.push_back(0.0);
    for (std::size_t k = 0; k < n_attach; ++k) {
      const auto seg = graded_partition(cursor, pass_x[k].front(), left_step,
                                        pass_cell[k], hmax, opts.grading_ratio);
      base_x.insert(base_x.end(), seg.begin() + 1, seg.end());
      base_x.insert(base_x.end(), pass_x[k].begin() + 1, pass_x[k].end());
      cursor = pass_x[k].back();
      left_step = pass_cell[k];
    }
    const auto seg = graded_partition(cursor, domain.base.width, left_step, hmax,
                                      hmax, opts.grading_ratio);
    base_x.insert(base_x.end(), seg.begin() + 1, seg.end());
  }

  // base y partition: rows shrink toward Gamma to keep the thin opening
  // columns from pairing with tall cells
  double top_cap = hmax;
  for (std::size_t k = 0; k < n_attach; ++k)
    top_cap = std::min(top_cap, opts.aspect_limit * pass_cell[k]);
  const std::vector<double> base_y = graded_partition(
      -domain.base.height, 0.0, hmax, top_cap, hmax, opts.grading_ratio);

  // room partitions around the passage top
  std::vector<std::vector<double>> room_x(n_attach), room_y(n_attach);
  for (std::size_t k = 0; k < n_attach; ++k) {
    const Rect& r = domain.rooms[k];
    const double room_cap = std::min(hmax, (r.x1 - r.x0) / 2.0);
    std::vector<double> px;
    const auto left = graded_partition(r.x0, pass_x[k].front(), room_cap,
                                       pass_cell[k], room_cap, opts.grading_ratio);
    px.insert(px.end(), left.begin(), left.end());
    px.insert(px.end(), pass_x[k].begin() + 1, pass_x[k].end());
    const auto right = graded_partition(pass_x[k].back(), r.x1, pass_cell[k],
                                        room_cap, room_cap, opts.grading_ratio);
    px.insert(px.end(), right.begin() + 1, right.end());
    room_x[k] = std::move(px);
    const double ycap = std::min(hmax, (r.y1 - r.y0) / 2.0);
    room_y[k] =
        graded_partition(r.y0, r.y1, opts.aspect_limit * pass_cell[k], ycap,
                         ycap, opts.grading_ratio);
  }

  // vertex budget check before any grid is emitted
  std::vector<std::pair<std::size_t, std::size_t>> grids;
  grids.push_back({base_x.size() - 1, base_y.size() - 1});
  for (std::size_t k = 0; k < n_attach; ++k) {
    grids.push_back({pass_x[k].size() - 1, pass_y[k].size() - 1});
    grids.push_back({room_x[k].size() - 1, room_y[k].size() - 1});
  }
  if (estimate_vertices(grids) > opts.vertex_budget)
    throw MeshError("mesh_perturbed_domain: vertex budget exceeded (" +
                    std::to_string(estimate_vertices(grids)) + " > " +
                    std::to_string(opts.vertex_budget) + ")");

  MeshBuilder builder;
  builder.add_grid(base_x, base_y, {RegionKind::Omega, -1});
  for (std::size_t k = 0; k < n_attach; ++k) {
    builder.add_grid(pass_x[k], pass_y[k],
                     {RegionKind::Passage, domain.indices[k]});
    builder.add_grid(room_x[k], room_y[k], {RegionKind::Room, domain.indices[k]});
  }
  TriMesh mesh = builder.take();
  extract_boundary(mesh);
  return mesh;
}

TriMesh refine_uniform(const TriMesh& mesh, std::size_t vertex_budget) {
  TriMesh out;
  out.vx = mesh.vx;
  out.vy = mesh.vy;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    auto it = midpoint.find({a, b});
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vx.size());
    out.vx.push_back(0.5 * (mesh.vx[a] + mesh.vx[b]));
    out.vy.push_back(0.5 * (mesh.vy[a] + mesh.vy[b]));
    midpoint.emplace(std::make_pair(a, b), id);
    return id;
  };
  const std::size_t new_vertices =
      mesh.vx.size() + [&] {
        std::map<std::pair<int, int>, char> edges;
        for (const auto& t : mesh.triangles)
          for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edges[{a, b}] = 1;
          }
        return edges.size();
      }();
  if (new_vertices > vertex_budget)
    throw MeshError("refine_uniform: vertex budget exceeded");

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto [a, b, c] = mesh.triangles[t];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    const RegionTag tag = mesh.region[t];
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
    for (int i = 0; i < 4; ++i) out.region.push_back(tag);
  }
  extract_boundary(out);
  return out;
}

QualityReport mesh_quality(const TriMesh& mesh) {
  QualityReport q;
  q.vertex_count = mesh.vx.size();
  q.triangle_count = mesh.triangles.size();
  q.min_angle_deg = 180.0;
  q.max_aspect_ratio = 0.0;
  q.min_edge_length = 1e300;
  for (const auto& t : mesh.triangles) {
    double len[3];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      len[e] = std::hypot(mesh.vx[b] - mesh.vx[a], mesh.vy[b] - mesh.vy[a]);
    }
    const double lmin = std::min({len[0], len[1], len[2]});
    const double lmax = std::max({len[0], len[1], len[2]});
    q.min_edge_length = std::min(q.min_edge_length, lmin);
    q.max_aspect_ratio = std::max(q.max_aspect_ratio, lmax / lmin);
    for (int v = 0; v < 3; ++v) {
      // angle at vertex v is opposite edge (v+1)
      const double a = len[(v + 1) % 3];
      const double b = len[v];
      const double c = len[(v + 2) % 3];
      const double cosang = std::clamp((b * b + c * c - a * a) / (2.0 * b * c),
                                       -1.0, 1.0);
      q.min_angle_deg = std::min(q.min_angle_deg, std::acos(cosang) * kDegPerRad);
    }
  }
  return q;
}

void validate_mesh(const TriMesh& mesh) {
  for (int t = 0; t < mesh.triangle_count(); ++t)
    if (!(mesh.triangle_area(t) > 0.0))
      throw MeshError("validate_mesh: non-positive triangle area");
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_use[{a, b}]++;
    }
  for (const auto& [e, uses] : edge_use)
    if (uses != 1 && uses != 2) throw MeshError("validate_mesh: edge used " +
                                                std::to_string(uses) + " times");
  // near-duplicate vertices
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    xmin = std::min(xmin, mesh.vx[v]);
    xmax = std::max(xmax, mesh.vx[v]);
    ymin = std::min(ymin, mesh.vy[v]);
    ymax = std::max(ymax, mesh.vy[v]);
  }
  const double tol = 1e-12 * std::max({xmax - xmin, ymax - ymin, 1e-30});
  std::vector<int> order(mesh.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (mesh.vx[a] != mesh.vx[b]) return mesh.vx[a] < mesh.vx[b];
    return mesh.vy[a] < mesh.vy[b];
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const int a = order[i];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const int b = order[j];
      if (mesh.vx[b] - mesh.vx[a] > tol) break;
      if (std::abs(mesh.vy[b] - mesh.vy[a]) <= tol)
        throw MeshError("validate_mesh: near-duplicate vertices");
    }
  }
}

void write_mesh(const TriMesh& mesh, std::ostream& os) {
  char buf[96];
  os << mesh.vertex_count() << " " << mesh.triangle_count() << " "
     << mesh.boundary_edges.size() << "\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", mesh.vx[v], mesh.vy[v]);
    os << buf;
  }
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tr = mesh.triangles[t];
    os << tr[0] << " " << tr[1] << " " << tr[2] << " ";
    const RegionTag& tag = mesh.region[t];
    switch (tag.kind) {
      case RegionKind::Omega: os << "omega"; break;
      case RegionKind::Passage: os << "passage:" << tag.index; break;
      case RegionKind::Room: os << "room:" << tag.index; break;
    }
    os << "\n";
  }
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    os << mesh.boundary_edges[e][0] << " " << mesh.boundary_edges[e][1] << " "
       << (mesh.boundary_tags[e] == BoundaryTag::Gamma ? "gamma" : "outer") << "\n";
  }
}

TriMesh read_mesh(std::istream& is) {
  TriMesh mesh;
  int nv = 0, nt = 0, ne = 0;
  if (!(is >> nv >> nt >> ne)) throw MeshError("read_mesh: bad header");
  mesh.vx.resize(nv);
  mesh.vy.resize(nv);
  for (int v = 0; v < nv; ++v)
    if (!(is >> mesh.vx[v] >> mesh.vy[v])) throw MeshError("read_mesh: bad vertex");
  mesh.triangles.resize(nt);
  mesh.region.resize(nt);
  for (int t = 0; t < nt; ++t) {
    std::string tag;
    if (!(is >> mesh.triangles[t][0] >> mesh.triangles[t][1] >>
          mesh.triangles[t][2] >> tag))
      throw MeshError("read_mesh: bad triangle");
    if (tag == "omega") {
      mesh.region[t] = {RegionKind::Omega, -1};
    } else if (tag.rfind("passage:", 0) == 0) {
      mesh.region[t] = {RegionKind::Passage, std::stoi(tag.substr(8))};
    } else if (tag.rfind("room:", 0) == 0) {
      mesh.region[t] = {RegionKind::Room, std::stoi(tag.substr(5))};
    } else {
      throw MeshError("read_mesh: unknown region tag " + tag);
    }
  }
  mesh.boundary_edges.resize(ne);
  mesh.boundary_tags.resize(ne);
  for (int e = 0; e < ne; ++e) {
    std::string tag;
    if (!(is >> mesh.boundary_edges[e][0] >> mesh.boundary_edges[e][1] >> tag))
      throw MeshError("read_mesh: bad boundary edge");
    if (tag == "gamma")
      mesh.boundary_tags[e] = BoundaryTag::Gamma;
    else if (tag == "outer")
      mesh.boundary_tags[e] = BoundaryTag::Outer;
    else
      throw MeshError("read_mesh: unknown boundary tag " + tag);
  }
  // gamma vertex list is derived data
  std::vector<int> gamma;
  for (int e = 0; e < ne; ++e)
    if (mesh.boundary_tags[e] == BoundaryTag::Gamma) {
      gamma.push_back(mesh.boundary_edges[e][0]);
      gamma.push_back(mesh.boundary_edges[e][1]);
    }
  std::sort(gamma.begin(), gamma.end());
  gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
  std::sort(gamma.begin(), gamma.end(),
            [&](int a, int b) { return mesh.vx[a] < mesh.vx[b]; });
  mesh.gamma_vertices = std::move(gamma);
  return mesh;
}

}  // namespace roompass
