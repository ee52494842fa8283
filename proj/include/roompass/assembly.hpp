#pragma once

#include <vector>

#include "roompass/mesh.hpp"
#include "roompass/sparse.hpp"

namespace roompass {

/// Piecewise-constant mass density: 1 on the base domain and passages,
/// rho on the rooms.
struct DensityField {
  double omega = 1.0;
  double passage = 1.0;
  double room = 1.0;

  double value(RegionTag tag) const {
    switch (tag.kind) {
      case RegionKind::Omega: return omega;
      case RegionKind::Passage: return passage;
      case RegionKind::Room: return room;
    }
    return 1.0;
  }
};

/// Ordered map from Gamma vertex ids to boundary degree-of-freedom
/// indices 0..m-1 (ordered by x along Gamma).
struct TraceMap {
  std::vector<int> gamma_vertex;  // boundary dof -> mesh vertex id
  std::vector<int> volume_to_boundary;  // mesh vertex id -> dof or -1

  int size() const { return static_cast<int>(gamma_vertex.size()); }
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// P1 stiffness with exact element integrals; positive semidefinite,
/// constants in the kernel.
SparseSymMatrix assemble_stiffness(const TriMesh& mesh);

/// rho-weighted P1 consistent mass; positive definite.
SparseSymMatrix assemble_mass(const TriMesh& mesh, const DensityField& density);

TraceMap make_trace_map(const TriMesh& mesh);

/// 1-D hat-function mass matrix on the Gamma edges, in boundary dof
/// numbering (dimension = trace.size()).
SparseSymMatrix assemble_boundary_mass(const TriMesh& mesh, const TraceMap& trace);

/// Boundary mass re-indexed to volume dofs (the matrix "G-tilde"),
/// dimension = vertex count.
SparseSymMatrix lift_boundary_mass(const SparseSymMatrix& boundary_mass,
                                   const TraceMap& trace, int n_volume);

struct AqrBlocks {
  SparseSymMatrix S;  // stiffness-plus-coupling block matrix
  SparseSymMatrix B;  // block mass diag(M, r*G)
  int n_volume = 0;
  int n_boundary = 0;
};

/// Two-field discretization: unknowns (u1 nodal values, u2 boundary
/// values); S = [[K + qr*T'GT, -qr*T'G], [-qr*GT, qr*G]], B = diag(M, r*G).
/// Matched constants (1, 1) span the kernel of S.
AqrBlocks assemble_Aqr_blocks(const SparseSymMatrix& K, const SparseSymMatrix& M,
                              const SparseSymMatrix& G, const TraceMap& trace,
                              double q, double r);

/// Remove the listed dofs (rows and columns); keep_map returns the old
/// index of each kept dof.
SparseSymMatrix eliminate_dofs(const SparseSymMatrix& a,
                               const std::vector<int>& drop,
                               std::vector<int>* keep_map = nullptr);

}  // namespace roompass
