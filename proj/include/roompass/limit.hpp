#pragma once

#include <vector>

#include "roompass/assembly.hpp"
#include "roompass/eigensolve.hpp"
#include "roompass/geometry.hpp"
#include "roompass/mesh.hpp"
#include "roompass/spectrum.hpp"

namespace roompass {

enum class LimitVariant { A, Aq, Ar, Aqr };

struct LimitProblem {
  LimitVariant variant = LimitVariant::A;
  double q = 0.0;  // used by Aq, Aqr; must be positive for Aqr
  double r = 0.0;  // used by Ar, Aqr; must be positive there
};

/// One intersection of a Robin eigenvalue curve with a branch of the
/// coupling hyperbola mu = lambda*q*r/(q - lambda).
struct BranchEigenvalue {
  int k = 0;          // branch index (1-based)
  bool plus = true;   // plus branch: lambda < q; minus branch: lambda > q
  double lambda = 0.0;
  double mu = 0.0;    // mu at the solution
  double width = 0.0; // final bisection bracket width
};

struct DegenerateQError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AqrOptions {
  double window = 1e-2;       // relative half-width of the cluster window at q
  double bisect_rel = 5e-10;  // bracket width <= bisect_rel * max(1, q)
  double lambda_margin = 1e-3;  // minus-branch cap: Lambda * (1 + margin)
};

/// Shared discrete operators of the base rectangle mesh.
struct BaseOperators {
  SparseSymMatrix K;        // stiffness
  SparseSymMatrix M;        // unit-density mass
  SparseSymMatrix G;        // boundary mass in boundary numbering
  SparseSymMatrix Gt;       // boundary mass lifted to volume dofs
  TraceMap trace;

  explicit BaseOperators(const TriMesh& mesh);
};

/// sigma(-Delta_Neumann) on (0,W)x(-H,0): pi^2 (p^2/W^2 + m^2/H^2).
Spectrum neumann_rectangle_analytic(double W, double H, double Lambda);

/// Dirichlet on the top side, Neumann elsewhere:
/// pi^2 p^2/W^2 + pi^2 (m + 1/2)^2 / H^2.
Spectrum dirichlet_gamma_rectangle_analytic(double W, double H, double Lambda);

Spectrum spectrum_A(const TriMesh& mesh_omega, double Lambda,
                    const EigSolveOptions& opts = {});

/// spectrum_A plus the point q tagged "essential-limit".
Spectrum spectrum_Aq(const TriMesh& mesh_omega, double q, double Lambda,
                     const EigSolveOptions& opts = {});

/// Pencil (K, M + r*Gt): boundary condition du/dn = lambda r u on Gamma.
Spectrum spectrum_Ar(const TriMesh& mesh_omega, double r, double Lambda,
                     const EigSolveOptions& opts = {});

/// k smallest eigenvalues with Robin coefficient mu on Gamma; negative
/// eigenvalues appear for mu > 0 and are handled by the indefinite path.
Spectrum robin_eigenvalues(const TriMesh& mesh_omega, double mu, int k,
                           const EigSolveOptions& opts = {});

Spectrum dirichlet_gamma_eigenvalues(const TriMesh& mesh_omega, int k,
                                     const EigSolveOptions& opts = {});

/// Number of Dirichlet-on-Gamma eigenvalues at most q.  Rejects q within
/// 1e-6 * max(1, q) of a Dirichlet eigenvalue.
int compute_k0(const TriMesh& mesh_omega, double q,
               const EigSolveOptions& opts = {});

/// All branch eigenvalues in [0, Lambda]: the plus branch up to the
/// cluster window below q, the minus branch above q.  Bisection on the
/// monotone inertia count of K - mu(lambda)*Gt - lambda*M.
std::vector<BranchEigenvalue> spectrum_Aqr_fixedpoint(
    const TriMesh& mesh_omega, double q, double r, double Lambda,
    const EigSolveOptions& opts = {}, const AqrOptions& aqr = {});

/// Spectrum of the two-field block pencil on [0, Lambda]; values inside
/// the window around q are tagged "essential-limit-cluster".
Spectrum spectrum_Aqr_block(const TriMesh& mesh_omega, double q, double r,
                            double Lambda, const EigSolveOptions& opts = {},
                            const AqrOptions& aqr = {});

/// Transcendental separation oracle on the rectangle base for A_r / A_qr.
Spectrum separable_oracle(double W, double H, const LimitProblem& problem,
                          double Lambda, const AqrOptions& aqr = {});

/// Branch list packaged as a Spectrum, with the essential point q added
/// and tagged when include_q is set.
Spectrum fixedpoint_to_spectrum(const std::vector<BranchEigenvalue>& branches,
                                double q, double Lambda, bool include_q = true);

/// Theorem dispatch: the limit spectrum for a regime class.
Spectrum sigma0_for_regime(const RegimeClass& regime, const TriMesh& mesh_omega,
                           double Lambda, const EigSolveOptions& opts = {},
                           const AqrOptions& aqr = {});

}  // namespace roompass
