#include "roompass/limit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace roompass {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLowerShift = 1e-8;  // interval lower endpoint below zero

void require_base_only(const TriMesh& mesh, const char* who) {
  for (const auto& tag : mesh.region)
    if (tag.kind != RegionKind::Omega)
      throw std::invalid_argument(std::string(who) +
                                  ": mesh must cover the base rectangle only");
}

SparseSymMatrix materialize(const MatrixCombo& combo, const std::vector<double>& coeffs) {
  SparseSymMatrix out = combo.pattern();
  combo.combine(coeffs, out.vals);
  return out;
}

double coupling_mu(double lambda, double q, double r) {
  return lambda * q * r / (q - lambda);
}

/// Monotone eigenvalue-count function along the coupling curve:
/// c(lambda) = #{ k : lambda_k(mu(lambda)) < lambda }, evaluated as the
/// negative inertia of K - mu*Gt - lambda*M.  Both branch sweeps feed on
/// its jumps.
class CurveCounter {
 public:
  CurveCounter(const SparseSymMatrix& K, const SparseSymMatrix& Gt,
               const SparseSymMatrix& M)
      : combo_({&K, &Gt, &M}) {
    ldlt_.analyze(combo_.pattern());
  }

  int count(double mu, double lambda) {
    combo_.combine({1.0, -mu, -lambda}, vals_);
    const LdltInfo info = ldlt_.factorize(vals_);
    if (!info.ok || info.near_singular()) throw SingularShiftError(lambda);
    return info.n_negative;
  }

  /// count at lambda, nudging lambda off curve eigenvalues when needed
  int count_robust(double lambda, double q, double r) {
    const double scale = std::max(1.0, std::abs(lambda));
    double delta = 0.0;
    for (int attempt = 0; attempt < 14; ++attempt) {
      for (double sgn : {1.0, -1.0}) {
        const double lam = lambda + sgn * delta;
        try {
          return count(coupling_mu(lam, q, r), lam);
        } catch (const SingularShiftError&) {
        }
        if (delta == 0.0) break;
      }
      delta = delta == 0.0 ? 1e-13 * scale : delta * 4.0;
    }
    throw SingularShiftError(lambda);
  }

 private:
  MatrixCombo combo_;
  LdltFactor ldlt_;
  std::vector<double> vals_;
};

}  // namespace

BaseOperators::BaseOperators(const TriMesh& mesh)
    : K(assemble_stiffness(mesh)),
      M(assemble_mass(mesh, DensityField{})),
      G(SparseSymMatrix{}),
      Gt(SparseSymMatrix{}),
      trace(make_trace_map(mesh)) {
  G = assemble_boundary_mass(mesh, trace);
  Gt = lift_boundary_mass(G, trace, mesh.vertex_count());
}

Spectrum neumann_rectangle_analytic(double W, double H, double Lambda) {
  if (!(W > 0.0 && H > 0.0 && Lambda > 0.0))
    throw std::invalid_argument("neumann_rectangle_analytic: bad arguments");
  std::vector<double> vals;
  const double pi2 = kPi * kPi;
  for (int p = 0; pi2 * p * p / (W * W) <= Lambda; ++p)
    for (int m = 0; pi2 * (p * p / (W * W) + m * m / (H * H)) <= Lambda; ++m)
      vals.push_back(pi2 * (p * p / (W * W) + m * m / (H * H)));
  return Spectrum::from_values(std::move(vals), 1e-9);
}

Spectrum dirichlet_gamma_rectangle_analytic(double W, double H, double Lambda) {
  if (!(W > 0.0 && H > 0.0 && Lambda > 0.0))
    throw std::invalid_argument("dirichlet_gamma_rectangle_analytic: bad arguments");
  std::vector<double> vals;
  const double pi2 = kPi * kPi;
  for (int p = 0; pi2 * p * p / (W * W) <= Lambda; ++p) {
    for (int m = 0;; ++m) {
      const double v = pi2 * (p * p / (W * W) + (m + 0.5) * (m + 0.5) / (H * H));
      if (v > Lambda) break;
      vals.push_back(v);
    }
  }
  return Spectrum::from_values(std::move(vals), 1e-9);
}

Spectrum spectrum_A(const TriMesh& mesh_omega, double Lambda,
                    const EigSolveOptions& opts) {
  require_base_only(mesh_omega, "spectrum_A");
  const SparseSymMatrix K = assemble_stiffness(mesh_omega);
  const SparseSymMatrix M = assemble_mass(mesh_omega, DensityField{});
  return eigs_in_interval(K, M, -kLowerShift, Lambda, opts);
}

Spectrum spectrum_Aq(const TriMesh& mesh_omega, double q, double Lambda,
                     const EigSolveOptions& opts) {
  if (q < 0.0) throw std::invalid_argument("spectrum_Aq: q must be nonnegative");
  Spectrum s = spectrum_A(mesh_omega, Lambda, opts);
  if (q <= Lambda) s.insert(q, 1, "essential-limit", 0.0, opts.merge_tol);
  return s;
}

Spectrum spectrum_Ar(const TriMesh& mesh_omega, double r, double Lambda,
                     const EigSolveOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("spectrum_Ar: r must be positive");
  require_base_only(mesh_omega, "spectrum_Ar");
  const BaseOperators ops(mesh_omega);
  MatrixCombo mass_combo({&ops.M, &ops.Gt});
  const SparseSymMatrix Br = materialize(mass_combo, {1.0, r});
  return eigs_in_interval(ops.K, Br, -kLowerShift, Lambda, opts);
}

Spectrum robin_eigenvalues(const TriMesh& mesh_omega, double mu, int k,
                           const EigSolveOptions& opts) {
  if (k < 1) throw std::invalid_argument("robin_eigenvalues: k must be positive");
  require_base_only(mesh_omega, "robin_eigenvalues");
  const BaseOperators ops(mesh_omega);
  MatrixCombo stiff_combo({&ops.K, &ops.Gt});
  const SparseSymMatrix Smu = materialize(stiff_combo, {1.0, -mu});
  return eigs_smallest(Smu, ops.M, k, opts).spectrum;
}

namespace {

void dirichlet_pencil(const TriMesh& mesh_omega, SparseSymMatrix& Kd,
                      SparseSymMatrix& Md) {
  const BaseOperators ops(mesh_omega);
  Kd = eliminate_dofs(ops.K, ops.trace.gamma_vertex);
  Md = eliminate_dofs(ops.M, ops.trace.gamma_vertex);
}

}  // namespace

Spectrum dirichlet_gamma_eigenvalues(const TriMesh& mesh_omega, int k,
                                     const EigSolveOptions& opts) {
  if (k < 1)
    throw std::invalid_argument("dirichlet_gamma_eigenvalues: k must be positive");
  require_base_only(mesh_omega, "dirichlet_gamma_eigenvalues");
  SparseSymMatrix Kd, Md;
  dirichlet_pencil(mesh_omega, Kd, Md);
  return eigs_smallest(Kd, Md, k, opts).spectrum;
}

int compute_k0(const TriMesh& mesh_omega, double q, const EigSolveOptions& opts) {
  if (!(q > 0.0)) {
    if (q == 0.0) return 0;  // no Dirichlet eigenvalue is <= 0
    throw std::invalid_argument("compute_k0: q must be nonnegative");
  }
  require_base_only(mesh_omega, "compute_k0");
  SparseSymMatrix Kd, Md;
  dirichlet_pencil(mesh_omega, Kd, Md);
  PencilSolver solver(Kd, Md, opts);
  const double tol = 1e-6 * std::max(1.0, q);
  int below, above;
  try {
    below = solver.count_below(q - tol);
    above = solver.count_below(q + tol);
  } catch (const SingularShiftError&) {
    throw DegenerateQError(
        "compute_k0: a Dirichlet eigenvalue sits at the probe points around q");
  }
  if (below != above)
    throw DegenerateQError(
        "compute_k0: q within 1e-6 of a Dirichlet-on-Gamma eigenvalue; "
        "perturb q and retry");
  return below;
}

std::vector<BranchEigenvalue> spectrum_Aqr_fixedpoint(const TriMesh& mesh_omega,
                                                      double q, double r,
                                                      double Lambda,
                                                      const EigSolveOptions& opts,
                                                      const AqrOptions& aqr) {
  if (!(q > 0.0) || !(r > 0.0))
    throw std::invalid_argument("spectrum_Aqr_fixedpoint: q, r must be positive");
  require_base_only(mesh_omega, "spectrum_Aqr_fixedpoint");
  const int k0 = compute_k0(mesh_omega, q, opts);  // also rejects degenerate q

  const BaseOperators ops(mesh_omega);
  CurveCounter counter(ops.K, ops.Gt, ops.M);
  std::map<double, int> memo;
  auto count_at = [&](double lambda) {
    auto it = memo.find(lambda);
    if (it != memo.end()) return it->second;
    const int c = counter.count_robust(lambda, q, r);
    memo.emplace(lambda, c);
    return c;
  };

  const double width_tol = aqr.bisect_rel * std::max(1.0, q);
  std::vector<BranchEigenvalue> out;

  // plus branch: monotone count on [0, min(Lambda, q*(1 - window))]
  const double plus_hi = std::min(Lambda, q * (1.0 - aqr.window));
  if (plus_hi > 0.0) {
    const int n_plus = count_at(plus_hi);
    if (n_plus > 100000)
      throw ConvergenceError("spectrum_Aqr_fixedpoint: implausible root count");
    for (int k = 1; k <= n_plus; ++k) {
      double lo = 0.0, hi = plus_hi;  // c(0+) = 0 by positivity of the pencil
      while (hi - lo > width_tol) {
        const double mid = 0.5 * (lo + hi);
        if (count_at(mid) >= k)
          hi = mid;
        else
          lo = mid;
      }
      BranchEigenvalue be;
      be.k = k;
      be.plus = true;
      be.lambda = 0.5 * (lo + hi);
      be.mu = coupling_mu(be.lambda, q, r);
      be.width = hi - lo;
      out.push_back(be);
    }
  }

  // minus branch: count jumps above k0 on (q, Lambda * (1 + margin)]
  const double cap = Lambda * (1.0 + aqr.lambda_margin);
  if (cap > q) {
    double minus_lo = q * (1.0 + 1e-8);
    int c_lo = count_at(minus_lo);
    for (int shrink = 0; c_lo > k0 && shrink < 2; ++shrink) {
      minus_lo = q * (1.0 + 1e-8 * std::pow(1e-2, shrink + 1));
      c_lo = count_at(minus_lo);
    }
    if (c_lo > k0)
      throw ConvergenceError(
          "spectrum_Aqr_fixedpoint: minus-branch roots unresolvably close to q");
    const int n_minus = count_at(cap) - k0;
    for (int k = 1; k <= n_minus; ++k) {
      double lo = minus_lo, hi = cap;
      while (hi - lo > width_tol) {
        const double mid = 0.5 * (lo + hi);
        if (count_at(mid) >= k0 + k)
          hi = mid;
        else
          lo = mid;
      }
      BranchEigenvalue be;
      be.k = k;
      be.plus = false;
      be.lambda = 0.5 * (lo + hi);
      be.mu = coupling_mu(be.lambda, q, r);
      be.width = hi - lo;
      if (be.lambda <= Lambda) out.push_back(be);
    }
  }
  return out;
}

Spectrum spectrum_Aqr_block(const TriMesh& mesh_omega, double q, double r,
                            double Lambda, const EigSolveOptions& opts,
                            const AqrOptions& aqr) {
  if (!(q > 0.0) || !(r > 0.0))
    throw std::invalid_argument("spectrum_Aqr_block: q, r must be positive");
  require_base_only(mesh_omega, "spectrum_Aqr_block");
  const BaseOperators ops(mesh_omega);
  const AqrBlocks blocks = assemble_Aqr_blocks(ops.K, ops.M, ops.G, ops.trace, q, r);
  Spectrum s = eigs_in_interval(blocks.S, blocks.B, -kLowerShift, Lambda, opts);
  s.add_tag_in_window(q, aqr.window * q, "essential-limit-cluster");
  return s;
}

Spectrum fixedpoint_to_spectrum(const std::vector<BranchEigenvalue>& branches,
                                double q, double Lambda, bool include_q) {
  Spectrum s;
  for (const auto& b : branches)
    s.insert(b.lambda, 1, b.plus ? "branch+" : "branch-", b.width);
  if (include_q && q <= Lambda) s.insert(q, 1, "essential-limit", 0.0);
  return s;
}

Spectrum sigma0_for_regime(const RegimeClass& regime, const TriMesh& mesh_omega,
                           double Lambda, const EigSolveOptions& opts,
                           const AqrOptions& aqr) {
  switch (regime.q_kind) {
    case RegimeClass::Q::Infinite:
      return regime.r_positive ? spectrum_Ar(mesh_omega, regime.r_value, Lambda, opts)
                               : spectrum_A(mesh_omega, Lambda, opts);
    case RegimeClass::Q::Zero:
      // A_q (and A_qr) with q = 0: sigma(A) plus the essential point 0
      return spectrum_Aq(mesh_omega, 0.0, Lambda, opts);
    case RegimeClass::Q::FinitePositive:
      if (!regime.r_positive)
        return spectrum_Aq(mesh_omega, regime.q_value, Lambda, opts);
      return fixedpoint_to_spectrum(
          spectrum_Aqr_fixedpoint(mesh_omega, regime.q_value, regime.r_value,
                                  Lambda, opts, aqr),
          regime.q_value, Lambda);
  }
  throw std::logic_error("sigma0_for_regime: unreachable");
}

}  // namespace roompass
