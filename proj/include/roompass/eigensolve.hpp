#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roompass/ldlt.hpp"
#include "roompass/sparse.hpp"
#include "roompass/spectrum.hpp"

namespace roompass {

struct EigSolveOptions {
  double tolerance = 1e-9;   // relative residual, must lie in (0, 1e-3)
  int max_iterations = 600;  // Lanczos steps per slice, restarts included
  int slice_capacity = 16;   // max eigenvalues per slice before splitting
  double merge_tol = 1e-8;   // relative merge width for close eigenvalues
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;

  void validate() const {
    if (!(tolerance > 0.0 && tolerance < 1e-3))
      throw std::invalid_argument("EigSolveOptions: tolerance outside (0, 1e-3)");
    if (max_iterations < 10 || slice_capacity < 1)
      throw std::invalid_argument("EigSolveOptions: bad iteration limits");
  }
};

struct SingularShiftError : std::runtime_error {
  double shift;
  explicit SingularShiftError(double s)
      : std::runtime_error("shifted matrix numerically singular"), shift(s) {}
};

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigPairs {
  Spectrum spectrum;
  /// B-orthonormal eigenvectors, one per value counted with multiplicity,
  /// in ascending eigenvalue order.
  std::vector<std::vector<double>> vectors;
};

using EigPairList = std::vector<std::pair<double, std::vector<double>>>;

/// Number of eigenvalues of the pencil (S, B) strictly below lambda, via
/// the negative inertia of the LDL^T factorization of S - lambda*B.
/// Throws SingularShiftError when lambda sits on an eigenvalue within the
/// factorization tolerance; the caller must perturb lambda.
int count_below(const SparseSymMatrix& S, const SparseSymMatrix& B, double lambda);

/// k smallest eigenvalues of S u = lambda B u (B positive definite) with
/// B-orthonormal eigenvectors, by inertia-bracketed shift-invert Lanczos.
EigPairs eigs_smallest(const SparseSymMatrix& S, const SparseSymMatrix& B, int k,
                       const EigSolveOptions& opts = {});

/// Every eigenvalue in [lo, hi], completeness certified against inertia
/// counts at the endpoints.  Endpoints must not be eigenvalues.
Spectrum eigs_in_interval(const SparseSymMatrix& S, const SparseSymMatrix& B,
                          double lo, double hi, const EigSolveOptions& opts = {});

/// Full spectrum of a small pencil by dense reduction (Cholesky of B,
/// tridiagonalization, implicit-shift iteration).  Test oracle; dimension
/// capped at 2000.
Spectrum dense_eig_oracle(const SparseSymMatrix& S, const SparseSymMatrix& B,
                          double merge_tol = Spectrum::kDefaultMergeTol);

/// Engine shared by the public entry points and by callers issuing many
/// solves against a fixed pattern (Robin curve sweeps, branch bisections).
/// Holds the union pattern of S and B and one symbolic factorization;
/// every shifted factorization reuses it.
class PencilSolver {
 public:
  PencilSolver(const SparseSymMatrix& S, const SparseSymMatrix& B,
               EigSolveOptions opts = {});
  PencilSolver(const PencilSolver&) = delete;
  PencilSolver& operator=(const PencilSolver&) = delete;

  int dim() const { return n_; }
  const EigSolveOptions& options() const { return opts_; }

  /// Inertia count; throws SingularShiftError on a near-singular shift.
  int count_below(double lambda);

  /// Inertia count that nudges lambda away from eigenvalues when needed;
  /// the shift actually used is reported through *used.
  int count_below_robust(double lambda, double* used = nullptr);

  /// All eigenpairs in (lo, hi), ascending; certified complete against the
  /// endpoint inertia counts (the endpoints must not be eigenvalues).
  EigPairList solve_interval(double lo, double hi);

  /// k smallest eigenpairs; the bracketing interval found by inertia
  /// doubling is reported through lo_used/hi_used when non-null.
  EigPairList smallest(int k, double* lo_used = nullptr, double* hi_used = nullptr);

  double residual_scale(double lambda) const {  // ||S||_1 + |lambda| ||B||_1
    return s_norm_ + std::abs(lambda) * b_norm_;
  }
  /// ||S x - lambda B x||_2 / (residual_scale * ||x||_2)
  double relative_residual(const std::vector<double>& x, double lambda) const;

 private:
  EigPairList lanczos_slice(double lo, double hi, int want, bool& complete);
  bool factor_at(double sigma);  // false when near-singular
  void op_apply(const std::vector<double>& x, std::vector<double>& y) const;
  double rng_uniform();

  const SparseSymMatrix& S_;
  const SparseSymMatrix& B_;
  EigSolveOptions opts_;
  int n_ = 0;
  double s_norm_ = 0.0, b_norm_ = 0.0;
  MatrixCombo combo_;  // terms: S, B
  LdltFactor ldlt_;
  std::vector<double> shifted_vals_;
  std::uint64_t rng_state_;
};

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
/// d: diagonal (in/out, eigenvalues on return, ascending); e: subdiagonal
/// e[0..m-2]; z (optional, size m*m row-major): transformed alongside, pass
/// the identity to obtain eigenvectors as columns.  Returns false when the
/// iteration fails to converge (does not happen for well-formed input).
bool tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>* z);

}  // namespace roompass
