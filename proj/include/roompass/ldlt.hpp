#pragma once

#include <vector>

#include "roompass/sparse.hpp"

namespace roompass {

struct LdltInfo {
  bool ok = false;           // factorization ran to completion
  int n_negative = 0;        // inertia of D = inertia of the input matrix
  int n_positive = 0;
  int n_zero = 0;            // pivots below the singularity tolerance
  double min_abs_pivot = 0.0;
  double max_abs_pivot = 0.0;
  bool near_singular() const { return n_zero > 0; }
};

/// Sparse LDL^T factorization (no pivoting) of a symmetric matrix, with a
/// reverse Cuthill-McKee fill-reducing ordering computed at analyze time.
/// L is unit lower triangular, so A = (P^T L) D (P^T L)^T is a congruence
/// and the signs of D carry the inertia of A; that sign count is what the
/// spectrum slicing machinery consumes.
///
/// analyze() fixes the pattern; factorize() may then be called repeatedly
/// with different value arrays aligned to that pattern (shifted matrices
/// S - sigma*B share one symbolic factorization).
class LdltFactor {
 public:
  /// Symbolic phase: ordering, elimination tree, column counts.
  void analyze(const SparseSymMatrix& pattern);

  /// Numeric phase. `vals` must be aligned with the analyzed pattern.
  /// A pivot d is counted as zero when |d| <= singular_tol * max_j |d_j|.
  LdltInfo factorize(const std::vector<double>& vals, double singular_tol = 1e-12);

  /// Solve A x = b in place (forward, diagonal, backward sweeps).
  void solve(std::vector<double>& x) const;

  int dim() const { return n_; }
  const LdltInfo& info() const { return info_; }
  std::int64_t factor_nnz() const { return static_cast<std::int64_t>(li_.size()); }

 private:
  int n_ = 0;
  // upper triangle of P A P^T in compressed column form
  std::vector<int> ap_, ai_;
  std::vector<int> map_;            // input nnz position -> permuted position
  std::vector<double> ax_;          // permuted values, filled per factorize
  std::vector<int> perm_, iperm_;   // fill ordering, new <- old
  std::vector<int> parent_;         // elimination tree
  std::vector<int> lp_;             // column pointers of L (size n+1)
  std::vector<int> lnz_;            // per-column fill counts
  std::vector<int> li_;             // row indices of L
  std::vector<double> lx_;          // values of L
  std::vector<double> d_;           // diagonal of D
  LdltInfo info_;
};

/// Reverse Cuthill-McKee ordering of the adjacency graph of a symmetric
/// pattern.  Returns perm with perm[new] = old.
std::vector<int> rcm_ordering(const SparseSymMatrix& pattern);

/// Incomplete nested dissection via BFS level-set separators; subdomains
/// are eliminated before their separator.  Beats the banded RCM ordering
/// decisively on large 2-D meshes.
std::vector<int> nested_dissection_ordering(const SparseSymMatrix& pattern);

/// Ordering used by analyze(): RCM for small systems, nested dissection
/// for large ones.
std::vector<int> fill_ordering(const SparseSymMatrix& pattern);

}  // namespace roompass
