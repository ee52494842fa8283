#pragma once

#include <cstdint>
#include <iosfwd>
#include <tuple>
#include <vector>

namespace roompass {

/// Symmetric sparse matrix holding the lower triangle (diagonal included)
/// in compressed row form.  Row i lists column indices j <= i in ascending
/// order.  Because the matrix is symmetric, the same three arrays read as
/// the upper triangle in compressed column form, which is the layout the
/// LDL^T factorization consumes directly.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n + 1
  std::vector<int> cols;     // ascending within each row, cols[k] <= row
  std::vector<double> vals;

  /// Assemble from (row, col, value) triplets.  Entries may address either
  /// triangle; duplicates are summed.  Entries that are exactly zero after
  /// summation are kept only if they appeared explicitly (structural
  /// pattern is the union of the input pattern).
  static SparseSymMatrix from_triplets(int n,
                                       std::vector<std::tuple<int, int, double>> entries);

  int nnz() const { return static_cast<int>(cols.size()); }

  /// y = A x with the full symmetric operator.
  void multiply(const double* x, double* y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  /// x^T A y over the full symmetric operator.
  double quadratic_form(const std::vector<double>& x, const std::vector<double>& y) const;

  /// Max absolute column sum of the full matrix (= infinity norm, by symmetry).
  double one_norm() const;

  double get(int i, int j) const;  // slow lookup, test helper
};

/// Fixed union pattern over a family of symmetric matrices so linear
/// combinations sum_i c_i A_i can be formed repeatedly with no pattern
/// work.  Value arrays of each term are aligned against the union pattern
/// once at construction.
class MatrixCombo {
 public:
  explicit MatrixCombo(std::vector<const SparseSymMatrix*> terms);

  const SparseSymMatrix& pattern() const { return pattern_; }
  std::size_t term_count() const { return aligned_.size(); }

  /// out = values of sum_i coeffs[i] * A_i, aligned with pattern().
  void combine(const std::vector<double>& coeffs, std::vector<double>& out) const;

 private:
  SparseSymMatrix pattern_;  // vals zeroed, used for structure only
  std::vector<std::vector<double>> aligned_;
};

/// Debug export, coordinate format "row col value" with 17 significant
/// digits, lower triangle entries only.
void write_coordinate(const SparseSymMatrix& a, std::ostream& os);

}  // namespace roompass
