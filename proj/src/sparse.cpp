#include "roompass/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace roompass {

SparseSymMatrix SparseSymMatrix::from_triplets(
    int n, std::vector<std::tuple<int, int, double>> entries) {
  if (n < 0) throw std::invalid_argument("from_triplets: negative dimension");
  for (auto& [r, c, v] : entries) {
    if (r < 0 || r >= n || c < 0 || c >= n)
      throw std::out_of_range("from_triplets: index out of range");
    if (c > r) std::swap(r, c);  // map to lower triangle
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) < std::get<1>(b);
  });

  SparseSymMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  m.cols.reserve(entries.size());
  m.vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const int r = std::get<0>(entries[k]);
    const int c = std::get<1>(entries[k]);
    double sum = 0.0;
    while (k < entries.size() && std::get<0>(entries[k]) == r &&
           std::get<1>(entries[k]) == c) {
      sum += std::get<2>(entries[k]);
      ++k;
    }
    m.cols.push_back(c);
    m.vals.push_back(sum);
    m.row_ptr[r + 1]++;
  }
  for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

void SparseSymMatrix::multiply(const double* x, double* y) const {
  for (int i = 0; i < n; ++i) y[i] = 0.0;
  for (int i = 0; i < n; ++i) {
    double yi = 0.0;
    const double xi = x[i];
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const int j = cols[p];
      const double a = vals[p];
      yi += a * x[j];
      if (j != i) y[j] += a * xi;
    }
    y[i] += yi;
  }
}

std::vector<double> SparseSymMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("multiply: size mismatch");
  std::vector<double> y(n);
  multiply(x.data(), y.data());
  return y;
}

double SparseSymMatrix::quadratic_form(const std::vector<double>& x,
                                       const std::vector<double>& y) const {
  std::vector<double> ay = multiply(y);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * ay[i];
  return s;
}

double SparseSymMatrix::one_norm() const {
  std::vector<double> colsum(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const int j = cols[p];
      const double a = std::abs(vals[p]);
      colsum[j] += a;
      if (j != i) colsum[i] += a;
    }
  }
  double m = 0.0;
  for (double s : colsum) m = std::max(m, s);
  return m;
}

double SparseSymMatrix::get(int i, int j) const {
  if (j > i) std::swap(i, j);
  for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
    if (cols[p] == j) return vals[p];
  return 0.0;
}

MatrixCombo::MatrixCombo(std::vector<const SparseSymMatrix*> terms) {
  if (terms.empty()) throw std::invalid_argument("MatrixCombo: no terms");
  const int n = terms.front()->n;
  for (const auto* t : terms)
    if (t->n != n) throw std::invalid_argument("MatrixCombo: dimension mismatch");

  // Union pattern, row by row (patterns are sorted within rows).
  pattern_.n = n;
  pattern_.row_ptr.assign(n + 1, 0);
  std::vector<int> merged;
  for (int i = 0; i < n; ++i) {
    merged.clear();
    for (const auto* t : terms)
      merged.insert(merged.end(), t->cols.begin() + t->row_ptr[i],
                    t->cols.begin() + t->row_ptr[i + 1]);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    pattern_.cols.insert(pattern_.cols.end(), merged.begin(), merged.end());
    pattern_.row_ptr[i + 1] = static_cast<int>(pattern_.cols.size());
  }
  pattern_.vals.assign(pattern_.cols.size(), 0.0);

  aligned_.resize(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    auto& dst = aligned_[t];
    dst.assign(pattern_.cols.size(), 0.0);
    const auto& src = *terms[t];
    for (int i = 0; i < n; ++i) {
      int q = pattern_.row_ptr[i];
      for (int p = src.row_ptr[i]; p < src.row_ptr[i + 1]; ++p) {
        while (pattern_.cols[q] != src.cols[p]) ++q;
        dst[q] = src.vals[p];
      }
    }
  }
}

void MatrixCombo::combine(const std::vector<double>& coeffs,
                          std::vector<double>& out) const {
  if (coeffs.size() != aligned_.size())
    throw std::invalid_argument("combine: coefficient count mismatch");
  out.assign(pattern_.cols.size(), 0.0);
  for (std::size_t t = 0; t < aligned_.size(); ++t) {
    const double c = coeffs[t];
    if (c == 0.0) continue;
    const auto& a = aligned_[t];
    for (std::size_t k = 0; k < a.size(); ++k) out[k] += c * a[k];
  }
}

void write_coordinate(const SparseSymMatrix& a, std::ostream& os) {
  char buf[64];
  for (int i = 0; i < a.n; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, a.cols[p], a.vals[p]);
      os << buf;
    }
  }
}

}  // namespace roompass
