#pragma once

#include <string>
#include <vector>

namespace roompass {

struct SpectralValue {
  double value = 0.0;
  int multiplicity = 1;
  std::vector<std::string> tags;  // e.g. "branch+", "branch-", "essential-limit"
  double residual = 0.0;          // normalized residual, 0 for analytic values
};

/// Ascending list of distinct eigenvalues with multiplicities.  Values
/// closer than merge_width(v) = tol * max(1, |v|) are merged into one
/// entry with summed multiplicity (eigenvalue clusters near the essential
/// point would otherwise splinter into near-duplicates).
struct Spectrum {
  std::vector<SpectralValue> entries;

  static constexpr double kDefaultMergeTol = 1e-8;

  static Spectrum from_values(std::vector<double> values,
                              double merge_tol = kDefaultMergeTol);

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  int total_multiplicity() const;

  std::vector<double> values() const;                    // distinct
  std::vector<double> values_with_multiplicity() const;  // repeated copies

  /// Insert a point, merging into an existing entry when within tolerance
  /// (tags are unioned, multiplicities summed).
  void insert(double value, int multiplicity = 1, const std::string& tag = "",
              double residual = 0.0, double merge_tol = kDefaultMergeTol);

  void add_tag_in_window(double center, double half_width, const std::string& tag);

  Spectrum truncated(double lo, double hi) const;
};

}  // namespace roompass
