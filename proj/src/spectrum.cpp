#include "roompass/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace roompass {

namespace {
bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

Spectrum Spectrum::from_values(std::vector<double> values, double merge_tol) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  for (double v : values) {
    if (!s.entries.empty() && close(s.entries.back().value, v, merge_tol))
      s.entries.back().multiplicity++;
    else
      s.entries.push_back({v, 1, {}, 0.0});
  }
  return s;
}

int Spectrum::total_multiplicity() const {
  int m = 0;
  for (const auto& e : entries) m += e.multiplicity;
  return m;
}

std::vector<double> Spectrum::values() const {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(e.value);
  return v;
}

std::vector<double> Spectrum::values_with_multiplicity() const {
  std::vector<double> v;
  for (const auto& e : entries)
    for (int k = 0; k < e.multiplicity; ++k) v.push_back(e.value);
  return v;
}

void Spectrum::insert(double value, int multiplicity, const std::string& tag,
                      double residual, double merge_tol) {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), value,
      [](const SpectralValue& e, double v) { return e.value < v; });
  SpectralValue* hit = nullptr;
  if (it != entries.end() && close(it->value, value, merge_tol)) hit = &*it;
  if (!hit && it != entries.begin() && close(std::prev(it)->value, value, merge_tol))
    hit = &*std::prev(it);
  if (hit) {
    hit->multiplicity += multiplicity;
    hit->residual = std::max(hit->residual, residual);
    if (!tag.empty() &&
        std::find(hit->tags.begin(), hit->tags.end(), tag) == hit->tags.end())
      hit->tags.push_back(tag);
    return;
  }
  SpectralValue e{value, multiplicity, {}, residual};
  if (!tag.empty()) e.tags.push_back(tag);
  entries.insert(it, std::move(e));
}

void Spectrum::add_tag_in_window(double center, double half_width,
                                 const std::string& tag) {
  for (auto& e : entries) {
    if (std::abs(e.value - center) <= half_width) {
      if (std::find(e.tags.begin(), e.tags.end(), tag) == e.tags.end())
        e.tags.push_back(tag);
    }
  }
}

Spectrum Spectrum::truncated(double lo, double hi) const {
  Spectrum s;
  for (const auto& e : entries)
    if (e.value >= lo && e.value <= hi) s.entries.push_back(e);
  return s;
}

}  // namespace roompass
