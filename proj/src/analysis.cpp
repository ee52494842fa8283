#include "roompass/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace roompass {

namespace {

double directed_sup_inf(const std::vector<double>& from, const std::vector<double>& to) {
  double sup = 0.0;
  for (double x : from) {
    auto it = std::lower_bound(to.begin(), to.end(), x);
    double best = 1e300;
    if (it != to.end()) best = std::min(best, *it - x);
    if (it != to.begin()) best = std::min(best, x - *std::prev(it));
    sup = std::max(sup, best);
  }
  return sup;
}

}  // namespace

double hausdorff_distance(const Spectrum& X, const Spectrum& Y, Interval l) {
  if (!(l.lo < l.hi)) throw AnalysisError("hausdorff_distance: empty interval");
  std::vector<double> xs, ys;
  for (const auto& e : X.entries)
    if (e.value >= l.lo && e.value <= l.hi) xs.push_back(e.value);
  for (const auto& e : Y.entries)
    if (e.value >= l.lo && e.value <= l.hi) ys.push_back(e.value);
  if (xs.empty() || ys.empty())
    throw AnalysisError("hausdorff_distance: empty truncation");
  return std::max(directed_sup_inf(xs, ys), directed_sup_inf(ys, xs));
}

double theorem2_bound(const ScalingNumbers& scaling, const PerturbationParams& params) {
  return scaling.q_eps / (1.0 + scaling.q_eps * params.h * params.h / 3.0);
}

std::vector<ThresholdCheck> check_threshold(const Spectrum& spec_eps, double bound,
                                            int n_eps, double fem_slack) {
  const std::vector<double> vals = spec_eps.values_with_multiplicity();
  if (static_cast<int>(vals.size()) < n_eps)
    throw AnalysisError("check_threshold: spectrum holds fewer than N(eps) values");
  const double limit = bound * (1.0 + fem_slack);
  std::vector<ThresholdCheck> checks;
  for (int k = 1; k <= n_eps; ++k) {
    ThresholdCheck c;
    c.k = k;
    c.lambda = vals[k - 1];
    c.bound = limit;
    c.margin = limit - c.lambda;
    c.pass = c.lambda <= limit;
    checks.push_back(c);
  }
  return checks;
}

TrendVerdict convergence_table(const std::vector<std::pair<double, double>>& rows) {
  TrendVerdict v;
  if (rows.size() < 3) throw AnalysisError("convergence_table: need >= 3 rows");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].first < rows[i - 1].first))
      throw AnalysisError("convergence_table: eps not strictly decreasing");

  v.halved = rows.back().second <= 0.5 * rows.front().second;
  v.nonincreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].second > 1.10 * rows[i - 1].second) v.nonincreasing = false;
  v.pass = v.halved && v.nonincreasing;

  std::ostringstream os;
  os << "dist(first)=" << rows.front().second << " dist(last)=" << rows.back().second
     << " halved=" << (v.halved ? "yes" : "no")
     << " nonincreasing(10% jitter)=" << (v.nonincreasing ? "yes" : "no");
  v.detail = os.str();
  return v;
}

double place_lambda_in_gap(const Spectrum& sigma0, double Lambda) {
  const double lo = 0.9 * Lambda, hi = 1.1 * Lambda;
  const std::vector<double> vals = sigma0.values();
  auto dist_to_set = [&](double x) {
    double best = 1e300;
    for (double v : vals) best = std::min(best, std::abs(x - v));
    return best;
  };
  double best_x = Lambda, best_d = dist_to_set(Lambda);
  auto consider = [&](double x) {
    if (x < lo || x > hi) return;
    const double d = dist_to_set(x);
    if (d > best_d) {
      best_d = d;
      best_x = x;
    }
  };
  consider(lo);
  consider(hi);
  for (std::size_t i = 0; i + 1 < vals.size(); ++i)
    consider(0.5 * (vals[i] + vals[i + 1]));
  return best_x;
}

void write_spectrum_csv(const Spectrum& spec, double eps, std::ostream& os,
                        bool header) {
  if (header) os << "eps,k,lambda,multiplicity,tag,residual\n";
  char buf[128];
  int k = 1;
  for (const auto& e : spec.entries) {
    std::string tag;
    for (std::size_t t = 0; t < e.tags.size(); ++t) {
      if (t) tag += '|';
      tag += e.tags[t];
    }
    std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%d,%s,%.3g\n", eps, k, e.value,
                  e.multiplicity, tag.c_str(), e.residual);
    os << buf;
    ++k;
  }
}

Spectrum read_spectrum_csv(std::istream& is) {
  Spectrum s;
  std::string line;
  if (!std::getline(is, line)) throw AnalysisError("read_spectrum_csv: empty input");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) throw AnalysisError("read_spectrum_csv: bad row");
    SpectralValue e;
    e.value = std::stod(fields[2]);
    e.multiplicity = std::stoi(fields[3]);
    if (!fields[4].empty()) {
      std::size_t pos = 0;
      for (;;) {
        const std::size_t bar = fields[4].find('|', pos);
        e.tags.push_back(fields[4].substr(pos, bar - pos));
        if (bar == std::string::npos) break;
        pos = bar + 1;
      }
    }
    e.residual = std::stod(fields[5]);
    s.entries.push_back(std::move(e));
  }
  return s;
}

}  // namespace roompass
