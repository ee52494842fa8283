#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "roompass/limit.hpp"

namespace roompass {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Entire extensions of sqrt(tau) sin(sqrt(tau) H) and cos(sqrt(tau) H);
// the characteristic function stays smooth across the cutoff tau = 0.
double s_fun(double tau, double H) {
  if (tau >= 0.0) {
    const double s = std::sqrt(tau);
    return s * std::sin(s * H);
  }
  const double s = std::sqrt(-tau);
  return -s * std::sinh(s * H);
}

double c_fun(double tau, double H) {
  if (tau >= 0.0) return std::cos(std::sqrt(tau) * H);
  return std::cosh(std::sqrt(-tau) * H);
}

struct ScanRegion {
  double lo, hi;
};

// Sign-change scan plus bisection; the step is halved until the root
// count stabilizes, as duplicate counts betray an under-resolved grid.
std::vector<double> scan_roots(const std::function<double(double)>& chi,
                               const ScanRegion& region, double step0) {
  std::vector<double> prev;
  bool have_prev = false;
  double step = step0;
  for (int attempt = 0; attempt <= 6; ++attempt) {
    std::vector<double> roots;
    const int cells = std::max(2, static_cast<int>(std::ceil((region.hi - region.lo) / step)));
    double xa = region.lo;
    double fa = chi(xa);
    for (int c = 1; c <= cells; ++c) {
      const double xb = region.lo + (region.hi - region.lo) *
                                        (static_cast<double>(c) / cells);
      const double fb = chi(xb);
      if (fa == 0.0) roots.push_back(xa);
      if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
        double lo = xa, hi = xb, flo = fa;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = chi(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
          if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
        }
        roots.push_back(0.5 * (lo + hi));
      }
      xa = xb;
      fa = fb;
    }
    if (fa == 0.0) roots.push_back(xa);
    if (have_prev && roots.size() == prev.size()) return roots;
    prev = std::move(roots);
    have_prev = true;
    // refine: half the smallest gap between found roots, else half the step
    double gap = step;
    for (std::size_t i = 1; i < prev.size(); ++i)
      gap = std::min(gap, prev[i] - prev[i - 1]);
    step = std::min(step / 2.0, gap / 2.0);
    if (step <= 1e-12 * std::max(1.0, region.hi - region.lo)) return prev;
  }
  throw ConvergenceError("separable_oracle: root count did not stabilize");
}

}  // namespace

Spectrum separable_oracle(double W, double H, const LimitProblem& problem,
                          double Lambda, const AqrOptions& aqr) {
  if (!(W > 0.0 && H > 0.0 && Lambda > 0.0))
    throw std::invalid_argument("separable_oracle: bad rectangle or Lambda");
  if (problem.variant != LimitVariant::Ar && problem.variant != LimitVariant::Aqr)
    throw std::invalid_argument("separable_oracle: variant must be A_r or A_qr");
  const bool qr_case = problem.variant == LimitVariant::Aqr;
  const double q = problem.q, r = problem.r;
  if (!(r > 0.0) || (qr_case && !(q > 0.0)))
    throw std::invalid_argument("separable_oracle: parameters must be positive");

  auto coupling = [&](double lambda) {
    return qr_case ? lambda * q * r / (q - lambda) : lambda * r;
  };

  // scan regions; the A_qr pole at q splits the range
  std::vector<ScanRegion> regions;
  std::vector<std::string> region_tag;
  if (qr_case) {
    const double plus_hi = std::min(Lambda, q * (1.0 - aqr.window));
    if (plus_hi > 1e-12) {
      regions.push_back({1e-12, plus_hi});
      region_tag.push_back("branch+");
    }
    if (Lambda > q) {
      regions.push_back({q * (1.0 + 1e-6), Lambda});
      region_tag.push_back("branch-");
    }
  } else {
    regions.push_back({1e-12, Lambda});
    region_tag.push_back("");
  }

  Spectrum out;
  out.insert(0.0, 1, qr_case ? "branch+" : "", 0.0);  // constant mode, p = 0

  for (std::size_t reg = 0; reg < regions.size(); ++reg) {
    const ScanRegion& region = regions[reg];
    // largest coupling magnitude over the region bounds surface modes
    const double f_max = std::max({0.0, coupling(region.lo), coupling(region.hi)});
    for (int p = 0;; ++p) {
      const double cutoff = kPi * kPi * p * p / (W * W);
      const bool bulk_possible = cutoff <= region.hi;
      bool surface_possible = false;
      if (!bulk_possible && f_max > 0.0) {
        const double smin = std::sqrt(cutoff - region.hi);
        surface_possible = smin * std::tanh(smin * H) <= f_max;
      }
      if (!bulk_possible && !surface_possible) break;

      auto chi = [&](double lambda) {
        const double tau = lambda - cutoff;
        return -s_fun(tau, H) - coupling(lambda) * c_fun(tau, H);
      };
      const double step0 =
          std::min({(region.hi - region.lo) / 64.0,
                    0.5 / (std::sqrt(region.hi) / kPi * H + 1.0), 0.05});
      for (double root : scan_roots(chi, region, step0)) {
        if (root <= 1e-10) continue;  // lambda = 0 handled explicitly
        out.insert(root, 1, region_tag[reg], 0.0, 1e-9);
      }
    }
  }
  return out;
}

}  // namespace roompass
