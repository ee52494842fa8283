#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "roompass/geometry.hpp"
#include "roompass/spectrum.hpp"

namespace roompass {

struct Interval {
  double lo = 0.0, hi = 1.0;
};

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hausdorff distance between the truncations X cap l and Y cap l of two
/// finite spectra.  Errors when either truncation is empty (the metric is
/// undefined there).  Multiplicities are irrelevant.
double hausdorff_distance(const Spectrum& X, const Spectrum& Y, Interval l);

/// Rayleigh quotient of the explicit room-and-passage test functions:
/// q_eps * (1 + q_eps h^2 / 3)^{-1}.  Upper bound for the k-th eigenvalue,
/// k <= N(eps).
double theorem2_bound(const ScalingNumbers& scaling, const PerturbationParams& params);

struct ThresholdCheck {
  int k = 0;
  double lambda = 0.0;
  double bound = 0.0;   // bound * (1 + fem_slack)
  double margin = 0.0;  // bound - lambda
  bool pass = false;
};

/// lambda_k <= bound * (1 + fem_slack) for k = 1..n_eps (with
/// multiplicity); the slack absorbs conforming-FEM over-approximation.
std::vector<ThresholdCheck> check_threshold(const Spectrum& spec_eps, double bound,
                                            int n_eps, double fem_slack);

struct TrendVerdict {
  bool pass = false;
  bool halved = false;        // last <= first / 2
  bool nonincreasing = false; // up to the jitter allowance
  std::string detail;
};

/// Convergence trend over (eps, dist_H) rows, eps strictly decreasing,
/// at least three rows.  Passes when the distance at the smallest eps is
/// at most half the largest-eps distance and the sequence is
/// nonincreasing up to 10% jitter.
TrendVerdict convergence_table(const std::vector<std::pair<double, double>>& rows);

/// Shift the truncation endpoint into a spectral gap of sigma0: the point
/// of [0.9 Lambda, 1.1 Lambda] farthest from sigma0.
double place_lambda_in_gap(const Spectrum& sigma0, double Lambda);

/// CSV rows "eps,k,lambda,multiplicity,tag,residual"; tags joined by '|'.
void write_spectrum_csv(const Spectrum& spec, double eps, std::ostream& os,
                        bool header = true);
Spectrum read_spectrum_csv(std::istream& is);

}  // namespace roompass
