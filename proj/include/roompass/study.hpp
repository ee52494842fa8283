#pragma once

#include <string>
#include <vector>

#include "roompass/analysis.hpp"
#include "roompass/config.hpp"
#include "roompass/limit.hpp"

namespace roompass {

struct StudyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything computed for one eps member of the sweep.
struct EpsResult {
  double eps = 0.0;
  double target_h = 0.0;
  int dof = 0;
  PerturbationParams params;
  ScalingNumbers scaling;
  Spectrum spectrum;      // sigma(A^eps) on [-delta, lambda_used]
  double dist_h = 0.0;
  std::vector<ThresholdCheck> threshold;  // empty when q is infinite
  std::string mesh_text;
  std::string domain_json;
};

struct ConvergenceReport {
  StudyConfig config;
  RegimeClass regime;
  double lambda_requested = 0.0;
  double lambda_used = 0.0;
  Spectrum sigma0;
  double sigma0_h_final = 0.0;
  int sigma0_refinements = 0;
  double sigma0_last_change = 0.0;
  bool sigma0_stabilized = false;
  std::vector<EpsResult> rows;  // ordered by decreasing eps
  TrendVerdict verdict;
  std::vector<std::string> log_lines;
};

struct StudyArtifacts {
  std::string out_dir;
  std::string report_json;
  std::string sigma0_csv;
  std::string plot_file;
  std::string log_file;
  std::vector<std::string> spectrum_csvs;
  std::vector<std::string> mesh_files;
  std::vector<std::string> domain_files;
  bool verdict_pass = false;
};

/// Full pipeline: sigma0 with mesh-stabilization, gap-adjusted Lambda,
/// per-eps solves with inertia certification, distances, threshold
/// checks, trend verdict.  jobs > 1 runs the eps members concurrently.
ConvergenceReport compute_study(const StudyConfig& config, int jobs = 1);

/// Deterministic serialization of a computed report into out_dir.
StudyArtifacts emit_report(const ConvergenceReport& report,
                           const std::string& out_dir);

/// compute_study followed by emit_report.
StudyArtifacts run_study(const StudyConfig& config, const std::string& out_dir,
                         int jobs = 1);

}  // namespace roompass
