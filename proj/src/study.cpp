#include "roompass/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace roompass {

namespace {

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// Largest relative drift between two truncated spectra, matched by
/// nearest value; used for the sigma0 mesh-stabilization loop.
double spectra_change(const Spectrum& prev, const Spectrum& cur, double Lambda) {
  double worst = 0.0;
  for (const auto& e : cur.entries) {
    if (e.value < -1e-6 || e.value > Lambda) continue;
    double best = 1e300;
    for (const auto& p : prev.entries)
      best = std::min(best, std::abs(p.value - e.value));
    worst = std::max(worst, best / std::max(1.0, std::abs(e.value)));
  }
  return worst;
}

EpsResult solve_one_eps(const StudyConfig& cfg, const RegimeClass& regime,
                        std::size_t j, double lambda_used,
                        const Spectrum& sigma0) {
  EpsResult row;
  row.eps = cfg.eps_list[j];
  row.target_h = cfg.mesh_h_for(j);
  row.params = cfg.params_for(j);

  const ValidationReport validation =
      validate_assumptions(row.params, cfg.shape, cfg.smallness_threshold);
  if (!validation.hard_pass) {
    std::string names;
    for (const auto& c : validation.checks)
      if (!c.pass) names += " " + c.name;
    throw StudyError("eps=" + fmt(row.eps) + ": assumption violations:" + names);
  }
  row.scaling = compute_scaling(row.params, cfg.shape, cfg.base);

  const PerturbedDomain domain =
      build_perturbed_domain(cfg.base, row.params, cfg.shape);
  row.domain_json = domain_to_json(domain);

  MeshOptions mopts;
  mopts.target_h = row.target_h;
  mopts.aspect_limit = cfg.aspect_limit;
  mopts.vertex_budget = cfg.vertex_budget;
  const TriMesh mesh = mesh_perturbed_domain(domain, mopts);
  {
    std::ostringstream os;
    write_mesh(mesh, os);
    row.mesh_text = os.str();
  }
  row.dof = mesh.vertex_count();

  const SparseSymMatrix K = assemble_stiffness(mesh);
  DensityField density;
  density.room = row.params.rho;
  const SparseSymMatrix M = assemble_mass(mesh, density);

  EigSolveOptions eopts;
  eopts.tolerance = cfg.tolerance;
  row.spectrum = eigs_in_interval(K, M, -1e-8, lambda_used, eopts);

  row.dist_h = hausdorff_distance(row.spectrum, sigma0, {-1e-6, lambda_used});

  if (regime.q_kind != RegimeClass::Q::Infinite) {
    const double bound = theorem2_bound(row.scaling, row.params);
    const double slack = cfg.fem_slack * (row.target_h * 64.0);
    row.threshold =
        check_threshold(row.spectrum, bound, row.scaling.n_eps, slack);
  }
  return row;
}

}  // namespace

ConvergenceReport compute_study(const StudyConfig& config, int jobs) {
  config.validate();
  ConvergenceReport report;
  report.config = config;
  report.regime = config.regime();
  report.lambda_requested = config.lambda;
  auto log = [&report](const std::string& s) { report.log_lines.push_back(s); };

  {
    std::string kind = report.regime.q_kind == RegimeClass::Q::Infinite
                           ? "infinite"
                           : (report.regime.q_kind == RegimeClass::Q::Zero
                                  ? "zero"
                                  : "finite-positive");
    log("regime: q=" + kind +
        (report.regime.q_kind == RegimeClass::Q::FinitePositive
             ? " (" + fmt(report.regime.q_value) + ")"
             : "") +
        ", r=" + (report.regime.r_positive ? fmt(report.regime.r_value) : "0"));
  }

  // sigma0 on the base mesh, refined until values stop moving; computed
  // past lambda so the gap placement sees the next values above it
  const double lambda_scan = 1.4 * config.lambda;
  EigSolveOptions eopts;
  eopts.tolerance = config.tolerance;
  AqrOptions aqr;
  aqr.window = config.q_window;

  double h = config.sigma0_h;
  TriMesh base_mesh = mesh_base(config.base, h, config.vertex_budget);
  report.sigma0 =
      sigma0_for_regime(report.regime, base_mesh, lambda_scan, eopts, aqr);
  report.sigma0_refinements = 0;
  report.sigma0_stabilized = false;
  report.sigma0_last_change = 1e300;
  for (int level = 0; level < config.sigma0_max_refine; ++level) {
    base_mesh = refine_uniform(base_mesh, config.vertex_budget);
    h /= 2.0;
    Spectrum next =
        sigma0_for_regime(report.regime, base_mesh, lambda_scan, eopts, aqr);
    report.sigma0_last_change = spectra_change(report.sigma0, next, lambda_scan);
    report.sigma0 = std::move(next);
    report.sigma0_refinements = level + 1;
    log("sigma0: mesh_h=" + fmt(h) + " change=" + fmt(report.sigma0_last_change));
    if (report.sigma0_last_change < 1e-4) {
      report.sigma0_stabilized = true;
      break;
    }
  }
  report.sigma0_h_final = h;
  if (!report.sigma0_stabilized)
    log("sigma0: refinement cap reached before the 1e-4 stabilization target "
        "(last change " +
        fmt(report.sigma0_last_change) + ")");

  report.lambda_used = place_lambda_in_gap(report.sigma0, config.lambda);
  log("lambda: requested " + fmt(config.lambda) + ", using " +
      fmt(report.lambda_used) + " (spectral-gap placement)");

  // per-eps pipelines; rows keep the configured (decreasing) eps order
  report.rows.resize(config.eps_list.size());
  std::atomic<std::size_t> next_index{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = next_index.fetch_add(1);
      if (j >= config.eps_list.size() || failed.load()) return;
      try {
        report.rows[j] = solve_one_eps(config, report.regime, j,
                                       report.lambda_used, report.sigma0);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        if (failure.empty())
          failure = "eps[" + std::to_string(j) + "]=" + fmt(config.eps_list[j]) +
                    ": " + e.what();
      }
    }
  };
  const int n_workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(config.eps_list.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw StudyError("study stage failed: " + failure);

  for (const auto& row : report.rows) {
    std::ostringstream os;
    os << "eps=" << fmt(row.eps) << " dof=" << row.dof
       << " q_eps=" << fmt(row.scaling.q_eps) << " r_eps=" << fmt(row.scaling.r_eps)
       << " N=" << row.scaling.n_eps << " values=" << row.spectrum.total_multiplicity()
       << " dist_H=" << fmt(row.dist_h);
    if (!row.threshold.empty()) {
      int pass = 0;
      for (const auto& c : row.threshold) pass += c.pass;
      os << " threshold=" << pass << "/" << row.threshold.size();
    }
    log(os.str());
  }

  if (report.rows.size() >= 3) {
    std::vector<std::pair<double, double>> table;
    for (const auto& row : report.rows) table.emplace_back(row.eps, row.dist_h);
    report.verdict = convergence_table(table);
  } else {
    report.verdict.pass = false;
    report.verdict.detail = "trend verdict needs at least 3 eps values";
  }
  log("verdict: " + std::string(report.verdict.pass ? "pass" : "fail") + " (" +
      report.verdict.detail + ")");
  return report;
}

StudyArtifacts emit_report(const ConvergenceReport& report,
                           const std::string& out_dir) {
  if (report.rows.empty()) throw StudyError("emit_report: no eps rows computed");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  StudyArtifacts art;
  art.out_dir = out_dir;
  art.verdict_pass = report.verdict.pass;

  auto path = [&](const std::string& name) { return out_dir + "/" + name; };
  auto write_file = [&](const std::string& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw StudyError("emit_report: cannot write " + p);
    os << content;
    if (!os) throw StudyError("emit_report: write failed for " + p);
  };

  {
    std::ostringstream os;
    write_spectrum_csv(report.sigma0, 0.0, os);
    art.sigma0_csv = path("sigma0.csv");
    write_file(art.sigma0_csv, os.str());
  }

  nlohmann::json j;
  j["preset"] = report.config.preset;
  if (report.config.alpha) j["alpha"] = *report.config.alpha;
  if (report.config.beta) j["beta"] = *report.config.beta;
  j["regime"]["q_kind"] = report.regime.q_kind == RegimeClass::Q::Infinite
                              ? "infinite"
                              : (report.regime.q_kind == RegimeClass::Q::Zero
                                     ? "zero"
                                     : "finite-positive");
  j["regime"]["q_value"] = report.regime.q_value;
  j["regime"]["r_positive"] = report.regime.r_positive;
  j["regime"]["r_value"] = report.regime.r_value;
  j["lambda_requested"] = report.lambda_requested;
  j["lambda_used"] = report.lambda_used;
  j["sigma0"]["file"] = "sigma0.csv";
  j["sigma0"]["mesh_h"] = report.sigma0_h_final;
  j["sigma0"]["refinements"] = report.sigma0_refinements;
  j["sigma0"]["last_change"] = report.sigma0_last_change;
  j["sigma0"]["stabilized"] = report.sigma0_stabilized;
  j["rows"] = nlohmann::json::array();

  std::ostringstream plot;
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const EpsResult& row = report.rows[k];
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "%03zu", k);
    const std::string spec_name = std::string("spectrum_") + suffix + ".csv";
    const std::string mesh_name = std::string("mesh_") + suffix + ".txt";
    const std::string dom_name = std::string("domain_") + suffix + ".json";
    {
      std::ostringstream os;
      write_spectrum_csv(row.spectrum, row.eps, os);
      write_file(path(spec_name), os.str());
      art.spectrum_csvs.push_back(path(spec_name));
    }
    write_file(path(mesh_name), row.mesh_text);
    art.mesh_files.push_back(path(mesh_name));
    write_file(path(dom_name), row.domain_json);
    art.domain_files.push_back(path(dom_name));

    nlohmann::json rj;
    rj["eps"] = row.eps;
    rj["target_h"] = row.target_h;
    rj["dof"] = row.dof;
    rj["q_eps"] = row.scaling.q_eps;
    rj["r_eps"] = row.scaling.r_eps;
    rj["n_eps"] = row.scaling.n_eps;
    rj["spectrum_file"] = spec_name;
    rj["mesh_file"] = mesh_name;
    rj["domain_file"] = dom_name;
    rj["dist_h"] = row.dist_h;
    int pass = 0;
    for (const auto& c : row.threshold) pass += c.pass;
    rj["threshold_pass"] = pass;
    rj["threshold_total"] = static_cast<int>(row.threshold.size());
    j["rows"].push_back(rj);

    char line[64];
    std::snprintf(line, sizeof line, "%.10g %.10g\n", row.eps, row.dist_h);
    plot << line;
  }
  j["verdict"]["pass"] = report.verdict.pass;
  j["verdict"]["halved"] = report.verdict.halved;
  j["verdict"]["nonincreasing"] = report.verdict.nonincreasing;
  j["verdict"]["detail"] = report.verdict.detail;

  art.plot_file = path("dist.dat");
  write_file(art.plot_file, plot.str());
  art.report_json = path("report.json");
  write_file(art.report_json, j.dump(2) + "\n");
  {
    std::ostringstream os;
    for (const auto& line : report.log_lines) os << line << "\n";
    art.log_file = path("study.log");
    write_file(art.log_file, os.str());
  }
  return art;
}

StudyArtifacts run_study(const StudyConfig& config, const std::string& out_dir,
                         int jobs) {
  if (out_dir.empty()) throw ConfigError("run_study: no output directory");
  return emit_report(compute_study(config, jobs), out_dir);
}

}  // namespace roompass
