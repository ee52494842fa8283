#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "roompass/study.hpp"

namespace {

int run_study_command(const std::string& config_path, const std::string& preset,
                      const std::string& out_flag, int jobs, double lambda_flag,
                      bool have_lambda) {
  using namespace roompass;
  StudyConfig cfg;
  try {
    if (!preset.empty()) cfg = preset_config(preset);
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) {
        std::cerr << "error: cannot open config file '" << config_path << "'\n";
        return 2;
      }
      std::stringstream buffer;
      buffer << is.rdbuf();
      cfg = parse_config(buffer.str(), cfg);
    } else if (preset.empty()) {
      std::cerr << "error: provide --preset and/or --config\n";
      return 2;
    }
    if (have_lambda) cfg.lambda = lambda_flag;

    std::string out = out_flag;
    if (out.empty()) out = cfg.out_dir;
    if (out.empty()) {
      if (const char* env = std::getenv("ROOMPASS_OUT")) out = env;
    }
    if (out.empty()) {
      std::cerr << "error: no output directory (--out, out_dir key, or "
                   "ROOMPASS_OUT)\n";
      return 2;
    }
    cfg.validate();

    const StudyArtifacts art = run_study(cfg, out, jobs);
    std::ifstream log(art.log_file);
    std::cout << log.rdbuf();
    std::cout << "report: " << art.report_json << "\n";
    return art.verdict_pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "roompass: spectral convergence studies for room-and-passage "
      "boundary perturbations"};
  app.require_subcommand(1);

  auto* study = app.add_subcommand(
      "study", "run a full convergence study (domains, spectra, report)");
  std::string config_path, preset, out_dir;
  int jobs = 1;
  double lambda = 0.0;
  study->add_option("--config", config_path, "study configuration file");
  study->add_option("--preset", preset,
                    "built-in regime preset: coupled, courant-hilbert, steklov, "
                    "neumann");
  study->add_option("--out", out_dir,
                    "output directory (fallbacks: out_dir key, ROOMPASS_OUT)");
  study->add_option("--jobs", jobs, "concurrent eps pipelines")
      ->check(CLI::PositiveNumber);
  auto* lambda_opt =
      study->add_option("--lambda", lambda, "override the spectral window top");

  CLI11_PARSE(app, argc, argv);

  if (study->parsed())
    return run_study_command(config_path, preset, out_dir, jobs, lambda,
                             lambda_opt->count() > 0);
  return 2;
}
