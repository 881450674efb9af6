// ssh-ion-lab: runs one experiment described by a flat key = value config.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sshion/config.hpp"
#include "sshion/errors.hpp"
#include "sshion/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Long-range SSH chains in driven trapped-ion crystals"};
  std::string config_path;
  int jobs = 1;
  std::string output_dir;
  std::string format;
  bool quiet = false;
  app.add_option("--config", config_path, "Run configuration (key = value lines)")->required();
  app.add_option("--jobs", jobs, "Worker threads for sweeps (SSH_ION_LAB_THREADS overrides)");
  app.add_option("--output", output_dir, "Output directory (overrides output_dir)");
  app.add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", quiet, "Suppress progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::ifstream in(config_path);
    if (!in) sshion::fail(sshion::ErrorKind::config, "cannot read config file " + config_path);
    std::stringstream text;
    text << in.rdbuf();
    const sshion::RunConfig config = sshion::parse_config(text.str());

    sshion::RunOptions opts;
    opts.jobs = sshion::resolve_jobs(jobs);
    opts.quiet = quiet;
    if (!output_dir.empty()) opts.output_dir = output_dir;
    if (format == "csv") opts.format = sshion::OutputFormat::csv;
    if (format == "json") opts.format = sshion::OutputFormat::json;

    const auto result = sshion::run_experiment(config, opts);
    if (!quiet) std::cout << "done in " << result.wall_seconds << " s\n";
    return 0;
  } catch (const sshion::Error& e) {
    std::cerr << "error (" << sshion::to_string(e.kind()) << "): " << e.what() << "\n";
    return sshion::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
