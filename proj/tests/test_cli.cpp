#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "sshion/config.hpp"
#include "sshion/errors.hpp"
#include "sshion/experiments.hpp"
#include "sshion/io.hpp"

using namespace sshion;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sshion_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config was accepted: " << text);
  return ErrorKind::domain;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(SSH_ION_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse_config("experiment: zak\neta: 0.62\nphi: 2.356\n");
  CHECK(c.experiment == Experiment::zak);
  CHECK(c.model.eta == 0.62);
  CHECK(c.model.phi == 2.356);
  CHECK(c.model.n_sites == 100);
  CHECK(c.model.delta_band == 4.0);
  CHECK(c.m_cells == 256);
  CHECK_FALSE(c.sweep);
  CHECK_FALSE(c.target_dimerization);
}

TEST_CASE("config syntax") {
  const RunConfig c = parse_config(
      "# comment\n"
      "experiment = \"edge\"\n"
      "phi = 3pi/4   # trailing comment\n"
      "delta = 0.1\n"
      "coupling_form = nearest_neighbor\n"
      "sweep_param = delta_band\nsweep_start = 0.5\nsweep_stop = 8\nsweep_points = 4\n");
  CHECK(c.model.phi == doctest::Approx(0.75 * std::numbers::pi).epsilon(1e-15));
  CHECK(c.target_dimerization == 0.1);
  CHECK(c.model.coupling_form == CouplingForm::nearest_neighbor);
  REQUIRE(c.sweep);
  const auto v = c.sweep->values();
  REQUIRE(v.size() == 4);
  CHECK(v.front() == 0.5);
  CHECK(v.back() == 8.0);
  CHECK(parse_config("experiment = floquet-verify\nphi = pi/4\n").model.phi ==
        doctest::Approx(0.25 * std::numbers::pi));
}

TEST_CASE("config errors") {
  CHECK(kind_of("experiment = zak\nphi = -1\n") == ErrorKind::config);
  CHECK(kind_of("experiment = zak\nsweep_param = eta\nsweep_start = 0\nsweep_stop = 1\nsweep_points = 1\n") ==
        ErrorKind::config);
  CHECK(kind_of("experiment = zak\ncolour = blue\n") == ErrorKind::config);
  CHECK(kind_of("experiment = zak\neta = 0.1\neta = 0.2\n") == ErrorKind::config);
  CHECK(kind_of("experiment = zak\neta = 0.1\ndelta = 0.1\n") == ErrorKind::config);
  CHECK(kind_of("eta = 0.1\n") == ErrorKind::config);
  CHECK(kind_of("experiment = teleport\n") == ErrorKind::config);
  CHECK(kind_of("experiment = zak\nn_sites = ten\n") == ErrorKind::config);
  CHECK(kind_of("experiment = zak\nsweep_param = seed\n") == ErrorKind::config);
  try {
    parse_config("experiment = zak\n\nn_sites = 1\n");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("n_sites") != std::string::npos);
  }
}

TEST_CASE("table and number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  Table t{{"a", "b"}, {{1.0, 0.5}, {2.0, -0.25}}, {"note"}};
  CHECK(t.to_csv() == "# note\na,b\n1,0.5\n2,-0.25\n");
  CHECK(t.to_json()["columns"][1] == "b");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("runs are reproducible and hashed") {
  RunConfig c = parse_config(
      "experiment = edge\nn_sites = 60\ndelta = 0.2\n"
      "sweep_param = delta_band\nsweep_start = 0.5\nsweep_stop = 4\nsweep_points = 5\n");
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  RunOptions o;
  o.jobs = 1;
  o.output_dir = a.string();
  const RunResult ra = run_experiment(c, o);
  o.jobs = 3;
  o.output_dir = b.string();
  run_experiment(c, o);
  REQUIRE(ra.files.size() >= 2);
  CHECK(ra.files.back().filename() == "manifest.json");
  for (const auto& f : ra.files) {
    if (f.filename() == "manifest.json") continue;
    CHECK(slurp(f) == slurp(b / f.filename()));
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["experiment"] == "edge");
  CHECK(manifest["config_hash"] == sha256_hex(c.canonical()));
  for (const auto& entry : manifest["files"]) {
    const std::string content = slurp(a / entry["name"].get<std::string>());
    CHECK(entry["sha256"] == sha256_hex(content));
    CHECK(entry["bytes"] == content.size());
  }
}

TEST_CASE("experiment outputs") {
  const fs::path dir = scratch("outputs");
  RunOptions o;
  o.output_dir = dir.string();
  run_experiment(parse_config("experiment = edge\ndelta = 0.1\n"), o);
  CHECK(fs::exists(dir / "edge_profile.csv"));
  const auto report = nlohmann::json::parse(slurp(dir / "edge_report.json"));
  CHECK(report["topological"] == true);
  CHECK(report["midgap_energies"].size() == 2);

  run_experiment(parse_config("experiment = couplings\nn_sites = 6\neta = 0.3\n"), o);
  CHECK(slurp(dir / "couplings.csv").rfind("# N=6", 0) == 0);

  o.format = OutputFormat::json;
  run_experiment(parse_config("experiment = zak\neta = 0.62\nm_cells = 64\n"), o);
  CHECK(fs::exists(dir / "zak.json"));
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::config) == 2);
  CHECK(exit_code(ErrorKind::resource) == 4);
  CHECK(exit_code(ErrorKind::gapless) == 3);
  CHECK(exit_code(ErrorKind::numerical) == 3);

  const fs::path dir = scratch("tool");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string out = " --quiet --output " + (dir / "out").string();
  CHECK(run_tool("--config " + write("ok.cfg", "experiment = spectrum\nn_sites = 20\n") + out) == 0);
  CHECK(fs::exists(dir / "out" / "spectrum.csv"));
  CHECK(run_tool("--config " + write("bad.cfg", "experiment = spectrum\nphi = -1\n") + out) == 2);
  CHECK(run_tool("--config " + write("big.cfg", "experiment = groundstate\nn_sites = 20\n") + out) == 4);
  CHECK(run_tool("--config " + write("kd.cfg", "experiment = spectrum\nkd = 1\n") + out) == 3);
  CHECK(run_tool("--config " + (dir / "missing.cfg").string()) == 2);
  CHECK(run_tool("--bogus") == 2);
  CHECK(run_tool("--help") == 0);
}
