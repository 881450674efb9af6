#include "sshion/experiments.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>

#include "sshion/continuum.hpp"
#include "sshion/couplings.hpp"
#include "sshion/dynamics.hpp"
#include "sshion/floquet.hpp"
#include "sshion/io.hpp"
#include "sshion/lattice.hpp"
#include "sshion/manybody.hpp"
#include "sshion/topology.hpp"

namespace sshion {
namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using json = nlohmann::json;

struct Output {
  std::string name;
  std::string content;
};

struct Point {
  RunConfig config;
  CouplingModel model;
  double value = kNaN;  // sweep coordinate, NaN without a sweep
};

std::vector<Point> sweep_points(const RunConfig& config) {
  std::vector<Point> points;
  if (!config.sweep) {
    points.push_back({config, resolved_model(config), kNaN});
    return points;
  }
  for (double v : config.sweep->values()) {
    RunConfig c = config;
    set_parameter(c, config.sweep->param, v);
    points.push_back({c, CouplingModel{}, v});
  }
  return points;
}

// Evaluates `task` for every sweep point; failures carry the point in their message.
template <class R>
std::vector<R> map_points(const std::vector<Point>& points, int jobs, const RunConfig& config,
                          const std::function<R(const Point&)>& task) {
  return parallel_map<R>(points.size(), jobs, [&](std::size_t i) {
    Point p = points[i];
    try {
      if (config.sweep) p.model = resolved_model(p.config);
      return task(p);
    } catch (const Error& e) {
      std::string where = std::string(to_string(config.experiment));
      if (config.sweep) where += " at " + config.sweep->param + "=" + format_number(p.value);
      throw Error(e.kind(), where + ": " + e.what());
    }
  });
}

Output table_output(const std::string& stem, const Table& t, OutputFormat format) {
  if (format == OutputFormat::json) return {stem + ".json", t.to_json().dump(2) + "\n"};
  return {stem + ".csv", t.to_csv()};
}

json model_json(const CouplingModel& m) {
  return {{"n_sites", m.n_sites},         {"g", m.g},
          {"t_c", m.t_c},                 {"delta_band", m.delta_band},
          {"eta", m.eta},                 {"phi", m.phi},
          {"kd", m.kd},                   {"omega_rabi", m.omega_rabi},
          {"omega_drive", m.omega_drive}, {"coupling_form", std::string(to_string(m.coupling_form))}};
}

double opt(const std::optional<double>& v) { return v ? *v : kNaN; }

std::vector<Output> run_couplings(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  if (!cfg.sweep) {
    const CouplingModel& m = points[0].model;
    const auto c = interaction_constants(m);
    json j = {{"model", model_json(m)},
              {"xi_int", c.xi_int},
              {"j_exp", c.j_exp},
              {"j_dip", c.j_dip},
              {"dimerization", dimerization(m)},
              {"max_bare_coupling", max_bare_coupling(m)},
              {"energy_unit_g2_over_tc", m.energy_unit()}};
    return {{"couplings.csv", coupling_matrix_csv(m, build_coupling_matrix(m))},
            {"couplings.json", j.dump(2) + "\n"}};
  }
  Table t{{cfg.sweep->param, "eta", "dimerization", "dressing_12", "dressing_23"}, {}, {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    return std::vector<double>{p.value, p.model.eta, dimerization(p.model),
                               bessel_dressing(p.model, 1, 2), bessel_dressing(p.model, 2, 3)};
  });
  return {table_output("dimerization", t, fmt)};
}

std::vector<Output> run_spectrum(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  const bool swept = cfg.sweep.has_value();
  Table t;
  if (swept) t.columns.push_back(cfg.sweep->param);
  for (const char* c : {"index", "energy", "energy_g2_over_tc"}) t.columns.push_back(c);
  const auto blocks = map_points<std::vector<std::vector<double>>>(points, jobs, cfg, [&](const Point& p) {
    const SpectralDecomposition spec = diagonalize(build_coupling_matrix(p.model));
    std::vector<std::vector<double>> rows;
    for (int n = 0; n < spec.size(); ++n) {
      std::vector<double> r;
      if (swept) r.push_back(p.value);
      r.insert(r.end(), {double(n + 1), spec.energies(n), spec.energies(n) / p.model.energy_unit()});
      rows.push_back(std::move(r));
    }
    return rows;
  });
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return {table_output("spectrum", t, fmt)};
}

json edge_json(const CouplingModel& m, const EdgeStateReport& r) {
  json j = {{"model", model_json(m)},
            {"dimerization", dimerization(m)},
            {"topological", r.topological()},
            {"gap_lower", r.gap_lower},
            {"gap_upper", r.gap_upper},
            {"midgap_energies", r.midgap_energies},
            {"sublattice_purity", r.sublattice_purity}};
  j["edge_side"] = r.edge_side ? json(std::string(to_string(*r.edge_side))) : json(nullptr);
  j["xi_loc"] = r.xi_loc ? json(*r.xi_loc) : json(nullptr);
  j["fit_rms"] = r.fit_rms ? json(*r.fit_rms) : json(nullptr);
  return j;
}

std::vector<Output> run_edge(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  if (!cfg.sweep) {
    const CouplingModel& m = points[0].model;
    const SpectralDecomposition spec = diagonalize(build_coupling_matrix(m));
    const EdgeStateReport r = analyze_edge(spec);
    Table profile{{"site", "amplitude"}, {}, {}};
    for (int j = 0; j < r.profile.size(); ++j) profile.rows.push_back({double(j + 1), r.profile(j)});
    return {table_output("edge_profile", profile, fmt), {"edge_report.json", edge_json(m, r).dump(2) + "\n"}};
  }
  Table t{{cfg.sweep->param, "eta", "dimerization", "topological", "midgap_count", "energy_1", "energy_2",
           "xi_loc", "fit_rms", "sublattice_purity"},
          {},
          {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    const EdgeStateReport r = analyze_edge(diagonalize(build_coupling_matrix(p.model)));
    const auto& e = r.midgap_energies;
    return std::vector<double>{p.value,
                               p.model.eta,
                               dimerization(p.model),
                               r.topological() ? 1.0 : 0.0,
                               double(e.size()),
                               e.size() > 0 ? e[0] : kNaN,
                               e.size() > 1 ? e[1] : kNaN,
                               opt(r.xi_loc),
                               opt(r.fit_rms),
                               r.sublattice_purity};
  });
  return {table_output("edge_sweep", t, fmt)};
}

std::vector<Output> run_zak(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  Table t{{"eta", "phi", "nu", "gap_min", "quantized", "chirality_defect"}, {}, {}};
  t.comments.push_back("m_cells=" + std::to_string(cfg.m_cells));
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    const BlochHamiltonian b = build_bloch(p.model, cfg.m_cells);
    const double chi = chirality_defect(b);
    try {
      const ZakResult z = zak_phase(b);
      return std::vector<double>{p.model.eta, p.model.phi, z.nu, z.gap_min, z.quantized ? 1.0 : 0.0, chi};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::gapless) throw;
      const double gap = 2.0 * b.d.rowwise().norm().minCoeff();
      return std::vector<double>{p.model.eta, p.model.phi, kNaN, gap, 0.0, chi};
    }
  });
  return {table_output("zak", t, fmt)};
}

std::vector<Output> run_locsweep(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  Table t{{"delta_band_over_tc", "xi_lattice", "xi_pred", "xi_int", "dimerization", "eta"}, {}, {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    const EdgeStateReport r = analyze_edge(diagonalize(build_coupling_matrix(p.model)));
    double xi_pred = kNaN;
    try {
      xi_pred = effective_params(p.model).xi_pred;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::gapless) throw;
    }
    return std::vector<double>{p.model.delta_band / p.model.t_c, opt(r.xi_loc), xi_pred,
                               interaction_constants(p.model).xi_int, dimerization(p.model), p.model.eta};
  });
  return {table_output("locsweep", t, fmt)};
}

std::vector<Output> run_survival(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  if (!cfg.sweep) fail(ErrorKind::config, "survival needs a sweep (over eta or delta)");
  const auto points = sweep_points(cfg);
  Table t{{"inv_xi_loc", "P", "eta", "dimerization"}, {}, {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    const SpectralDecomposition spec = diagonalize(build_coupling_matrix(p.model));
    const EdgeStateReport r = find_edge_states(spec);
    if (!r.topological()) fail(ErrorKind::domain, "no edge state");
    const double xi = fit_localization_length(spec, r).xi_loc;
    return std::vector<double>{1.0 / xi, long_time_survival(spec), p.model.eta, dimerization(p.model)};
  });
  std::vector<SurvivalPoint> pts;
  for (const auto& row : t.rows) pts.push_back({1.0 / row[0], row[1]});
  const SurvivalFit f = fit_survival_power_law(pts, cfg.model.n_sites);
  json j = {{"beta", f.beta},
            {"c1", f.c1},
            {"c2", f.c2},
            {"rms", f.rms},
            {"beta_loglog", f.beta_loglog},
            {"c1_fixed_exponent", f.c1_fixed},
            {"c2_fixed_exponent", f.c2_fixed},
            {"fit_window", {f.inv_xi_min, f.inv_xi_max}},
            {"n_sites", cfg.model.n_sites},
            {"points", pts.size()}};
  return {table_output("survival", t, fmt), {"fit.json", j.dump(2) + "\n"}};
}

std::vector<Output> run_groundstate(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  Table t{{"delta", "delta_band_over_tc", "zz_exact", "zz_trunc", "zz_hf", "hf_particles", "eta", "energy",
           "sector", "degenerate_sectors"},
          {},
          {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    const CouplingMatrix h = build_coupling_matrix(p.model);
    const GroundState exact = exact_ground_state(h);
    const GroundState trunc = exact_ground_state(truncate_range(h, 2));
    HartreeFockOptions opts;
    opts.self_consistent = cfg.self_consistent;
    const HartreeFockResult hf = hartree_fock(build_truncated_fermion_model(h), opts);
    return std::vector<double>{dimerization(p.model),
                               p.model.delta_band / p.model.t_c,
                               correlator_zz(exact.state, exact.basis),
                               correlator_zz(trunc.state, trunc.basis),
                               hf.correlator_zz,
                               double(hf.occupation.size()),
                               p.model.eta,
                               exact.energy,
                               double(exact.basis.n_excitations),
                               exact.degenerate_sectors ? 1.0 : 0.0};
  });
  return {table_output("correlators", t, fmt)};
}

std::vector<Output> run_hartreefock(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  Table t{{"delta", "delta_band_over_tc", "z_weight", "zz_hf", "ambiguous_filling", "zz_hf_alt", "eta"},
          {},
          {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    HartreeFockOptions opts;
    opts.self_consistent = cfg.self_consistent;
    const HartreeFockResult hf = hartree_fock(p.model, opts);
    return std::vector<double>{dimerization(p.model),     p.model.delta_band / p.model.t_c,
                               opt(hf.z_weight),          hf.correlator_zz,
                               hf.ambiguous_filling ? 1.0 : 0.0, opt(hf.correlator_zz_alt),
                               p.model.eta};
  });
  return {table_output("z_weight", t, fmt)};
}

std::vector<Output> run_floquet(const RunConfig& cfg, int jobs, OutputFormat fmt) {
  const auto points = sweep_points(cfg);
  auto evaluate = [&](const Point& p) {
    DrivenModel dm = DrivenModel::with_ratios(p.model, p.config.omega_ratio, p.config.drive_ratio);
    dm.include_anomalous = p.config.include_anomalous;
    const double t_final = p.config.t_final / dm.max_coupling();
    return effective_model_fidelity(dm, single_excitation_state(p.model.n_sites, 1), t_final);
  };
  if (!cfg.sweep) {
    const FidelityReport r = evaluate(points[0]);
    if (!r.separated) std::cerr << "warning: omega_d or Omega below 10 max|J|; effective model may not apply\n";
    json j = {{"model", model_json(points[0].model)},
              {"omega_over_maxj", r.omega_over_j},
              {"drive_over_maxj", r.drive_over_j},
              {"max_j", r.max_j},
              {"t_final_maxj", cfg.t_final},
              {"include_anomalous", cfg.include_anomalous},
              {"fidelity", r.fidelity},
              {"norm_drift", r.norm_drift},
              {"steps", r.steps},
              {"scale_separated", r.separated}};
    return {{"fidelity.json", j.dump(2) + "\n"}};
  }
  Table t{{cfg.sweep->param, "fidelity", "norm_drift", "steps", "omega_over_maxj", "drive_over_maxj"}, {}, {}};
  t.rows = map_points<std::vector<double>>(points, jobs, cfg, [&](const Point& p) {
    const FidelityReport r = evaluate(p);
    return std::vector<double>{p.value, r.fidelity, r.norm_drift, double(r.steps), r.omega_over_j,
                               r.drive_over_j};
  });
  return {table_output("fidelity", t, fmt)};
}

}  // namespace

CouplingModel resolved_model(const RunConfig& config) {
  CouplingModel m = config.model;
  m.validate();
  if (config.target_dimerization) m.eta = eta_for_dimerization(m, *config.target_dimerization);
  return m;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::resource: return 4;
    default: return 3;
  }
}

int resolve_jobs(int requested) {
  if (const char* env = std::getenv("SSH_ION_LAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) fail(ErrorKind::config, "SSH_ION_LAB_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  if (requested < 1) fail(ErrorKind::config, "--jobs must be positive");
  return requested;
}

RunResult run_experiment(const RunConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const OutputFormat fmt = options.format.value_or(config.format);
  const std::filesystem::path dir = options.output_dir.value_or(config.output_dir);
  const int jobs = std::max(1, options.jobs);

  std::vector<Output> outputs;
  switch (config.experiment) {
    case Experiment::couplings: outputs = run_couplings(config, jobs, fmt); break;
    case Experiment::spectrum: outputs = run_spectrum(config, jobs, fmt); break;
    case Experiment::edge: outputs = run_edge(config, jobs, fmt); break;
    case Experiment::zak: outputs = run_zak(config, jobs, fmt); break;
    case Experiment::locsweep: outputs = run_locsweep(config, jobs, fmt); break;
    case Experiment::survival: outputs = run_survival(config, jobs, fmt); break;
    case Experiment::groundstate: outputs = run_groundstate(config, jobs, fmt); break;
    case Experiment::hartreefock: outputs = run_hartreefock(config, jobs, fmt); break;
    case Experiment::floquet_verify: outputs = run_floquet(config, jobs, fmt); break;
  }

  RunResult result;
  json files = json::array();
  for (const Output& o : outputs) {
    result.files.push_back(write_file(dir, o.name, o.content));
    files.push_back({{"name", o.name}, {"sha256", sha256_hex(o.content)}, {"bytes", o.content.size()}});
    if (!options.quiet) std::cout << "wrote " << (dir / o.name).string() << "\n";
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"experiment", std::string(to_string(config.experiment))},
                   {"config_hash", sha256_hex(config.canonical())},
                   {"config", config.canonical()},
                   {"seed", config.seed},
                   {"version", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"boost", BOOST_LIB_VERSION},
                   {"jobs", jobs},
                   {"wall_time_s", result.wall_seconds},
                   {"files", files}};
  result.files.push_back(write_file(dir, "manifest.json", manifest.dump(2) + "\n"));
  if (!options.quiet) std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
  return result;
}

}  // namespace sshion
