#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sshion/couplings.hpp"

namespace sshion {

enum class Experiment {
  couplings,
  spectrum,
  edge,
  zak,
  locsweep,
  survival,
  groundstate,
  hartreefock,
  floquet_verify,
};

std::string_view to_string(Experiment e) noexcept;
Experiment experiment_from_string(std::string_view name);

enum class OutputFormat { csv, json };

struct Sweep {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  std::vector<double> values() const;  // inclusive linear grid
};

struct RunConfig {
  Experiment experiment = Experiment::spectrum;
  CouplingModel model;
  std::optional<double> target_dimerization;  // key `delta`; overrides eta
  std::optional<Sweep> sweep;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::csv;

  int m_cells = 256;
  double omega_ratio = 50.0;  // Omega / max|J|
  double drive_ratio = 25.0;  // omega_d / max|J|
  double t_final = 3.0;       // in units of 1 / max|J|
  bool include_anomalous = true;
  bool self_consistent = false;

  /// Normalized `key = value` listing used for the config hash.
  std::string canonical() const;
};

/// Flat document of `key = value` (or `key: value`) lines; '#' starts a
/// comment. Numbers accept a trailing pi factor ("0.75pi", "3pi/4", "pi").
/// Unknown keys, bad values and out-of-range parameters throw Error(config)
/// naming the line and key.
RunConfig parse_config(std::string_view text);

/// Sets one numeric parameter by its config key (used for sweeps).
void set_parameter(RunConfig& config, std::string_view key, double value);

/// Keys accepted as sweep parameters.
bool is_sweepable(std::string_view key);

}  // namespace sshion
