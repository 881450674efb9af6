#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "sshion/couplings.hpp"

namespace sshion {

/// Round-trip formatting: 17 significant digits, '.' decimal point.
std::string format_number(double value);

/// Column-oriented numeric table written as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;  // emitted as leading "# ..." lines in CSV

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Row-major matrix with header "# N=<n> phi=<phi> eta=<eta>".
std::string coupling_matrix_csv(const CouplingModel& model, const CouplingMatrix& matrix);

std::string sha256_hex(const std::string& data);

/// Writes `content` to dir/name and returns the path; throws Error(resource)
/// on I/O failure.
std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content);

}  // namespace sshion
