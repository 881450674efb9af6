#include "sshion/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <openssl/evp.h>
#include <sstream>

#include "sshion/errors.hpp"

namespace sshion {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string Table::to_csv() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json Table::to_json() const {
  nlohmann::json j;
  j["columns"] = columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    j["rows"].push_back(r);
  }
  if (!comments.empty()) j["comments"] = comments;
  return j;
}

std::string coupling_matrix_csv(const CouplingModel& model, const CouplingMatrix& matrix) {
  std::string out = "# N=" + std::to_string(matrix.n_sites()) + " phi=" + format_number(model.phi) +
                    " eta=" + format_number(model.eta) + "\n";
  const int n = matrix.n_sites();
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (l) out += ',';
      out += format_number(matrix.entries(j, l));
    }
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::numerical, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::resource, "cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / name;
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) fail(ErrorKind::resource, "cannot write " + path.string());
  return path;
}

}  // namespace sshion
