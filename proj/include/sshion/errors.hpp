#pragma once

#include <stdexcept>
#include <string>

namespace sshion {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  domain,          // invalid argument for an operation (j == l, phi out of range, ...)
  unsupported,     // configuration the model does not cover (kd != pi/2)
  degenerate,      // ill-defined ratio or perturbative denominator
  numerical,       // solver non-convergence, truncation failure, norm drift
  gapless,         // quantity undefined because a spectral gap closed
  fit,             // not enough data for a fit
  resource,        // problem too large for dense methods
  config,          // malformed run configuration
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace sshion
