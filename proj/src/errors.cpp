#include "sshion/errors.hpp"

namespace sshion {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::gapless: return "gapless";
    case ErrorKind::fit: return "fit";
    case ErrorKind::resource: return "resource";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace sshion
