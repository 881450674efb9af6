#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sshion/config.hpp"
#include "sshion/errors.hpp"

namespace sshion {

struct RunOptions {
  int jobs = 1;
  std::optional<std::string> output_dir;  // overrides the config
  std::optional<OutputFormat> format;
  bool quiet = true;
};

struct RunResult {
  std::vector<std::filesystem::path> files;  // manifest last
  double wall_seconds = 0.0;
};

/// Runs one experiment and writes its data files plus manifest.json.
RunResult run_experiment(const RunConfig& config, const RunOptions& options = {});

/// Process exit status for a failure class: 2 config, 4 resource, 3 otherwise.
int exit_code(ErrorKind kind) noexcept;

/// Worker count from --jobs, overridden by SSH_ION_LAB_THREADS when set.
int resolve_jobs(int requested);

/// Evaluates task(i) for i in [0, count) on `jobs` threads and returns the
/// results in index order. The first exception is rethrown after all workers stop.
template <class R>
std::vector<R> parallel_map(std::size_t count, int jobs, const std::function<R(std::size_t)>& task);

/// Model with eta resolved from the target dimerization, if any.
CouplingModel resolved_model(const RunConfig& config);

}  // namespace sshion

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace sshion {

template <class R>
std::vector<R> parallel_map(std::size_t count, int jobs, const std::function<R(std::size_t)>& task) {
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      try {
        slots[i].emplace(task(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace sshion
