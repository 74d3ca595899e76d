#pragma once

#include <chrono>
#include <cstdint>

namespace expeng {

/// Peak resident set size of the current process in bytes (VmHWM on Linux),
/// or 0 when unavailable.
std::int64_t peak_rss_bytes();

/// Wall-clock stopwatch.
class Stopwatch {
 public:
  Stopwatch() : start_(clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

struct Telemetry {
  double wall_seconds = 0.0;
  std::int64_t peak_rss = 0;
};

}  // namespace expeng
