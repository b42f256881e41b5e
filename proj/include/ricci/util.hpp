#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ricci {

/// Runs fn(i) for i in [0, count). With threads <= 1 this is a plain loop.
/// Each index writes only its own output slot, so results do not depend on
/// the thread count; reductions happen afterwards in index order.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn);

/// Quantile of a sample by linear interpolation on the sorted values
/// (q in [0,1]); the input is copied and sorted.
double quantile(std::vector<double> values, double q);

struct Stats {
  double mean = 0, stddev = 0, min = 0, max = 0, q25 = 0, median = 0, q75 = 0;
  int count = 0;
};
Stats summarize(const std::vector<double>& values);

/// FNV-1a, used to fingerprint input files in run manifests.
std::uint64_t fnv1a(const void* data, std::size_t size);
std::string fnv1a_hex_of_file(const std::string& path);

class WallTimer {
 public:
  WallTimer() : start_(clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

std::string version_string();

}  // namespace ricci
