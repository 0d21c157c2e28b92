#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ep {

// Error taxonomy. The CLI maps these onto exit codes (config=2, data=3,
// numeric=4); library code throws and never exits.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Global worker count for parallel_for. 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunk boundaries
// depend only on n, so any floating-point reduction done per chunk and
// merged in chunk order gives identical results for every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t chunk = 2048);

// Pairwise summation; order-insensitive enough for metric reductions.
double pairwise_sum(const std::vector<double>& xs);

double sample_sd(const std::vector<double>& xs);

// FNV-1a, used for config/data manifests.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a(const std::string& s);

std::string to_hex(std::uint64_t v);

// Minimal stderr logging with a severity prefix, rate-unlimited.
void log_info(const std::string& msg);
void log_warn(const std::string& msg);

// Emits the warning once per distinct key for the process lifetime.
void warn_once(const std::string& key, const std::string& msg);

}  // namespace ep
