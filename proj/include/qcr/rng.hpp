#pragma once

// Counter-based random streams.  Every variate is a pure hash of
// (seed, stream, slot), so sampling commutes with any partitioning of the
// work across threads: results depend only on the indices, never on the
// execution order.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace qcr {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t raw(std::uint64_t stream, std::uint64_t slot) const {
    std::uint64_t z = seed_;
    z = finalize(z + 0x9E3779B97F4A7C15ULL * (stream + 1));
    z = finalize(z + 0x9E3779B97F4A7C15ULL * (slot + 1));
    return z;
  }

  /// Uniform in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t slot) const {
    return static_cast<double>(raw(stream, slot) >> 11) * 0x1.0p-53;
  }

  /// Standard normal pair (Box-Muller); consumes slots slot and slot+1.
  void normal_pair(std::uint64_t stream, std::uint64_t slot, double& z0, double& z1) const {
    const double u1 = static_cast<double>((raw(stream, slot) >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform(stream, slot + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * std::numbers::pi * u2);
    z1 = r * std::sin(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
};

/// Worker count for data-parallel loops; QCR_WORKERS overrides the hardware
/// default.  The numerical results never depend on this value.
inline int worker_count() {
  if (const char* env = std::getenv("QCR_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v > 64 ? 64 : v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  if (hc == 0) return 1;
  return hc > 16 ? 16 : static_cast<int>(hc);
}

/// Runs body(chunk) for chunk = 0..n_chunks-1 on worker_count() threads.
/// Bodies must write only to per-chunk slots; the caller combines them in
/// chunk order, which keeps floating-point reductions bit-identical for any
/// worker count.
template <class Body>
void parallel_chunks(long n_chunks, Body&& body) {
  const int workers = worker_count();
  if (workers <= 1 || n_chunks <= 1) {
    for (long c = 0; c < n_chunks; ++c) body(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &body] {
      for (long c = w; c < n_chunks; c += workers) body(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qcr
