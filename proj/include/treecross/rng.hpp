#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace treecross {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for worker `worker` of a run seeded with `master`:
/// splitmix64(master ^ splitmix64(worker + 1)). Worker 0 of a single-threaded
/// run therefore does not reuse the master seed verbatim.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t worker);

/// Deterministic 64-bit generator. One instance per worker; never shared.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_worker(std::uint64_t master, std::uint64_t worker) {
    return Rng(derive_seed(master, worker));
  }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Fills `out` with independent uniform integers in [lo, hi]; hi - lo must
  /// fit in 32 bits. Engine outputs are cut into 16-bit words (ranges up to
  /// 4096) or 32-bit words, mapped by Lemire's multiply-shift with rejection,
  /// so the result is exactly uniform.
  void fill_uniform(std::span<int> out, int lo, int hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace treecross
