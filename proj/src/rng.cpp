#include "treecross/rng.hpp"

namespace treecross {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t worker) {
  return splitmix64(master ^ splitmix64(worker + 1));
}

namespace {

// Lemire's multiply-shift on `Bits`-bit words cut from 64-bit engine outputs.
// Exact for any range <= 2^Bits; the rejection rate is below range / 2^Bits.
template <unsigned Bits>
void fill_lemire(std::mt19937_64& engine, std::span<int> out, int lo, std::uint32_t range) {
  constexpr std::uint64_t mask = (std::uint64_t{1} << Bits) - 1;
  constexpr unsigned per_output = 64 / Bits;
  const std::uint64_t threshold = ((std::uint64_t{1} << Bits) - range) % range;
  std::uint64_t buffered = 0;
  unsigned left = 0;
  auto word = [&]() -> std::uint64_t {
    if (left == 0) {
      buffered = engine();
      left = per_output;
    }
    const std::uint64_t w = buffered & mask;
    buffered >>= Bits;
    --left;
    return w;
  };
  for (int& slot : out) {
    std::uint64_t m = word() * range;
    while ((m & mask) < threshold) m = word() * range;
    slot = lo + static_cast<int>(m >> Bits);
  }
}

}  // namespace

void Rng::fill_uniform(std::span<int> out, int lo, int hi) {
  const auto range = static_cast<std::uint32_t>(static_cast<std::int64_t>(hi) - lo + 1);
  if (range <= 4096)
    fill_lemire<16>(engine_, out, lo, range);
  else
    fill_lemire<32>(engine_, out, lo, range);
}

}  // namespace treecross
