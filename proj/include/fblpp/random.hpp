#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fblpp {

// Identifies one reproducible random stream.  Identical (master_seed,
// stream_id) pairs produce identical sequences regardless of how work is
// scheduled across threads.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

namespace detail {

// Philox 4x32-10 block function (Salmon et al., SC 2011).
inline void philox4x32(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kWeylA = 0x9E3779B9u, kWeylB = 0xBB67AE85u;
  constexpr std::uint32_t kMulA = 0xD2511F53u, kMulB = 0xCD9E8D57u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
}

}  // namespace detail

// Counter-based random stream: the block index is an explicit 64-bit counter,
// so a stream's output is a pure function of (seed, stream, position).
class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed) : seed_(seed) {}

  // Uniform double in [0, 1), 53 random bits.
  double next_uniform() {
    if (pending_ >= 2) refill();
    const std::uint64_t hi = buffer_[2 * pending_];
    const std::uint64_t lo = buffer_[2 * pending_ + 1];
    ++pending_;
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  // Unit-mean exponential.
  double next_exponential() { return -std::log1p(-next_uniform()); }

  // Exact Poisson draw by CDF inversion; large means are split into
  // independent Poisson(<=500) pieces so exp(-mean) never underflows.
  long next_poisson(double mean) {
    long total = 0;
    while (mean > 500.0) {
      total += poisson_inversion(500.0);
      mean -= 500.0;
    }
    return total + poisson_inversion(mean);
  }

  SeedSpec seed() const { return seed_; }

 private:
  void refill() {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(seed_.stream_id),
        static_cast<std::uint32_t>(seed_.stream_id >> 32)};
    detail::philox4x32(ctr, {static_cast<std::uint32_t>(seed_.master_seed),
                             static_cast<std::uint32_t>(seed_.master_seed >> 32)});
    buffer_ = ctr;
    ++block_;
    pending_ = 0;
  }

  long poisson_inversion(double mean) {
    if (mean <= 0.0) return 0;
    const double u = next_uniform();
    double p = std::exp(-mean);
    double cum = p;
    long k = 0;
    const long cap = static_cast<long>(mean + 60.0 * std::sqrt(mean + 1.0) + 10.0);
    while (u > cum && k < cap) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
    }
    return k;
  }

  SeedSpec seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pending_ = 2;  // force refill on first use
};

}  // namespace fblpp
