#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levycollapse {

/*
 * Philox4x32-10 counter-based generator.
 *
 * State is a 128-bit counter plus a 64-bit key; each keyed block is an
 * independent bijection of the counter, so streams indexed by the high
 * counter words never overlap as long as a single stream consumes fewer
 * than 2^64 blocks. Ensemble code derives the per-path stream from
 * (master seed, path index), which makes path results independent of
 * evaluation order and parallelism degree.
 */
class PhiloxRng {
public:
  using result_type = std::uint64_t;

  explicit PhiloxRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 0) fill_block();
    const std::uint32_t lo = block_[pos_ - 1];
    const std::uint32_t hi = block_[pos_ - 2];
    pos_ -= 2;
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  void fill_block() noexcept {
    std::array<std::uint32_t, 4> x = ctr_;
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
      x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k0,
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k1,
           static_cast<std::uint32_t>(p0)};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    block_ = x;
    pos_ = 4;
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 0;
};

// Stream for path r of an ensemble keyed by the master seed.
inline PhiloxRng path_rng(std::uint64_t master_seed, std::uint64_t path_index) {
  return PhiloxRng(master_seed, path_index);
}

}  // namespace levycollapse
