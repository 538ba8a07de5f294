#pragma once

#include <array>
#include <cstdint>

namespace ivol {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
// Pure integer function of (counter, key): bit-stable across platforms and
// trivially parallel — consumers derive per-row streams from row indices.
// Verified against the published known-answer vectors in the test suite.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block block(const Block& counter, std::uint32_t key0, std::uint32_t key1) {
    Block c = counter;
    std::uint32_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
      c = one_round(c, k0, k1);
      k0 += 0x9E3779B9u;  // golden-ratio increments
      k1 += 0xBB67AE85u;
    }
    return c;
  }

  // Block for (row, stream) under a 64-bit seed key.
  static Block row_block(std::uint64_t row, std::uint32_t stream, std::uint64_t seed) {
    Block ctr{static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(row >> 32),
              stream, 0u};
    return block(ctr, static_cast<std::uint32_t>(seed),
                 static_cast<std::uint32_t>(seed >> 32));
  }

  static std::uint64_t to_u64(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }

  // Uniform double in [0, 1) from the top 53 bits.
  static double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }

 private:
  static Block one_round(const Block& c, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c[2];
    return Block{static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
                 static_cast<std::uint32_t>(p0)};
  }
};

}  // namespace ivol
