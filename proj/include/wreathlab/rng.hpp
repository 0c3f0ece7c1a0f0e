#pragma once

// Philox4x32-10 counter-based generator. A stream is addressed by
// (master seed, stream index); draws are a pure function of that pair and
// the position in the stream, so paths can be produced in any order.

#include <array>
#include <cstdint>

namespace wreathlab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on {0, ..., n-1}, unbiased; n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace wreathlab
