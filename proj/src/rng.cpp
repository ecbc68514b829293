//! \file rng.cpp
//! \brief threefry2x64-20 block function and stream wrapper.

#include "sda/rng.hpp"

#include <cmath>

namespace sda {

namespace {

constexpr std::uint64_t kParity = 0x1BD11BDAA9FC1A22ULL;
// Rotation schedule for the 2x64 variant.
constexpr int kRot[8] = {16, 42, 12, 31, 16, 32, 24, 21};

inline std::uint64_t rotl(std::uint64_t x, int r) {
  return (x << r) | (x >> (64 - r));
}

}  // namespace

std::array<std::uint64_t, 2> threefry2x64(
    const std::array<std::uint64_t, 2>& counter,
    const std::array<std::uint64_t, 2>& key) {
  const std::uint64_t ks[3] = {key[0], key[1], kParity ^ key[0] ^ key[1]};
  std::uint64_t x0 = counter[0] + ks[0];
  std::uint64_t x1 = counter[1] + ks[1];
  for (int round = 0; round < 20; ++round) {
    x0 += x1;
    x1 = rotl(x1, kRot[round % 8]);
    x1 ^= x0;
    if (round % 4 == 3) {
      const int inject = round / 4 + 1;
      x0 += ks[inject % 3];
      x1 += ks[(inject + 1) % 3] + static_cast<std::uint64_t>(inject);
    }
  }
  return {x0, x1};
}

std::uint64_t CounterRng::next_u64() {
  if (buffered_ == 0) {
    buffer_ = threefry2x64({block_++, 0}, key_);
    buffered_ = 2;
  }
  return buffer_[--buffered_];
}

double CounterRng::next_double() {
  // Top 53 bits -> [0, 1) on the canonical dyadic grid.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0, 1] x [0, 1) uniforms; u is kept away from zero so the
  // log is finite.
  double u = 0.0;
  do {
    u = 1.0 - next_double();
  } while (u <= 0.0);
  const double v = next_double();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double theta = 2.0 * M_PI * v;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace sda
