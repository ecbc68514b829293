//! \file rng.hpp
//! \brief Counter-based random number generation (threefry2x64-20) with
//!        per-replicate substreams for order-independent reproducibility.

#ifndef SDA_RNG_HPP
#define SDA_RNG_HPP

#include <array>
#include <cstdint>

namespace sda {

//! One 20-round threefry2x64 block: encrypts the 128-bit counter under the
//! 128-bit key. Deterministic, invertible, and statistically uniform; the
//! standard known-answer vectors are pinned in the test suite.
std::array<std::uint64_t, 2> threefry2x64(
    const std::array<std::uint64_t, 2>& counter,
    const std::array<std::uint64_t, 2>& key);

//! A keyed random stream. The key is (seed, stream); the counter is
//! (block index, 0). Distinct streams with the same seed are independent, so
//! replicate r of a simulation can use stream r and produce identical draws
//! regardless of scheduling order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{seed, stream} {}

  std::uint64_t next_u64();

  //! Uniform double in [0, 1) with 53 random bits.
  double next_double();

  //! Standard normal deviate (Box-Muller; caches the second value).
  double next_gaussian();

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;       // unconsumed words in buffer_
  double spare_ = 0.0;     // cached second Box-Muller deviate
  bool has_spare_ = false;
};

}  // namespace sda

#endif  // SDA_RNG_HPP
