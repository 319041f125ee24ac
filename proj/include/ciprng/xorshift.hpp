#pragma once

#include <chrono>
#include <cstdint>

#include "ciprng/bitcore.hpp"

namespace ciprng {

// Fallback when a time-derived seed lands on the forbidden zero state.
inline constexpr std::uint32_t kZeroSeedFallback = 0x9E3779B9u;

/// Marsaglia's 32-bit XORshift with the (13,17,5) shift triple. The state
/// is a plain value; zero is excluded (it is a fixed point of the map).
struct XorshiftState {
  std::uint32_t z;

  explicit XorshiftState(std::uint32_t seed) : z(seed) {
    require(seed != 0, "XorshiftState: zero seed is an absorbing state");
  }
};

struct XorshiftStep {
  std::uint32_t value;
  XorshiftState state;
};

/// One round: z ^= z<<13; z ^= z>>17; z ^= z<<5 (mod 2^32). The new state
/// is also the output word; it is never zero for nonzero input.
inline XorshiftStep next(XorshiftState state) {
  std::uint32_t z = state.z;
  z ^= z << 13;
  z ^= z >> 17;
  z ^= z << 5;
  return {z, XorshiftState(z)};
}

/// Nonzero state derived from the sub-second fraction of the wall clock
/// (microseconds), e.g. clock time ....484088 seeds 484088.
inline XorshiftState seed_from_time() {
  using namespace std::chrono;
  auto now = system_clock::now().time_since_epoch();
  auto micros = duration_cast<microseconds>(now).count() % 1000000;
  std::uint32_t z = static_cast<std::uint32_t>(micros);
  if (z == 0) z = kZeroSeedFallback;
  return XorshiftState(z);
}

/// Convenience mutable wrapper. Single-owner; distinct instances with
/// distinct seeds are independent streams.
class Xorshift32 {
 public:
  explicit Xorshift32(std::uint32_t seed) : state_(seed) {}
  explicit Xorshift32(XorshiftState state) : state_(state) {}

  std::uint32_t operator()() {
    auto step = ciprng::next(state_);
    state_ = step.state;
    return step.value;
  }

  XorshiftState state() const { return state_; }

 private:
  XorshiftState state_;
};

}  // namespace ciprng
