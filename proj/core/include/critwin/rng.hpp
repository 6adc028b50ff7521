#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace critwin {

/// Deterministic counter-based stream (Philox4x32-10) keyed by a hash of
/// (seed, replicate, label). Single owner; never share one across threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t replicate, std::string_view label);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1); safe to take the log of.
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Uniform integer on [0, bound); bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Independent child stream; depends only on this stream's key and label,
  /// not on how many values have been drawn.
  [[nodiscard]] RngStream fork(std::string_view label) const;

  [[nodiscard]] std::uint64_t key() const { return key_; }

 private:
  explicit RngStream(std::uint64_t key);
  void refill();

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int next_word_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

RngStream make_stream(std::uint64_t seed, std::uint64_t replicate, std::string_view label);

/// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace critwin
