#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace midec {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream addressed by (seed, stream id, step).
///
/// The Philox key is the 64-bit seed; the 128-bit counter is
/// (block, step, stream_lo, stream_hi). Every draw is therefore a pure
/// function of (seed, stream, step, position within step), independent of
/// which thread runs the stream or in what order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t step = 0);

  /// Rewinds to the start of the sub-stream for `step`.
  void set_step(std::uint32_t step);
  std::uint32_t step() const noexcept { return step_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  void fill_normal(std::span<double> out);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint32_t step_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace midec
