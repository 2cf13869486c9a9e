#pragma once

#include <array>
#include <cstdint>

namespace plevt {

// (master_seed, stream_id) fully determines a random stream. Replication i of
// an experiment runs on stream_id = i.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// Philox4x32-10 counter-based block function (Salmon et al., Random123).
// Counter and key are plain values; no state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

// Sequential stream over Philox blocks. The key is the master seed, the upper
// half of the counter is the stream id and the lower half is the block index,
// so distinct stream ids never share a block.
class StreamRng {
 public:
  explicit StreamRng(SeedSpec seed) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on (0, 1]; never returns 0.
  double uniform_open_closed() noexcept;
  // Uniform on (0, 1); never returns 0 or 1.
  double uniform_open() noexcept;
  // Exponential with the given rate via -log(U), U in (0, 1].
  double exponential(double rate) noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

// Stateless 64-bit mixer used to derive re-run seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace plevt
