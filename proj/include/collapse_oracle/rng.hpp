#pragma once

#include <array>
#include <cstdint>

namespace collapse_oracle {

/// Counter-based random stream built on Philox4x32-10 (Salmon et al.,
/// "Parallel random numbers: as easy as 1, 2, 3").
///
/// A stream is identified by (seed, stream_id); the generator is a pure
/// function of (seed, stream_id, block counter), so streams can be handed to
/// parallel workers and replayed exactly. `substream(i)` derives the i-th
/// child stream deterministically without advancing the parent; `split()`
/// derives a fresh child and advances an internal split counter, for callers
/// that need a sequence of independent streams.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1), 53 random bits.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe under log().
    double next_double_pos() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; generates in pairs and caches one.
    double next_gaussian() noexcept;

    /// Child stream #index; pure, does not advance this stream.
    RngStream substream(std::uint64_t index) const noexcept;

    /// Next child stream in sequence; advances the split counter only.
    RngStream split() noexcept { return substream(kSplitBase + split_counter_++); }

  private:
    static constexpr std::uint64_t kSplitBase = 1ull << 62;

    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::uint64_t split_counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double gauss_cache_ = 0.0;
    bool has_gauss_ = false;
};

}  // namespace collapse_oracle
