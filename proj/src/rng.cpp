#include "collapse_oracle/rng.hpp"

#include <cmath>
#include <numbers>

namespace collapse_oracle {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

// One 128-bit Philox4x32-10 block: counter = (c0,c1,c2,c3), key = (k0,k1).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

// SplitMix64 finalizer; used only to derive child stream ids.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() noexcept {
    if (buffered_ == 0) {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
            static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        const std::array<std::uint32_t, 4> out = philox4x32_10(ctr, key);
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        buffered_ = 2;
        ++block_;
    }
    return buffer_[--buffered_];
}

double RngStream::next_gaussian() noexcept {
    if (has_gauss_) {
        has_gauss_ = false;
        return gauss_cache_;
    }
    const double u1 = next_double_pos();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    gauss_cache_ = r * std::sin(theta);
    has_gauss_ = true;
    return r * std::cos(theta);
}

RngStream RngStream::substream(std::uint64_t index) const noexcept {
    return RngStream(seed_, mix64(stream_ + 0x632BE59BD9B4E019ull) ^ mix64(index));
}

}  // namespace collapse_oracle
