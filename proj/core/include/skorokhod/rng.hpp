// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace skorokhod {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter c, Key k) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        }
        return c;
    }
};

/// Random stream for one (seed, stream) pair. The stream index goes into the
/// upper half of the counter, so streams never overlap.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) {
            block_ = Philox4x32::generate({static_cast<std::uint32_t>(counter_),
                                           static_cast<std::uint32_t>(counter_ >> 32), stream_lo_, stream_hi_},
                                          key_);
            ++counter_;
            pos_ = 0;
        }
        return block_[pos_++];
    }

    /// uniform on the open interval (0, 1), 53 random bits
    double uniform() noexcept {
        const std::uint64_t a = next_u32();
        const std::uint64_t b = next_u32();
        const std::uint64_t bits = ((a << 32) | b) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    /// standard normal by Box-Muller; the second variate is cached
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t counter_ = 0;
    Philox4x32::Counter block_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace skorokhod
