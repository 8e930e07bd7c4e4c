#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ouprem {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto lo0 = static_cast<std::uint32_t>(p0);
            auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Random stream for one (seed, path, purpose) triple.
///
/// key = seed, counter = (block index, purpose, path low, path high). Streams
/// for different paths never overlap, so results do not depend on how paths
/// are distributed over workers.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path, std::uint32_t purpose)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          purpose_(purpose),
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(path >> 32)) {}

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() {
        if (pos_ == 2) refill();
        const std::uint32_t a = buf_[2 * pos_] >> 5;
        const std::uint32_t b = buf_[2 * pos_ + 1] >> 6;
        ++pos_;
        return (a * 67108864.0 + b + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal by Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    /// Exp(rate).
    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    void refill() {
        buf_ = Philox4x32::block({block_, purpose_, path_lo_, path_hi_}, key_);
        ++block_;
        pos_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t purpose_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint32_t block_ = 0;
    Philox4x32::Counter buf_{};
    int pos_ = 2;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ouprem
