// random.hpp: counter-based random streams.
//
// Every draw is a pure function of (master seed, trial, lane, block counter):
//
//   key     = master seed (two 32-bit words)
//   counter = (trial lo, trial hi, lane, block)
//
// pushed through Philox4x32-10. Trials can therefore be evaluated in any order
// on any number of threads and still reproduce bit-for-bit.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace supoly {

/// Identifier written into output metadata.
inline constexpr std::string_view kGeneratorName = "philox4x32-10";

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon, Moraes, Dror, Shaw; SC'11).
inline Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) noexcept {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

/// Reserved lane ranges. Coefficient lanes are the coefficient position.
namespace lanes {
inline constexpr std::uint32_t kCoefficientBase = 0x00000000u;
inline constexpr std::uint32_t kAuxiliaryBase = 0x80000000u;
}  // namespace lanes

/**
 * One independent sequence of draws identified by (seed, trial, lane).
 *
 * Copying a Stream copies its position. `substream` derives a new lane
 * deterministically so nested operations never share draws.
 */
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t trial, std::uint32_t lane = lanes::kAuxiliaryBase)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          trial_(trial),
          lane_(lane) {}

    std::uint64_t seed() const noexcept { return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0]; }
    std::uint64_t trial() const noexcept { return trial_; }
    std::uint32_t lane() const noexcept { return lane_; }
    std::uint32_t position() const noexcept { return block_; }

    /// A stream on a different lane of the same (seed, trial).
    Stream substream(std::uint32_t tag) const {
        // splitmix-style finalizer over (lane, tag), forced into the auxiliary range
        std::uint64_t x = (static_cast<std::uint64_t>(lane_) << 32) ^ tag ^ 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        x ^= x >> 31;
        return Stream(seed(), trial_, static_cast<std::uint32_t>(x) | lanes::kAuxiliaryBase);
    }

    /// Next 128-bit block as two 64-bit words.
    std::array<std::uint64_t, 2> next_block() noexcept {
        const Philox4x32Counter out = philox4x32_10(
            {static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32), lane_, block_++},
            key_);
        return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
                (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
    }

    /// Uniform in the open interval (0, 1).
    static double to_open_unit(std::uint64_t bits) noexcept {
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    }

    double uniform() noexcept { return to_open_unit(next_block()[0]); }

    /// Standard complex Gaussian: E[z] = 0, E|z|^2 = 1, so |z|^2 ~ Exp(1).
    std::complex<double> complex_gaussian() noexcept {
        const auto b = next_block();
        const double radius = std::sqrt(-std::log(to_open_unit(b[0])));
        const double angle = 2.0 * std::numbers::pi * to_open_unit(b[1]);
        return std::polar(radius, angle);
    }

    /// Uniform point on the sphere |z| = radius in C^m (normalized Gaussian vector).
    void sphere_point(double radius, std::span<std::complex<double>> out) noexcept {
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (auto& c : out) {
                c = complex_gaussian();
                norm_sq += std::norm(c);
            }
        } while (!(norm_sq > 0.0));
        const double scale = radius / std::sqrt(norm_sq);
        for (auto& c : out) c *= scale;
    }

    std::vector<std::complex<double>> sphere_point(int m, double radius) {
        std::vector<std::complex<double>> z(static_cast<std::size_t>(m));
        sphere_point(radius, z);
        return z;
    }

private:
    Philox4x32Key key_;
    std::uint64_t trial_;
    std::uint32_t lane_;
    std::uint32_t block_ = 0;
};

}  // namespace supoly
