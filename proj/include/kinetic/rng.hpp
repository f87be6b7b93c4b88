// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Philox4x32-10 counter-based generator. A stream is addressed by
// (seed, stream id), so every particle owns an independent sequence and
// results do not depend on how particles are distributed over threads.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace kinetic {

class Philox4x32 {
  public:
    using ctr_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static ctr_type block(ctr_type ctr, key_type key)
    {
        for (int round = 0; round < 10; ++round) {
            ctr = round_fn(ctr, key);
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

  private:
    static ctr_type round_fn(const ctr_type& c, const key_type& k)
    {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Sequential draws from one Philox stream. Satisfies
/// UniformRandomBitGenerator.
class RngStream {
  public:
    using result_type = std::uint32_t;

    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)}
        , stream_(stream)
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xFFFFFFFFu; }

    result_type operator()()
    {
        if (pos_ == 4) {
            Philox4x32::ctr_type ctr{static_cast<std::uint32_t>(stream_),
                                     static_cast<std::uint32_t>(stream_ >> 32),
                                     static_cast<std::uint32_t>(block_),
                                     static_cast<std::uint32_t>(block_ >> 32)};
            buf_ = Philox4x32::block(ctr, key_);
            ++block_;
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform()
    {
        const std::uint64_t hi = (*this)() >> 5;  // 27 bits
        const std::uint64_t lo = (*this)() >> 6;  // 26 bits
        const std::uint64_t bits = (hi << 26) | lo;
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    /// Standard normal by the Box-Muller transform.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2 * std::log(uniform()));
        const double phi = 2 * std::numbers::pi * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    /// Exponential with the given rate.
    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    Philox4x32::key_type key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32::ctr_type buf_{};
    int pos_ = 4;
    double spare_ = 0;
    bool has_spare_ = false;
};

}  // namespace kinetic
