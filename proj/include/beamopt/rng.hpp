// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams. Every draw in the simulator is a pure
// function of (master seed, iteration, UE index, purpose, candidate, block),
// so results do not depend on worker count or evaluation order.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "beamopt/units.hpp"

namespace beamopt {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless: maps a
/// 128-bit counter and a 64-bit key to 128 random bits.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter generate(Counter ctr, Key key, int rounds = 10)
    {
        for (int r = 0; r < rounds; ++r) {
            if (r > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// What a stream is used for. Distinct purposes never share counters.
enum class StreamPurpose : std::uint32_t {
    Position = 0,
    Fading = 1,
    Shadowing = 2,
    OffsetSample = 3,
};

/// Identifies one independent substream.
struct StreamId {
    std::uint64_t iteration = 0;
    std::uint32_t ue = 0;
    StreamPurpose purpose = StreamPurpose::Position;
    /// Candidate array size for per-candidate draws; 0 otherwise.
    std::uint32_t candidate = 0;
};

/// Sequential reader over one substream. Cheap to construct; holds no
/// shared state.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, StreamId id)
        : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
          id_(id)
    {
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; never returns 0, so log() and sqrt-inverse-CDF
    /// draws stay away from the origin.
    double uniform_open0() { return static_cast<double>((next64() >> 11) + 1) * 0x1.0p-53; }

    /// Unit-mean exponential, i.e. |h|^2 for h ~ CN(0, 1).
    double exponential() { return -std::log(uniform_open0()); }

    /// Standard normal via Box-Muller (one value per two uniforms).
    double normal()
    {
        const double u1 = uniform_open0();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    /// Blocks per stream; each block yields two 64-bit draws.
    static constexpr std::uint32_t kMaxBlocks = 1u << 20;

    std::uint64_t next64()
    {
        if (cursor_ == 4) {
            refill();
        }
        const std::uint64_t lo = buffer_[cursor_];
        const std::uint64_t hi = buffer_[cursor_ + 1];
        cursor_ += 2;
        return (hi << 32) | lo;
    }

private:
    void refill()
    {
        if (block_ >= kMaxBlocks) {
            throw std::length_error("RandomStream: substream exhausted");
        }
        const Philox4x32::Counter ctr{
            static_cast<std::uint32_t>(id_.iteration),
            static_cast<std::uint32_t>(id_.iteration >> 32),
            id_.ue,
            (static_cast<std::uint32_t>(id_.purpose) << 28) | ((id_.candidate & 0xFFu) << 20) | block_,
        };
        buffer_ = Philox4x32::generate(ctr, key_);
        ++block_;
        cursor_ = 0;
    }

    Philox4x32::Key key_;
    StreamId id_;
    std::uint32_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int cursor_ = 4;
};

}  // namespace beamopt
