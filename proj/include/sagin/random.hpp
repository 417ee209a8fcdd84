// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sagin {

// Philox4x64-10 block: 4 x 64-bit counter, 2 x 64-bit key.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr, std::array<std::uint64_t, 2> key);

// Counter-based stream keyed by (seed, stream id). Draw n of the stream depends only on
// (seed, stream, n), so any trial can be regenerated without replaying the others.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t first_block = 0)
        : key_{seed, stream}, block_(first_block) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            buf_ = philox4x64({block_++, 0, 0, 0}, key_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    // Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double normal();

private:
    std::array<std::uint64_t, 2> key_;
    std::uint64_t block_;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sagin
