#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace tsaw {

// Philox4x32-10 counter-based generator.
//
// The 128-bit counter is split as (block lo, block hi, stream lo, stream hi),
// so every (seed, stream) pair addresses an independent sequence of 2^64
// blocks. Each block yields two 64-bit outputs.
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (have_ == 0) refill();
        --have_;
        return out_[have_ == 1 ? 0 : 1];
    }

    // Raw bijection, exposed for known-answer tests.
    static Block bijection(Block ctr, Key key);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t blocks_used() const { return block_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> out_{};
    int have_ = 0;
};

// Stream id for replica r and lane (sub-purpose) within it.
constexpr std::uint64_t stream_id(std::uint64_t replica, std::uint32_t lane = 0) {
    return (replica << 8) | (lane & 0xffu);
}

// 53-bit uniform on [0,1).
template <class G>
inline double uniform01(G& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform on (0,1), safe for logarithms.
template <class G>
inline double uniform_open(G& g) {
    return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

template <class G>
inline double exponential1(G& g) {
    return -std::log(uniform_open(g));
}

// Standard normal; Boost ziggurat behind a small wrapper so every caller
// consumes the generator in the same way.
double standard_normal(Philox4x32& g);

}  // namespace tsaw
