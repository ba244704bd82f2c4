#include "tsaw/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace tsaw {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

inline void philox_round(Philox4x32::Block& c, const Philox4x32::Key& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

Philox4x32::Block Philox4x32::bijection(Block ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        philox_round(ctr, key);
    }
    return ctr;
}

void Philox4x32::refill() {
    Block ctr{std::uint32_t(block_), std::uint32_t(block_ >> 32), std::uint32_t(stream_),
              std::uint32_t(stream_ >> 32)};
    Key key{std::uint32_t(seed_), std::uint32_t(seed_ >> 32)};
    Block r = bijection(ctr, key);
    ++block_;
    out_[0] = (std::uint64_t(r[1]) << 32) | r[0];
    out_[1] = (std::uint64_t(r[3]) << 32) | r[2];
    have_ = 2;
}

double standard_normal(Philox4x32& g) {
    boost::random::normal_distribution<double> nd;
    return nd(g);
}

}  // namespace tsaw
