#include "doctest.h"

#include <set>

#include "tsaw/rng.hpp"

using tsaw::Philox4x32;

TEST_SUITE("rng") {

TEST_CASE("philox known answers") {
    using B = Philox4x32::Block;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("first outputs come from block 0 of the stream") {
    Philox4x32 g(7, 3);
    auto b = Philox4x32::bijection({0, 0, 3, 0}, {7, 0});
    std::uint64_t a0 = g(), a1 = g();
    CHECK(a0 == ((std::uint64_t(b[1]) << 32) | b[0]));
    CHECK(a1 == ((std::uint64_t(b[3]) << 32) | b[2]));
    CHECK(g.blocks_used() == 1);
}

TEST_CASE("streams and seeds differ, copies replay") {
    Philox4x32 a(1, 0), b(1, 1), c(2, 0);
    std::set<std::uint64_t> seen{a(), b(), c()};
    CHECK(seen.size() == 3);
    Philox4x32 d(5, 9);
    d();
    Philox4x32 e = d;
    for (int i = 0; i < 10; ++i) CHECK(d() == e());
}

TEST_CASE("stream ids pack replica and lane") {
    CHECK(tsaw::stream_id(0, 0) == 0);
    CHECK(tsaw::stream_id(1, 2) == 258);
    CHECK(tsaw::stream_id(3, 0x1ff) == (3u << 8 | 0xff));
}

TEST_CASE("uniform and normal moments") {
    Philox4x32 g(11, 0);
    const int N = 400000;
    double su = 0, sn = 0, sn2 = 0;
    double umin = 1, umax = 0;
    for (int i = 0; i < N; ++i) {
        double u = tsaw::uniform01(g);
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        double z = tsaw::standard_normal(g);
        sn += z;
        sn2 += z * z;
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(su / N == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / N) < 0.01);
    CHECK(sn2 / N == doctest::Approx(1.0).epsilon(0.01));
}

}
