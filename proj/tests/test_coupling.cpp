#include <cmath>
#include <map>

#include "doctest.h"
#include "tsaw/coupling.hpp"

using namespace tsaw;
using namespace tsaw::urn;

namespace {

const UrnSamplers& samplers() {
    static UrnSamplers s(0.5);
    return s;
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("maximal coupling has the right marginals and overlap") {
    MaximalCoupler cp(samplers().interior);
    const auto& pi = samplers().interior.stationary();
    const std::int64_t M = samplers().interior.M();
    for (std::uint64_t g : {0u, 1u, 3u}) {
        const std::int64_t R = 200000;
        std::map<std::int64_t, double> fx, fz;
        double miss = 0;
        Philox4x32 rng(11, g);
        for (std::int64_t r = 0; r < R; ++r) {
            auto [x, z] = cp.draw(g, rng);
            fx[x] += 1.0 / R;
            fz[z] += 1.0 / R;
            miss += x != z ? 1.0 / R : 0.0;
        }
        std::vector<double> row(pi.size(), 0.0);
        if (g == 0)
            row[static_cast<std::size_t>(M)] = 1.0;
        else
            row = samplers().interior.row(0, g);
        double tv = 0;
        for (std::size_t j = 0; j < pi.size(); ++j) tv += 0.5 * std::abs(row[j] - pi[j]);
        CHECK(cp.overlap(g) == doctest::Approx(1.0 - tv).epsilon(1e-12));
        CHECK(std::abs(miss - tv) < 5.0 * std::sqrt(tv * (1 - tv) / R) + 1e-9);
        for (std::int64_t v = -M; v <= M; ++v) {
            auto j = static_cast<std::size_t>(v + M);
            CHECK(std::abs(fx[v] - row[j]) < 5.0 * std::sqrt(row[j] * (1 - row[j]) / R) + 1e-9);
            CHECK(std::abs(fz[v] - pi[j]) < 5.0 * std::sqrt(pi[j] * (1 - pi[j]) / R) + 1e-9);
        }
    }
    // beyond the cache both laws are pi
    CHECK(cp.overlap(100000) == 1.0);
}

TEST_CASE("exact failure probability matches simulation") {
    MaximalCoupler cp(samplers().interior);
    for (std::int64_t b : {2, 4, 8}) {
        double defect = 1;
        const double q = coupling_failure_probability(samplers().interior, b, 0.5, &defect);
        CHECK(defect < 1e-12);
        const std::int64_t R = 100000;
        double hits = 0;
        for (std::int64_t r = 0; r < R; ++r) {
            Philox4x32 g(5, stream_id(static_cast<std::uint64_t>(r), static_cast<std::uint32_t>(b)));
            hits += pair_coupling_experiment(cp, b, 0.5, g).gamma_beyond ? 0.0 : 1.0;
        }
        const double p = hits / R;
        CHECK(std::abs(p - q) < 5.0 * std::sqrt(q * (1 - q) / R) + 1e-4);
    }
}

TEST_CASE("failure probability shrinks with b") {
    double prev = 1.0;
    for (std::int64_t b : {10, 20, 50, 100, 200}) {
        double defect = 1;
        double q = coupling_failure_probability(samplers().interior, b, 0.5, &defect);
        CHECK(defect < 1e-12);
        CHECK(q < prev);
        CHECK(q > 0.0);
        prev = q;
    }
}

TEST_CASE("coupling experiment bookkeeping") {
    MaximalCoupler cp(samplers().interior);
    Philox4x32 g(3, 0);
    auto e = pair_coupling_experiment(cp, 50, 0.5, g);
    CHECK(e.horizon == static_cast<std::int64_t>(std::floor(std::pow(50.0, 1.5))));
    CHECK(e.s_min <= 50);
    CHECK(e.gamma_beyond == (e.gamma < 0));
    CHECK_THROWS_AS(pair_coupling_experiment(cp, 1, 0.5, g), std::invalid_argument);
    CHECK_THROWS_AS(pair_coupling_experiment(cp, 10, 1.5, g), std::invalid_argument);
}

TEST_CASE("joint edge step keeps order and marginals") {
    const auto& in = samplers().interior;
    Philox4x32 g(9, 1);
    JointStep s{5, 9};
    for (int i = 0; i < 2000; ++i) {
        JointStep t = joint_edge_step(in, s, g);
        REQUIRE(t.s1 >= 0);
        REQUIRE(t.s2 >= t.s1);
        s = t.s1 == t.s2 || t.s1 == 0 ? JointStep{5, 9} : t;
    }
    // the first coordinate alone is the single edge chain
    const std::int64_t R = 200000;
    std::map<std::int64_t, double> f;
    for (std::int64_t r = 0; r < R; ++r) f[joint_edge_step(in, JointStep{3, 7}, g).s1 - 3] += 1.0 / R;
    const auto& row = in.row(0, 3);
    for (std::int64_t v = -in.M(); v <= in.M(); ++v) {
        double p = row[static_cast<std::size_t>(v + in.M())];
        CHECK(std::abs(f[v] - p) < 5.0 * std::sqrt(p * (1 - p) / R) + 1e-9);
    }
}

TEST_CASE("coalescence experiment") {
    const auto& in = samplers().interior;
    Philox4x32 g(4, 2);
    auto z = coalescence_experiment(in, 10, 0, 100, g);
    CHECK(z.coalesced);
    CHECK(z.theta == 0);
    int hit = 0;
    for (int r = 0; r < 200; ++r) {
        auto e = coalescence_experiment(in, 256, 2, 16384, g);
        if (e.coalesced) {
            ++hit;
            CHECK(e.theta >= 1);
            CHECK(e.theta < 16384);
        }
    }
    CHECK(hit > 180);
    CHECK_THROWS_AS(coalescence_experiment(in, -1, 1, 10, g), std::invalid_argument);
}

TEST_CASE("modified difference walk") {
    const auto& in = samplers().interior;
    Philox4x32 g(6, 3);
    int at_zero = 0;
    const int R = 4000;
    for (int r = 0; r < R; ++r) {
        auto e = modified_difference_run(in, 0, 5, 10, 1000000, g);
        REQUIRE(e.finished);
        CHECK(e.exit_open <= e.exit_half_open);
        at_zero += e.exit_at_zero;
    }
    // started below b the difference is a simple walk: exits (0,10) at 0 w.p. 1/2
    CHECK(std::abs(at_zero / double(R) - 0.5) < 5.0 * std::sqrt(0.25 / R));
    auto z = modified_difference_run(in, 3, 0, 10, 100, g);
    CHECK(z.exit_open == 0);
    CHECK(z.exit_at_zero);
}

}  // TEST_SUITE
