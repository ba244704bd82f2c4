#include "doctest.h"

#include <cmath>
#include <map>

#include "tsaw/oracle.hpp"
#include "tsaw/ray_knight.hpp"
#include "tsaw/stats.hpp"
#include "tsaw/walk.hpp"

using namespace tsaw;
using namespace tsaw::walk;

namespace {

// Forces every step one way.
struct FixedBits {
    bool right;
    using result_type = std::uint64_t;
    std::uint64_t operator()() { return right ? 0 : ~std::uint64_t(0); }
};

std::vector<std::uint64_t> recount(const std::vector<std::int64_t>& path, std::int64_t lo, std::int64_t hi) {
    std::vector<std::uint64_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
    for (auto x : path) ++c[static_cast<std::size_t>(x - lo)];
    return c;
}

}  // namespace

TEST_SUITE("walk") {

TEST_CASE("step probability examples") {
    for (double lambda : {0.3, 0.5, 0.7}) {
        auto p = WalkParams::make(lambda);
        CHECK(p.beta == doctest::Approx(-std::log(lambda)).epsilon(1e-15));
        WalkState s;
        CHECK(step_probability(s, p) == 0.5);
        FixedBits r{true};
        s.step(p, r);
        CHECK(s.x() == 1);
        CHECK(s.eplus(0) == 1);
        CHECK(step_probability(s, p) == doctest::Approx(1.0 / (1.0 + lambda)).epsilon(1e-15));
        FixedBits l{false};
        s.step(p, l);
        // back at 0 with E+(0) = 1, E-(1) = 1: both sides weigh 0 and 2
        CHECK(s.x() == 0);
        CHECK(step_probability(s, p) == doctest::Approx(1.0 / (1.0 + std::pow(lambda, -2))).epsilon(1e-14));
    }
}

TEST_CASE("table and fallback agree at the edge") {
    auto p = WalkParams::make(0.5);
    CHECK(p.p_right(64) == doctest::Approx(1.0 / (1.0 + std::pow(0.5, 64))).epsilon(1e-15));
    CHECK(p.p_right(65) == doctest::Approx(1.0 / (1.0 + std::pow(0.5, 65))).epsilon(1e-15));
    CHECK(p.p_right(-65) == doctest::Approx(1.0 / (1.0 + std::pow(0.5, -65))).epsilon(1e-12));
    CHECK(p.p_right(-2000) >= 0.0);
    CHECK(p.p_right(2000) == 1.0);
}

TEST_CASE("local time of fresh state") {
    WalkState s;
    CHECK(s.site_local_time(0) == 1);
    CHECK(s.site_local_time(5) == 0);
    CHECK(s.n() == 0);
}

TEST_CASE("invariants and trajectory recount on random walks") {
    // generator: lambda from a small set, seeds, lengths
    Philox4x32 meta(2024, 0);
    for (int rep = 0; rep < 60; ++rep) {
        double lambda = 0.05 + 0.9 * uniform01(meta);
        auto len = static_cast<std::uint64_t>(1 + (meta() % 20000));
        auto p = WalkParams::make(lambda);
        Philox4x32 g(meta(), 1);
        WalkState s;
        std::vector<std::int64_t> path{0};
        run_steps(s, p, g, len, &path);
        CHECK_NOTHROW(s.check_invariants());
        auto c = recount(path, s.min_visited(), s.max_visited());
        bool ok = true;
        std::uint64_t total = 0, edges = 0;
        for (std::int64_t k = s.min_visited(); k <= s.max_visited(); ++k) {
            ok = ok && s.site_local_time(k) == c[static_cast<std::size_t>(k - s.min_visited())];
            total += s.site_local_time(k);
            edges += s.eplus(k) + s.eminus(k);
            auto d = static_cast<std::int64_t>(s.eplus(k)) - static_cast<std::int64_t>(s.eminus(k + 1));
            ok = ok && d >= -1 && d <= 1;
        }
        CHECK(ok);
        CHECK(total == len + 1);
        CHECK(edges == len);
    }
}

TEST_CASE("first step is fair") {
    auto p = WalkParams::make(0.5);
    Philox4x32 g(3, 0);
    const int N = 1000000;
    int right = 0;
    for (int i = 0; i < N; ++i) {
        WalkState s;
        right += s.step(p, g);
    }
    CHECK(std::abs(static_cast<double>(right) / N - 0.5) < 0.002);
}

TEST_CASE("law of X_12 against enumeration") {
    for (double lambda : {0.3, 0.7}) {
        auto p = WalkParams::make(lambda);
        Philox4x32 g(17, 0);
        const int N = 300000;
        ExactLaw emp;
        for (int i = 0; i < N; ++i) {
            WalkState s;
            run_steps(s, p, g, 12);
            emp.add({s.x()}, 1.0 / N);
        }
        CHECK(stats::tv_distance(emp, oracle::position_law(lambda, 12)) < 0.01);
    }
}

TEST_CASE("run_until_tau") {
    auto p = WalkParams::make(0.5);
    Philox4x32 g(5, 0);
    CHECK(run_until_tau(p, {0, 0}, g).n() == 0);
    // tau_{1,0} ^ 15 against enumeration
    const int N = 300000;
    ExactLaw emp;
    int ones = 0;
    for (int i = 0; i < N; ++i) {
        RunOptions o;
        o.budget = 15;
        std::uint64_t t;
        try {
            t = run_until_tau(p, {1, 0}, g, o).n();
        } catch (const BudgetExhausted&) {
            t = 15;
        }
        ones += t == 1;
        emp.add({static_cast<std::int64_t>(std::min<std::uint64_t>(t, 15))}, 1.0 / N);
    }
    CHECK(std::abs(static_cast<double>(ones) / N - 0.5) < 0.004);
    CHECK(stats::tv_distance(emp, oracle::tau_law(0.5, 1, 0, 15)) < 0.01);
}

TEST_CASE("stopped state has the right local time and no earlier crossing") {
    Philox4x32 meta(99, 0);
    for (int rep = 0; rep < 40; ++rep) {
        double lambda = 0.2 + 0.6 * uniform01(meta);
        std::int64_t k = static_cast<std::int64_t>(meta() % 21) - 10;
        std::int64_t m = static_cast<std::int64_t>(meta() % 6);
        auto p = WalkParams::make(lambda);
        Philox4x32 g(meta(), 0);
        std::vector<std::int64_t> path;
        RunOptions o;
        o.path = &path;
        WalkState s = run_until_tau(p, {k, m}, g, o);
        CHECK(s.x() == k);
        CHECK(s.site_local_time(k) == static_cast<std::uint64_t>(m) + 1);
        std::int64_t visits = 0;
        for (std::size_t t = 0; t + 1 < path.size(); ++t) visits += path[t] == k;
        CHECK(visits == m);
    }
}

TEST_CASE("budget guard") {
    auto p = WalkParams::make(0.5);
    Philox4x32 g(1, 0);
    RunOptions o;
    o.budget = 10;
    CHECK_THROWS_AS(run_until_tau(p, {1000, 0}, g, o), BudgetExhausted);
}

TEST_CASE("multi-tau snapshots") {
    auto p = WalkParams::make(0.5);
    SUBCASE("single spec replays run_until_tau") {
        Philox4x32 a(8, 0), b(8, 0);
        auto s = run_until_tau(p, {3, 2}, a);
        auto v = run_until_multi_tau(p, {{3, 2}}, b);
        REQUIRE(v.size() == 1);
        CHECK(v[0].n == s.n());
        CHECK(v[0].lo == s.min_visited());
        CHECK(v[0].hi == s.max_visited());
        for (std::int64_t k = s.min_visited(); k <= s.max_visited(); ++k) {
            CHECK(v[0].eplus(k) == s.eplus(k));
            CHECK(v[0].eminus(k) == s.eminus(k));
        }
    }
    SUBCASE("nested profiles are ordered") {
        Philox4x32 g(9, 0);
        for (int rep = 0; rep < 50; ++rep) {
            auto v = run_until_multi_tau(p, {{-4, 1}, {2, 3}, {-4, 5}, {0, 0}}, g);
            REQUIRE(v.size() == 4);
            CHECK(v[0].n == 0);
            for (std::size_t i = 0; i + 1 < v.size(); ++i) {
                CHECK(v[i].n <= v[i + 1].n);
                for (std::int64_t k = v[i].lo; k <= v[i].hi; ++k)
                    CHECK(v[i].site_local_time(k) <= v[i + 1].site_local_time(k));
            }
        }
    }
    SUBCASE("distinct specs required") {
        Philox4x32 g(1, 0);
        CHECK_THROWS_AS(run_until_multi_tau(p, {{1, 1}, {1, 1}}, g), std::invalid_argument);
    }
}

TEST_CASE("snapshot extrema against the edge characterization") {
    auto p = WalkParams::make(0.5);
    Philox4x32 g(12, 0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::int64_t> path;
        RunOptions o;
        o.path = &path;
        auto v = run_until_multi_tau(p, {{0, 0}, {-3, 4}}, g, o);
        auto mp = rk::merge_points(v[0], v[1], path, 1);
        CHECK(mp.minus == v[1].lo);
        CHECK(mp.plus == v[1].hi);
        CHECK(std::abs(mp.edge_plus - mp.plus) <= 1);
        CHECK(std::abs(mp.edge_minus - mp.minus) <= 1);
    }
}

}
