#include "doctest.h"

#include <cmath>

#include "tsaw/ray_knight.hpp"
#include "tsaw/urn.hpp"

using namespace tsaw;
using namespace tsaw::walk;

TEST_SUITE("ray_knight") {

TEST_CASE("scaling helpers") {
    CHECK(rk::site_of(-1.0, 1000) == -1000);
    CHECK(rk::site_of(0.0015, 1000) == 1);
    CHECK(rk::site_of(-0.0015, 1000) == -2);
    CHECK(rk::level_of(0.0, 100, 0.85) == 0);
    CHECK(rk::level_of(1.0, 100, 0.5) == 10);
    CHECK_THROWS(rk::level_of(-0.1, 100, 0.5));
}

TEST_CASE("curve at the origin before any step") {
    const double sigma = std::sqrt(urn::sigma_squared(0.5));
    auto p = WalkParams::make(0.5);
    Philox4x32 g(1, 0);
    auto snaps = run_until_multi_tau(p, {{0, 0}}, g);
    auto c = rk::extract_curve(snaps[0], 0.0, 0.0, 400, sigma);
    CHECK(c.tau == 0);
    CHECK(c.value(0.0) == doctest::Approx(1.0 / (2 * sigma * 20)));
    CHECK(c.value(0.01) == 0.0);
    CHECK(c.area_residual() == 0);
    CHECK_THROWS_AS(rk::extract_curve(snaps[0], 0.5, 0.0, 400, sigma), rk::SnapshotMismatch);
}

TEST_CASE("curve invariants, monotonicity and merge points") {
    const double sigma = std::sqrt(urn::sigma_squared(0.5));
    auto p = WalkParams::make(0.5);
    Philox4x32 meta(7, 0);
    const std::int64_t n = 50;
    int pairs = 0;
    for (int rep = 0; rep < 400; ++rep) {
        // generator: one site per replica, three heights, plus a second site
        double x = std::floor((uniform01(meta) * 2 - 1) * n) / n;
        double y = std::floor((uniform01(meta) * 2 - 1) * n) / n;
        std::vector<double> hs{0.1 + uniform01(meta), 0.0, 0.0};
        hs[1] = hs[0] + 0.5 * uniform01(meta);
        hs[2] = hs[1] + 0.5;
        double hy = uniform01(meta);
        std::vector<StopSpec> specs;
        for (double h : hs) specs.push_back({rk::site_of(x, n), rk::level_of(h, n, sigma)});
        specs.push_back({rk::site_of(y, n), rk::level_of(hy, n, sigma)});
        std::sort(specs.begin(), specs.end());
        specs.erase(std::unique(specs.begin(), specs.end()), specs.end());
        Philox4x32 g(meta(), 0);
        std::vector<std::int64_t> path;
        RunOptions o;
        o.path = &path;
        o.budget = 2000000;
        std::vector<Snapshot> snaps;
        try {
            snaps = run_until_multi_tau(p, specs, g, o);
        } catch (const BudgetExhausted&) {
            continue;  // heavy tail of tau
        }
        std::vector<rk::RKCurve> at_x;
        for (auto& s : snaps) {
            double sx = static_cast<double>(s.spec.k) / n;
            double sh = (static_cast<double>(s.spec.m) + 0.5) / (2 * sigma * std::sqrt(double(n)));
            auto c = rk::extract_curve(s, sx, sh, n, sigma);
            CHECK_NOTHROW(c.check_invariants());
            CHECK(c.value(sx) == doctest::Approx((rk::level_of(sh, n, sigma) + 1) / c.scale()));
            CHECK(c.tau_rescaled() * 2 * sigma * std::pow(double(n), 1.5) == doctest::Approx(double(c.tau)));
            if (s.spec.k == rk::site_of(x, n)) at_x.push_back(c);
        }
        for (std::size_t i = 0; i + 1 < at_x.size(); ++i) {
            CHECK(at_x[i].tau <= at_x[i + 1].tau);
            for (std::int64_t k = at_x[i].lo; k <= at_x[i].hi; ++k)
                CHECK(at_x[i].local_time(k) <= at_x[i + 1].local_time(k));
        }
        for (std::size_t i = 0; i < snaps.size(); ++i)
            for (std::size_t j = 0; j < snaps.size(); ++j) {
                auto mp = rk::merge_points(snaps[i], snaps[j], path, n);
                if (i == j) {
                    CHECK(mp.minus == snaps[i].lo);
                    CHECK(mp.plus == snaps[i].hi);
                    continue;
                }
                CHECK(mp.edge_plus == mp.plus);
                CHECK(mp.edge_minus == mp.minus);
                CHECK(std::abs(mp.local_plus - mp.plus) <= 1);
                CHECK(std::abs(mp.local_minus - mp.minus) <= 1);
                ++pairs;
            }
    }
    CHECK(pairs > 1500);
}

TEST_CASE("duality on every sampled tuple") {
    auto p = WalkParams::make(0.5);
    Philox4x32 meta(8, 0);
    long checks = 0;
    for (int rep = 0; rep < 300; ++rep) {
        Philox4x32 g(meta(), 0);
        WalkState s;
        std::vector<std::int64_t> path{0};
        run_steps(s, p, g, 3000, &path);
        rk::VisitLog log(path);
        for (int t = 0; t < 40; ++t) {
            std::int64_t k = log.lo() + static_cast<std::int64_t>(meta() % static_cast<std::uint64_t>(log.hi() - log.lo() + 1));
            std::int64_t visits = static_cast<std::int64_t>(log.local_time(log.horizon(), k));
            if (visits == 0) continue;
            std::int64_t m = static_cast<std::int64_t>(meta() % static_cast<std::uint64_t>(visits));
            std::int64_t j = k + static_cast<std::int64_t>(meta() % 21) - 10;
            if (j == k) continue;
            std::int64_t lp = static_cast<std::int64_t>(meta() % 30);
            auto d = rk::duality_check(log, k, m, j, lp);
            CHECK(d.agree());
            ++checks;
        }
        // raw identity for every site of the range at one tau
        auto tk = log.tau(0, 0);
        for (std::int64_t j = log.lo(); j <= log.hi(); ++j)
            if (j != 0) CHECK(rk::duality_check(log, 0, 0, j, 0).raw_lhs == rk::duality_check(log, 0, 0, j, 0).raw_rhs);
        (void)tk;
    }
    CHECK(checks > 5000);
}

TEST_CASE("unvisited site: both events hold") {
    std::vector<std::int64_t> path{0, 1, 0, -1, 0, 1, 2};
    rk::VisitLog log(path);
    auto d = rk::duality_check(log, 1, 0, 5, 0);
    CHECK(d.event_a);
    CHECK(d.event_b);
    CHECK(d.raw_lhs == 0);
    CHECK(d.agree());
    CHECK(log.local_time(6, 0) == 3);
    CHECK(*log.tau(1, 1) == 5);
    CHECK(!log.tau(2, 1));
}

TEST_CASE("rescaled processes") {
    const double sigma = std::sqrt(urn::sigma_squared(0.5));
    auto p = WalkParams::make(0.5);
    Philox4x32 g(2, 0);
    std::vector<std::int64_t> path;
    auto v = rk::rescaled_processes(p, 100, sigma, {0.0, 0.1, 0.5, 1.0}, g, &path);
    CHECK(v[0].X == 0.0);
    CHECK(v[0].H == doctest::Approx(1.0 / (std::pow(2 * sigma, 2.0 / 3.0) * 10.0)));
    for (auto& s : v) CHECK(s.H > 0.0);
    CHECK(path.size() == 1001);
    double prev = 0;
    for (double dp : {0.01, 0.05, 0.2, 0.5}) {
        double m = rk::modulus_of_continuity(path, 100, sigma, dp);
        CHECK(m >= prev);
        prev = m;
    }
}

}
