#include "doctest.h"

#include <cmath>

#include "tsaw/stats.hpp"
#include "tsaw/walk.hpp"

using namespace tsaw;
using namespace tsaw::stats;

TEST_SUITE("stats") {

TEST_CASE("ecdf") {
    Ecdf e({3.0, 1.0, 2.0, 2.0});
    CHECK(e(0.5) == 0.0);
    CHECK(e(1.0) == 0.25);
    CHECK(e(2.0) == 0.75);
    CHECK(e(2.5) == 0.75);
    CHECK(e(3.0) == 1.0);
    CHECK_THROWS_AS(Ecdf({}), std::invalid_argument);
}

TEST_CASE("ks edge cases") {
    std::vector<double> a{1, 2, 3, 4, 5};
    auto same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);
    auto apart = ks_two_sample(a, {10, 11, 12});
    CHECK(apart.statistic == 1.0);
    CHECK(apart.p_value < 0.05);
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(1.36) == doctest::Approx(0.049).epsilon(0.02));
    CHECK_THROWS(ks_two_sample(std::vector<double>{}, a));
}

TEST_CASE("ks is invariant under a common monotone map") {
    Philox4x32 g(1, 0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a, b, fa, fb;
        for (int i = 0; i < 300; ++i) a.push_back(standard_normal(g));
        for (int i = 0; i < 200; ++i) b.push_back(0.2 + standard_normal(g));
        for (double v : a) fa.push_back(std::exp(3 * v) + 1);
        for (double v : b) fb.push_back(std::exp(3 * v) + 1);
        CHECK(ks_two_sample(a, b).statistic == ks_two_sample(fa, fb).statistic);
    }
}

TEST_CASE("ks self-calibration") {
    int ok = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Philox4x32 g(77, stream_id(rep, 0)), h(77, stream_id(rep, 1));
        std::vector<double> a(10000), b(10000);
        for (auto& v : a) v = standard_normal(g);
        for (auto& v : b) v = standard_normal(h);
        ok += ks_two_sample(a, b).p_value > 0.001;
    }
    CHECK(ok >= 99);
}

TEST_CASE("tv distance") {
    ExactLaw d0, uni, other;
    d0.add({0}, 1.0);
    uni.add({0}, 0.5);
    uni.add({1}, 0.5);
    other.add({5}, 1.0);
    CHECK(tv_distance(d0, d0) == 0.0);
    CHECK(tv_distance(d0, other) == 1.0);
    CHECK(tv_distance(d0, uni) == 0.5);
    // metric properties on random triples
    Philox4x32 g(3, 0);
    for (int rep = 0; rep < 200; ++rep) {
        ExactLaw p[3];
        for (auto& l : p) {
            double tot = 0;
            std::vector<double> w(6);
            for (auto& v : w) tot += v = uniform01(g) * (g() % 3 == 0 ? 0.0 : 1.0) + 1e-9;
            for (int i = 0; i < 6; ++i) l.add({i}, w[static_cast<std::size_t>(i)] / tot);
        }
        CHECK(tv_distance(p[0], p[1]) == doctest::Approx(tv_distance(p[1], p[0])));
        CHECK(tv_distance(p[0], p[2]) <= tv_distance(p[0], p[1]) + tv_distance(p[1], p[2]) + 1e-15);
        CHECK(tv_distance(p[0], p[1]) >= 0.0);
        CHECK(tv_distance(p[0], p[1]) <= 1.0);
    }
}

TEST_CASE("quantiles and fits") {
    CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(quantile({5}, 0.9) == 5.0);
    std::vector<double> grid{1e3, 1e4, 1e5, 1e6};
    std::vector<std::vector<double>> exact;
    for (double m : grid) exact.push_back({std::pow(m, 2.0 / 3.0)});
    auto f = exponent_fit(grid, exact, 0.5);
    CHECK(f.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS(exponent_fit({1, 10, 100}, {{1}, {1}, {1}}, 0.5));
    CHECK_THROWS(exponent_fit({1, 2, 3, 4}, {{1}, {1}, {1}, {1}}, 0.5));
    CHECK_THROWS(exponent_fit({1, 10, 100, 1000}, {{1}, {0}, {1}, {1}}, 0.5));
}

TEST_CASE("diffusive control run") {
    // simple random walk: exponent 1/2
    std::vector<double> grid;
    for (int e = 0; e <= 6; ++e) grid.push_back(std::round(std::pow(10.0, 2.0 + 0.5 * e)));
    std::vector<std::vector<double>> samples(grid.size());
    for (int r = 0; r < 2000; ++r) {
        Philox4x32 g(5, stream_id(r, 0));
        std::int64_t x = 0;
        std::size_t gi = 0;
        for (std::int64_t t = 1; gi < grid.size(); ++t) {
            x += (g() >> 63) ? 1 : -1;
            if (t == static_cast<std::int64_t>(grid[gi])) samples[gi++].push_back(static_cast<double>(x));
        }
    }
    auto f = exponent_fit(grid, samples, 0.5);
    CHECK(std::abs(f.alpha - 0.5) < 0.03);
}

TEST_CASE("bonferroni") {
    CHECK(bonferroni(0.001, 4) == 0.00025);
    CHECK(bonferroni(0.001, 0) == 0.001);
}

}
