#include "tsaw/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsaw::urn {

MaximalCoupler::MaximalCoupler(const DBetaSampler& interior) : M_(interior.M()) {
    const std::vector<double>& pi = interior.stationary();
    const std::size_t W = pi.size();
    auto build = [&](const std::vector<double>& p) {
        Slot s;
        std::vector<double> common(W), xr(W), zr(W);
        double overlap = 0.0;
        for (std::size_t j = 0; j < W; ++j) {
            common[j] = std::min(p[j], pi[j]);
            overlap += common[j];
            xr[j] = p[j] - common[j];
            zr[j] = pi[j] - common[j];
        }
        s.overlap = std::min(overlap, 1.0);
        s.common = AliasTable(common);
        double rest = 0.0;
        for (double v : xr) rest += v;
        if (rest > 0.0) {
            s.xi_rest = AliasTable(xr);
            s.zeta_rest = AliasTable(zr);
        } else {
            s.overlap = 1.0;
            s.xi_rest = s.common;
            s.zeta_rest = s.common;
        }
        return s;
    };
    std::vector<double> delta0(W, 0.0);
    delta0[static_cast<std::size_t>(M_)] = 1.0;  // S = 0 is absorbing: xi = 0
    slots_.push_back(build(delta0));
    for (std::int64_t g = 1; g <= interior.g_cap(); ++g)
        slots_.push_back(build(interior.row(0, static_cast<std::uint64_t>(g))));
    slots_.push_back(build(pi));
}

CouplingExperiment pair_coupling_experiment(const MaximalCoupler& coupler, std::int64_t b, double delta,
                                            Philox4x32& rng) {
    if (b < 2) throw std::invalid_argument("b must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    CouplingExperiment e;
    e.b = b;
    e.delta = delta;
    e.horizon = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(b), 2.0 - delta)));
    std::int64_t S = b;
    e.s_min = S;
    for (std::int64_t j = 1; j <= e.horizon; ++j) {
        auto [xi, zeta] = coupler.draw(static_cast<std::uint64_t>(S), rng);
        if (e.gamma < 0 && xi != zeta) e.gamma = j;
        S += xi;
        e.s_min = std::min(e.s_min, S);
    }
    e.gamma_beyond = e.gamma < 0;
    e.min_above_half = 2 * e.s_min > b;
    return e;
}

double coupling_failure_probability(const DBetaSampler& interior, std::int64_t b, double delta, double* defect,
                                    std::int64_t s_max) {
    if (b < 2) throw std::invalid_argument("b must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    const auto horizon = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(b), 2.0 - delta)));
    const std::vector<double>& pi = interior.stationary();
    const std::int64_t M = interior.M();
    const auto W = static_cast<std::int64_t>(pi.size());
    if (s_max <= 0) {
        double var = 0.0;
        for (std::int64_t j = 0; j < W; ++j) var += pi[static_cast<std::size_t>(j)] * static_cast<double>((j - M) * (j - M));
        s_max = b + M + static_cast<std::int64_t>(std::ceil(12.0 * std::sqrt(var * static_cast<double>(horizon))));
    }
    // common part of the increment law at S = g; identical laws beyond the cap
    const std::int64_t g_top = interior.g_cap() + 1;
    std::vector<std::vector<double>> common(static_cast<std::size_t>(g_top + 1));
    std::vector<double> fail(static_cast<std::size_t>(g_top + 1), 0.0);
    for (std::int64_t g = 0; g <= g_top; ++g) {
        std::vector<double> row(pi.size(), 0.0);
        if (g == 0)
            row[static_cast<std::size_t>(M)] = 1.0;
        else
            row = interior.row(0, static_cast<std::uint64_t>(g));
        auto& c = common[static_cast<std::size_t>(g)];
        c.resize(pi.size());
        double s = 0.0;
        for (std::size_t j = 0; j < pi.size(); ++j) {
            c[j] = std::min(row[j], pi[j]);
            s += c[j];
        }
        fail[static_cast<std::size_t>(g)] = std::max(0.0, 1.0 - s);
    }
    std::vector<double> mass(static_cast<std::size_t>(s_max + 1), 0.0), next(mass.size());
    mass[static_cast<std::size_t>(b)] = 1.0;
    double failed = 0.0, lost = 0.0;
    for (std::int64_t step = 1; step <= horizon; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t S = 0; S <= s_max; ++S) {
            const double m = mass[static_cast<std::size_t>(S)];
            if (m == 0.0) continue;
            const std::size_t gi = static_cast<std::size_t>(std::min(S, g_top));
            failed += m * fail[gi];
            const auto& c = gi == static_cast<std::size_t>(g_top) ? pi : common[gi];
            for (std::int64_t j = 0; j < W; ++j) {
                const std::int64_t T = S + j - M;
                const double w = m * c[static_cast<std::size_t>(j)];
                if (T < 0 || T > s_max)
                    lost += w;
                else
                    next[static_cast<std::size_t>(T)] += w;
            }
        }
        mass.swap(next);
    }
    if (defect) *defect = lost;
    return failed;
}

CoalescenceResult coalescence_experiment(const DBetaSampler& interior, std::int64_t s1_start, std::int64_t gap,
                                         std::int64_t horizon, Philox4x32& rng) {
    if (s1_start < 0 || gap < 0) throw std::invalid_argument("need S1(0) >= 0 and gap >= 0");
    CoalescenceResult r;
    r.s1_start = s1_start;
    r.gap = gap;
    r.horizon = horizon;
    JointStep s{s1_start, s1_start + gap};
    if (gap == 0) {
        r.theta = 0;
        r.coalesced = true;
        return r;
    }
    for (std::int64_t j = 1; j < horizon; ++j) {
        s = joint_edge_step(interior, s, rng);
        if (s.s1 == s.s2) {
            r.theta = j;
            r.coalesced = true;
            break;
        }
    }
    return r;
}

GamblersRuinResult modified_difference_run(const DBetaSampler& interior, std::int64_t n1, std::int64_t m,
                                           std::int64_t b, std::int64_t step_cap, Philox4x32& rng) {
    if (n1 < 0 || m < 0 || b < 2) throw std::invalid_argument("need n1, m >= 0 and b >= 2");
    GamblersRuinResult r;
    std::int64_t s1 = n1, s2 = n1 + m;
    bool coalesced = m == 0;
    bool simple = s1 < b;  // alpha reached
    std::int64_t diff = m;
    bool open_done = false, half_done = false;
    auto check = [&](std::int64_t t) {
        if (!open_done && (diff <= 0 || diff >= b)) {
            open_done = true;
            r.exit_open = t;
            r.exit_at_zero = diff == 0;
        }
        if (!half_done && (diff < 0 || diff >= b)) {
            half_done = true;
            r.exit_half_open = t;
        }
    };
    check(0);
    for (std::int64_t t = 1; !(open_done && half_done); ++t) {
        if (t > step_cap) {
            r.finished = false;
            break;
        }
        if (simple) {
            diff += (rng() >> 63) ? 1 : -1;
        } else {
            if (coalesced) {
                s1 += interior.sample(0, interior.g_cap() + 1, rng);
                s2 += interior.sample(0, interior.g_cap() + 1, rng);
            } else {
                JointStep next = joint_edge_step(interior, JointStep{s1, s2}, rng);
                s1 = next.s1;
                s2 = next.s2;
                if (s1 == s2)
                    coalesced = true;
                else if (s1 == 0)
                    s1 = 1;
            }
            diff = s2 - s1;
            if (s1 < b) simple = true;
        }
        check(t);
    }
    return r;
}

}  // namespace tsaw::urn
