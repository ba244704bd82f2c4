#pragma once

#include <cstdint>
#include <vector>

#include "tsaw/edge_chain.hpp"
#include "tsaw/rng.hpp"

namespace tsaw::urn {

// Edge local-time chain to the right of the origin: S(j+1) = S(j) + xi with
// xi ~ P_0(D_{beta_{S(j)}}); 0 is absorbing.
//
// MaximalCoupler holds, for every S = g, the maximal coupling of the xi law
// with pi (the law of the increments of Y).
class MaximalCoupler {
public:
    explicit MaximalCoupler(const DBetaSampler& interior);

    // Draws (xi, zeta) for current S = g.
    template <class G>
    std::pair<std::int64_t, std::int64_t> draw(std::uint64_t g, G& rng) const {
        const Slot& s = slot(g);
        if (uniform01(rng) < s.overlap) {
            std::int64_t v = static_cast<std::int64_t>(s.common.sample(rng)) - M_;
            return {v, v};
        }
        std::int64_t xi = static_cast<std::int64_t>(s.xi_rest.sample(rng)) - M_;
        std::int64_t zeta = static_cast<std::int64_t>(s.zeta_rest.sample(rng)) - M_;
        return {xi, zeta};
    }
    double overlap(std::uint64_t g) const { return slot(g).overlap; }

private:
    struct Slot {
        double overlap = 1.0;
        AliasTable common, xi_rest, zeta_rest;
    };
    const Slot& slot(std::uint64_t g) const {
        return g < slots_.size() ? slots_[g] : slots_.back();
    }
    std::int64_t M_;
    std::vector<Slot> slots_;  // g = 0 .. g_cap + 1; the last slot is the identity coupling
};

struct CouplingExperiment {
    std::int64_t b = 0;
    double delta = 0.0;
    std::int64_t horizon = 0;       // floor(b^{2 - delta})
    std::int64_t gamma = -1;        // first increment mismatch, -1 if none within horizon
    bool gamma_beyond = false;      // gamma > horizon
    std::int64_t s_min = 0;         // min of S over [0, horizon]
    bool min_above_half = false;    // s_min > b/2
};

CouplingExperiment pair_coupling_experiment(const MaximalCoupler& coupler, std::int64_t b, double delta,
                                            Philox4x32& rng);

// Exact P(gamma <= floor(b^{2-delta})) by a forward pass over S restricted to
// the no-mismatch event. Mass leaving [0, s_max] is added to *defect; s_max
// defaults to b plus twelve standard deviations of the horizon displacement.
double coupling_failure_probability(const DBetaSampler& interior, std::int64_t b, double delta,
                                    double* defect = nullptr, std::int64_t s_max = 0);

// Two chains S1 <= S2 from one walk at two levels of the same site, driven by
// the shared urns (site-wise joint kernel).
struct JointStep {
    std::int64_t s1 = 0;
    std::int64_t s2 = 0;
};

template <class G>
JointStep joint_edge_step(const DBetaSampler& interior, JointStep s, G& rng) {
    std::int64_t d1 = interior.sample(0, static_cast<std::uint64_t>(s.s1), rng);
    std::int64_t d2 = interior.sample(d1, static_cast<std::uint64_t>(s.s2 - s.s1), rng);
    return {s.s1 + d1, s.s2 + d2};
}

struct CoalescenceResult {
    std::int64_t s1_start = 0;
    std::int64_t gap = 0;
    std::int64_t horizon = 0;
    std::int64_t theta = -1;  // first j with S1(j) = S2(j), -1 if beyond horizon
    bool coalesced = false;
};

CoalescenceResult coalescence_experiment(const DBetaSampler& interior, std::int64_t s1_start, std::int64_t gap,
                                         std::int64_t horizon, Philox4x32& rng);

// Modified pair of the gambler's-ruin estimates: after coalescence the two
// walks continue as independent pi-walks, an absorbed S1 restarts from 1, and
// once S1 < b the difference follows a simple symmetric walk.
struct GamblersRuinResult {
    bool exit_at_zero = false;      // exit of (0, b) through 0
    std::int64_t exit_open = 0;     // exit time of (0, b)
    std::int64_t exit_half_open = 0;  // exit time of [0, b)
    bool finished = true;
};

GamblersRuinResult modified_difference_run(const DBetaSampler& interior, std::int64_t n1, std::int64_t m,
                                           std::int64_t b, std::int64_t step_cap, Philox4x32& rng);

}  // namespace tsaw::urn
