#include "tsaw/edge_chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsaw::urn {

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("alias table needs weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("alias weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("alias weights sum to zero");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        std::size_t s = small.back(), l = large.back();
        small.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::size_t i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (std::size_t i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

DBetaSampler::DBetaSampler(double lambda, UrnVariant v, std::int64_t M, double tv_cut, std::int64_t g_limit)
    : lambda_(lambda), variant_(v), M_(M > 0 ? M : auto_truncation(lambda) + 2), W_(2 * M_ + 1) {
    StationaryLaws st = stationary_laws(lambda, M_);
    stationary_ = st.blue_law(v);
    stationary_table_ = AliasTable(stationary_);
    BlueKernel K(lambda, v, M_);
    std::vector<std::vector<double>> cur(static_cast<std::size_t>(W_));
    for (std::int64_t d = 0; d < W_; ++d) {
        cur[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(W_), 0.0);
        cur[static_cast<std::size_t>(d)][static_cast<std::size_t>(d)] = 1.0;
    }
    // rows started next to the truncation edge lose mass on the first draws
    // and never reach tv_cut; they are too unlikely to matter and are left
    // out of the stopping rule
    std::vector<double> lost(static_cast<std::size_t>(W_), 0.0);
    for (std::int64_t g = 1; g <= g_limit; ++g) {
        double worst = 0.0;
        for (std::int64_t d = 0; d < W_; ++d) {
            auto& r = cur[static_cast<std::size_t>(d)];
            r = K.apply(r, &lost[static_cast<std::size_t>(d)]);
            rows_.push_back(r);
            tables_.emplace_back(r);
            if (lost[static_cast<std::size_t>(d)] < tv_cut) worst = std::max(worst, tv_vectors(r, stationary_));
        }
        g_cap_ = g;
        if (worst < tv_cut) break;
    }
}

std::size_t DBetaSampler::slot(std::int64_t d, std::int64_t g) const {
    if (d < -M_ || d > M_) throw std::out_of_range("start state outside sampler window");
    return static_cast<std::size_t>((g - 1) * W_ + (d + M_));
}

const AliasTable& DBetaSampler::table(std::int64_t d, std::int64_t g) const { return tables_[slot(d, g)]; }

const std::vector<double>& DBetaSampler::row(std::int64_t d, std::uint64_t g) const {
    if (g == 0) throw std::invalid_argument("row(d, 0) is a point mass");
    if (g > static_cast<std::uint64_t>(g_cap_)) return stationary_;
    return rows_[slot(d, static_cast<std::int64_t>(g))];
}

UrnSamplers::UrnSamplers(double lambda)
    : interior(lambda, UrnVariant::interior), origin(lambda, UrnVariant::origin) {}

namespace {

constexpr std::int64_t kUnset = std::numeric_limits<std::int64_t>::max();

struct SideResult {
    bool complete = false;
    bool censored = false;
    std::vector<std::int64_t> mu;     // first j >= max(k,0) with E+(j) = 0
    std::vector<std::int64_t> merge;  // first j >= k where levels r, r+1 agree
};

// Right-hand edge chain of a walk stopped at site k. e holds E+(k) per level.
// visit(l, eplus, eminus) is called for every site l > k until absorption.
template <class Visit>
SideResult run_right(const UrnSamplers& s, std::int64_t k, std::vector<std::int64_t> e, std::int64_t limit,
                     std::uint64_t cap, std::uint64_t& area_top, std::vector<std::uint64_t>& area,
                     Philox4x32& g, Visit&& visit) {
    const std::size_t N = e.size();
    SideResult res;
    res.mu.assign(N, kUnset);
    res.merge.assign(N - 1, kUnset);
    auto note = [&](std::int64_t j) {
        if (j >= std::max<std::int64_t>(k, 0))
            for (std::size_t r = 0; r < N; ++r)
                if (res.mu[r] == kUnset && e[r] == 0) res.mu[r] = j;
        for (std::size_t r = 0; r + 1 < N; ++r)
            if (res.merge[r] == kUnset && e[r] == e[r + 1]) res.merge[r] = j;
    };
    note(k);
    std::vector<std::int64_t> em(N);
    for (std::int64_t l = k + 1;; ++l) {
        if (l >= 1) {
            bool absorbed = true;
            for (auto v : e) absorbed = absorbed && v == 0;
            if (absorbed) {
                res.complete = true;
                return res;
            }
        }
        if (l > limit) return res;
        const DBetaSampler& smp = l == 0 ? s.origin : s.interior;
        const std::int64_t d0 = l <= -1 ? 1 : 0;
        const std::int64_t extra = l >= 1 ? 0 : 1;
        std::int64_t d = d0;
        std::int64_t prev_c = 0;
        for (std::size_t r = 0; r < N; ++r) {
            std::int64_t c = e[r] + extra;
            d = smp.sample(d, static_cast<std::uint64_t>(c - prev_c), g);
            prev_c = c;
            em[r] = e[r] + extra;  // E-(l) = E+(l-1) + [l <= 0]
            e[r] = d - d0 + c;
            std::uint64_t L = static_cast<std::uint64_t>(e[r] + em[r]);
            area[r] += L;
            if (r + 1 == N) area_top += L;
        }
        visit(l, e, em);
        note(l);
        if (area_top > cap) {
            res.censored = true;
            return res;
        }
    }
}

}  // namespace

ProfileSample sample_profiles(const UrnSamplers& s, const ProfileRequest& req, Philox4x32& right_rng,
                              Philox4x32& left_rng, Philox4x32& site_rng) {
    const std::size_t N = req.levels.size();
    if (N == 0) throw std::invalid_argument("at least one level required");
    for (std::size_t r = 0; r < N; ++r)
        if (req.levels[r] < 0 || (r > 0 && req.levels[r] <= req.levels[r - 1]))
            throw std::invalid_argument("levels must be nonnegative and strictly increasing");
    const std::int64_t k = req.k;

    ProfileSample out;
    out.eplus_at_k.resize(N);
    {
        DiscrepancyChain site(s.interior.lambda(), UrnDrivenWalk::site_variant(k), UrnDrivenWalk::initial_state(k));
        std::int64_t reds = 0, draws = 0;
        for (std::size_t r = 0; r < N; ++r) {
            for (; draws < req.levels[r]; ++draws) reds += site.draw(site_rng) ? 1 : 0;
            out.eplus_at_k[r] = reds;
        }
    }
    out.area.assign(N, 0);
    for (std::size_t r = 0; r < N; ++r) out.area[r] = static_cast<std::uint64_t>(req.levels[r]) + 1;
    std::uint64_t area_top = out.area.back();

    std::vector<std::int64_t> probes = req.probes;
    out.probe_values.assign(N, std::vector<std::uint64_t>(probes.size(), 0));
    auto record = [&](std::int64_t site, std::size_t r, std::uint64_t L) {
        for (std::size_t p = 0; p < probes.size(); ++p)
            if (probes[p] == site) out.probe_values[r][p] = L;
    };
    for (std::size_t r = 0; r < N; ++r) record(k, r, static_cast<std::uint64_t>(req.levels[r]) + 1);
    const bool any_probe = !probes.empty();
    std::int64_t pmin = any_probe ? *std::min_element(probes.begin(), probes.end()) : 0;
    std::int64_t pmax = any_probe ? *std::max_element(probes.begin(), probes.end()) : 0;

    // kept profiles; left side collected mirrored then reversed
    std::vector<std::vector<std::uint64_t>> lp, lm, rp, rm;
    if (req.keep_profiles) {
        lp.assign(N, {});
        lm.assign(N, {});
        rp.assign(N, {});
        rm.assign(N, {});
    }

    // left side: mirrored walk at -k with E+'(-k) = E-(k)
    std::vector<std::int64_t> e_left(N);
    for (std::size_t r = 0; r < N; ++r) e_left[r] = req.levels[r] - out.eplus_at_k[r];
    std::int64_t left_reach = req.left_limit == std::numeric_limits<std::int64_t>::min()
                                  ? std::numeric_limits<std::int64_t>::max()
                                  : -req.left_limit;
    SideResult left = run_right(
        s, -k, e_left, left_reach, req.area_cap, area_top, out.area, left_rng,
        [&](std::int64_t lm_site, const std::vector<std::int64_t>& ep, const std::vector<std::int64_t>& em) {
            std::int64_t site = -lm_site;
            for (std::size_t r = 0; r < N; ++r) {
                // mirror swaps the edge directions
                std::uint64_t L = static_cast<std::uint64_t>(ep[r] + em[r]);
                if (any_probe && site >= pmin && site <= pmax) record(site, r, L);
                if (req.keep_profiles) {
                    lp[r].push_back(static_cast<std::uint64_t>(em[r]));
                    lm[r].push_back(static_cast<std::uint64_t>(ep[r]));
                }
            }
        });
    SideResult right;
    if (!left.censored) {
        right = run_right(
            s, k, out.eplus_at_k, req.right_limit, req.area_cap, area_top, out.area, right_rng,
            [&](std::int64_t site, const std::vector<std::int64_t>& ep, const std::vector<std::int64_t>& em) {
                for (std::size_t r = 0; r < N; ++r) {
                    std::uint64_t L = static_cast<std::uint64_t>(ep[r] + em[r]);
                    if (any_probe && site >= pmin && site <= pmax) record(site, r, L);
                    if (req.keep_profiles) {
                        rp[r].push_back(static_cast<std::uint64_t>(ep[r]));
                        rm[r].push_back(static_cast<std::uint64_t>(em[r]));
                    }
                }
            });
    }
    out.left_complete = left.complete;
    out.right_complete = right.complete;
    out.censored = left.censored || right.censored;
    out.mu_plus = right.mu.empty() ? std::vector<std::int64_t>(N, kUnset) : right.mu;
    out.merge_plus = right.mu.empty() ? std::vector<std::int64_t>(N - 1, kUnset) : right.merge;
    out.mu_minus.assign(N, kUnset);
    out.merge_minus.assign(N - 1, kUnset);
    for (std::size_t r = 0; r < N; ++r)
        if (left.mu[r] != kUnset) out.mu_minus[r] = -left.mu[r];
    for (std::size_t r = 0; r + 1 < N; ++r)
        if (left.merge[r] != kUnset) out.merge_minus[r] = -left.merge[r];

    if (req.keep_profiles) {
        std::size_t nl = lp[0].size(), nr = rp[0].size();
        out.lo = k - static_cast<std::int64_t>(nl);
        out.hi = k + static_cast<std::int64_t>(nr);
        out.L.assign(N, {});
        out.eplus.assign(N, {});
        out.eminus.assign(N, {});
        for (std::size_t r = 0; r < N; ++r) {
            auto& P = out.eplus[r];
            auto& Mn = out.eminus[r];
            for (std::size_t i = nl; i-- > 0;) {
                P.push_back(lp[r][i]);
                Mn.push_back(lm[r][i]);
            }
            P.push_back(static_cast<std::uint64_t>(out.eplus_at_k[r]));
            Mn.push_back(static_cast<std::uint64_t>(req.levels[r] - out.eplus_at_k[r]));
            for (std::size_t i = 0; i < nr; ++i) {
                P.push_back(rp[r][i]);
                Mn.push_back(rm[r][i]);
            }
            for (std::size_t i = 0; i < P.size(); ++i)
                out.L[r].push_back(P[i] + Mn[i] + (out.lo + static_cast<std::int64_t>(i) == k ? 1 : 0));
        }
    }
    return out;
}

}  // namespace tsaw::urn
