#include "tsaw/walk.hpp"

#include <algorithm>
#include <ostream>

namespace tsaw::walk {

WalkParams WalkParams::make(double lambda, std::uint64_t seed) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
    WalkParams p;
    p.lambda = lambda;
    p.beta = -std::log(lambda);
    p.seed = seed;
    for (int w = -kTableHalfWidth; w <= kTableHalfWidth; ++w)
        p.right_prob[w + kTableHalfWidth] = 1.0 / (1.0 + std::pow(lambda, w));
    return p;
}

WalkState::WalkState() : base_(-32), e_(64) {}

void WalkState::grow() {
    std::int64_t span = hi_ - lo_ + 1;
    std::size_t size = std::max<std::size_t>(2 * e_.size(), static_cast<std::size_t>(4 * span));
    std::int64_t new_base = lo_ - static_cast<std::int64_t>(size - span) / 2;
    std::vector<EdgeCounts> next(size);
    for (std::int64_t k = std::max(base_, new_base);
         k < std::min(base_ + static_cast<std::int64_t>(e_.size()),
                      new_base + static_cast<std::int64_t>(size));
         ++k)
        next[static_cast<std::size_t>(k - new_base)] = at(k);
    e_.swap(next);
    base_ = new_base;
}

void WalkState::overflow() const { throw std::overflow_error("edge counter overflow"); }

std::vector<EdgeCounts> WalkState::profile() const {
    return {e_.begin() + (lo_ - base_), e_.begin() + (hi_ - base_ + 1)};
}

void WalkState::check_invariants() const {
    std::uint64_t crossings = 0, visits = 0;
    for (std::int64_t k = lo_; k <= hi_; ++k) {
        crossings += eplus(k) + eminus(k);
        visits += site_local_time(k);
        std::int64_t d = static_cast<std::int64_t>(eplus(k)) - static_cast<std::int64_t>(eminus(k + 1));
        if (d < -1 || d > 1) throw std::logic_error("edge balance broken at " + std::to_string(k));
    }
    if (eplus(hi_) != 0 || eminus(lo_) != 0) throw std::logic_error("crossing outside visited range");
    if (crossings != n_) throw std::logic_error("sum of edge crossings != n");
    if (visits != n_ + 1) throw std::logic_error("sum of site local times != n+1");
    if (x_ < lo_ || x_ > hi_) throw std::logic_error("position outside visited range");
}

double step_probability(const WalkState& s, const WalkParams& p) {
    return p.p_right(s.weight_difference());
}

Snapshot Snapshot::capture(const WalkState& s, StopSpec spec) {
    Snapshot snap;
    snap.spec = spec;
    snap.n = s.n();
    snap.x = s.x();
    snap.lo = s.min_visited();
    snap.hi = s.max_visited();
    snap.edges = s.profile();
    return snap;
}

namespace {

[[noreturn]] void exhausted(std::uint64_t n, StopSpec spec) {
    throw BudgetExhausted(n, "step budget exhausted before tau(" + std::to_string(spec.k) + "," +
                                 std::to_string(spec.m) + ") after " + std::to_string(n) + " steps");
}

}  // namespace

WalkState run_until_tau(const WalkParams& p, StopSpec spec, Philox4x32& g, const RunOptions& opt) {
    if (spec.m < 0) throw std::invalid_argument("StopSpec.m must be >= 0");
    WalkState s;
    const std::uint64_t target = static_cast<std::uint64_t>(spec.m) + 1;
    if (opt.path) opt.path->assign(1, 0);
    while (s.site_local_time(spec.k) < target) {
        if (s.n() >= opt.budget) exhausted(s.n(), spec);
        s.step(p, g);
        if (opt.path) opt.path->push_back(s.x());
        // local time at k can only change when the walk arrives there
        while (s.x() != spec.k) {
            if (s.n() >= opt.budget) exhausted(s.n(), spec);
            s.step(p, g);
            if (opt.path) opt.path->push_back(s.x());
        }
    }
    return s;
}

std::vector<Snapshot> run_until_multi_tau(const WalkParams& p, const std::vector<StopSpec>& specs,
                                          Philox4x32& g, const RunOptions& opt,
                                          const SnapshotObserver& observer) {
    std::vector<StopSpec> sorted = specs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("stop specs must be distinct");
    if (sorted.empty()) return {};
    for (auto& s : sorted)
        if (s.m < 0) throw std::invalid_argument("StopSpec.m must be >= 0");

    std::int64_t kmin = sorted.front().k, kmax = kmin;
    for (auto& s : sorted) {
        kmin = std::min(kmin, s.k);
        kmax = std::max(kmax, s.k);
    }
    // pending[k - kmin]: thresholds at site k, ascending, consumed from next_idx
    std::vector<std::vector<std::int64_t>> pending(static_cast<std::size_t>(kmax - kmin + 1));
    for (auto& s : sorted) pending[static_cast<std::size_t>(s.k - kmin)].push_back(s.m);
    std::vector<std::size_t> next_idx(pending.size(), 0);

    std::vector<Snapshot> out;
    out.reserve(sorted.size());
    std::size_t remaining = sorted.size();
    WalkState s;
    if (opt.path) opt.path->assign(1, 0);

    auto check_site = [&] {
        std::int64_t k = s.x();
        if (k < kmin || k > kmax) return;
        auto idx = static_cast<std::size_t>(k - kmin);
        auto& list = pending[idx];
        std::size_t& j = next_idx[idx];
        // L(n,k) = m+1 marks tau_{k,m}; levels below were hit at earlier visits
        while (j < list.size() &&
               s.site_local_time(k) == static_cast<std::uint64_t>(list[j]) + 1) {
            out.push_back(Snapshot::capture(s, StopSpec{k, list[j]}));
            if (observer) observer(out.back());
            ++j;
            --remaining;
        }
    };
    check_site();
    while (remaining > 0) {
        if (s.n() >= opt.budget) exhausted(s.n(), sorted.back());
        s.step(p, g);
        if (opt.path) opt.path->push_back(s.x());
        check_site();
    }
    return out;
}

void run_steps(WalkState& s, const WalkParams& p, Philox4x32& g, std::uint64_t count,
               std::vector<std::int64_t>* path) {
    for (std::uint64_t i = 0; i < count; ++i) {
        s.step(p, g);
        if (path) path->push_back(s.x());
    }
}

void write_profile_csv(std::ostream& os, const Snapshot& snap) {
    os << "k,eplus,eminus,L\n";
    for (std::int64_t k = snap.lo; k <= snap.hi; ++k)
        os << k << ',' << snap.eplus(k) << ',' << snap.eminus(k) << ',' << snap.site_local_time(k)
           << '\n';
}

void write_path_csv(std::ostream& os, const std::vector<std::int64_t>& path) {
    os << "n,x\n";
    for (std::size_t i = 0; i < path.size(); ++i) os << i << ',' << path[i] << '\n';
}

}  // namespace tsaw::walk
