#include "tsaw/ray_knight.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace tsaw::rk {

std::int64_t site_of(double x, std::int64_t n) {
    return static_cast<std::int64_t>(std::floor(x * static_cast<double>(n)));
}

std::int64_t level_of(double h, std::int64_t n, double sigma) {
    if (h < 0.0) throw std::invalid_argument("h must be >= 0");
    return static_cast<std::int64_t>(std::floor(2.0 * sigma * h * std::sqrt(static_cast<double>(n))));
}

double RKCurve::scale() const { return 2.0 * sigma * std::sqrt(static_cast<double>(n)); }

double RKCurve::value(double y) const { return static_cast<double>(local_time(site_of(y, n))) / scale(); }

double RKCurve::tau_rescaled() const {
    return static_cast<double>(tau) / (2.0 * sigma * std::pow(static_cast<double>(n), 1.5));
}

std::int64_t RKCurve::area_residual() const {
    std::uint64_t s = 0;
    for (auto v : L) s += v;
    return static_cast<std::int64_t>(tau + 1) - static_cast<std::int64_t>(s);
}

void RKCurve::check_invariants() const {
    if (local_time(k) != static_cast<std::uint64_t>(m) + 1) throw std::logic_error("curve value at x is not m+1");
    if (area_residual() != 0) throw std::logic_error("area identity violated");
    for (std::int64_t s = lo; s <= hi; ++s)
        if (local_time(s) == 0) throw std::logic_error("zero local time inside support at " + std::to_string(s));
    if (lo > std::min<std::int64_t>(k, 0) || hi < std::max<std::int64_t>(k, 0))
        throw std::logic_error("support does not contain 0 and k");
}

RKCurve extract_curve(const walk::Snapshot& snap, double x, double h, std::int64_t n, double sigma) {
    RKCurve c;
    c.x = x;
    c.h = h;
    c.n = n;
    c.sigma = sigma;
    c.k = site_of(x, n);
    c.m = level_of(h, n, sigma);
    if (snap.spec.k != c.k || snap.spec.m != c.m)
        throw SnapshotMismatch("snapshot taken at tau(" + std::to_string(snap.spec.k) + "," +
                               std::to_string(snap.spec.m) + "), expected tau(" + std::to_string(c.k) + "," +
                               std::to_string(c.m) + ")");
    if (snap.x != c.k || snap.site_local_time(c.k) != static_cast<std::uint64_t>(c.m) + 1)
        throw SnapshotMismatch("snapshot is not at its stopping time");
    c.tau = snap.n;
    c.lo = snap.lo;
    c.hi = snap.hi;
    c.L.reserve(static_cast<std::size_t>(c.hi - c.lo + 1));
    for (std::int64_t s = c.lo; s <= c.hi; ++s) c.L.push_back(snap.site_local_time(s));
    return c;
}

RKCurve curve_from_profile(const urn::ProfileSample& ps, std::size_t r, std::int64_t k, std::int64_t m, double x,
                           double h, std::int64_t n, double sigma) {
    if (ps.L.empty()) throw std::invalid_argument("profile sample was taken without keep_profiles");
    if (!ps.left_complete || !ps.right_complete) throw std::invalid_argument("profile sample is censored");
    RKCurve c;
    c.x = x;
    c.h = h;
    c.n = n;
    c.sigma = sigma;
    c.k = k;
    c.m = m;
    c.tau = ps.area[r] - 1;
    c.lo = ps.mu_minus[r];
    c.hi = ps.mu_plus[r];
    for (std::int64_t s = c.lo; s <= c.hi; ++s) c.L.push_back(ps.L[r][static_cast<std::size_t>(s - ps.lo)]);
    return c;
}

MergePoints merge_points(const walk::Snapshot& a, const walk::Snapshot& b, const std::vector<std::int64_t>& path,
                         std::int64_t n) {
    const walk::Snapshot& first = a.n <= b.n ? a : b;
    const walk::Snapshot& second = a.n <= b.n ? b : a;
    if (second.n >= path.size()) throw std::invalid_argument("path shorter than the later stopping time");
    if (path[first.n] != first.x || path[second.n] != second.x)
        throw std::invalid_argument("snapshots do not belong to this path");
    MergePoints mp;
    if (first.n == second.n) {
        mp.minus = first.lo;
        mp.plus = first.hi;
    } else {
        auto [mn, mx] = std::minmax_element(path.begin() + static_cast<std::ptrdiff_t>(first.n),
                                            path.begin() + static_cast<std::ptrdiff_t>(second.n) + 1);
        mp.minus = *mn;
        mp.plus = *mx;
    }
    const std::int64_t kr = std::max(a.x, b.x), kl = std::min(a.x, b.x);
    const std::int64_t far_r = std::max(a.hi, b.hi) + 1, far_l = std::min(a.lo, b.lo) - 1;
    mp.edge_plus = far_r;
    for (std::int64_t j = kr; j <= far_r; ++j)
        if (a.eplus(j) == b.eplus(j)) {
            mp.edge_plus = j;
            break;
        }
    mp.edge_minus = far_l;
    for (std::int64_t j = kl; j >= far_l; --j)
        if (a.eminus(j) == b.eminus(j)) {
            mp.edge_minus = j;
            break;
        }
    mp.local_plus = far_r;
    for (std::int64_t j = kr; j <= far_r; ++j)
        if (a.site_local_time(j) == b.site_local_time(j)) {
            mp.local_plus = j;
            break;
        }
    mp.local_minus = far_l;
    for (std::int64_t j = kl; j >= far_l; --j)
        if (a.site_local_time(j) == b.site_local_time(j)) {
            mp.local_minus = j;
            break;
        }
    mp.rescaled_minus = static_cast<double>(mp.minus) / static_cast<double>(n);
    mp.rescaled_plus = static_cast<double>(mp.plus) / static_cast<double>(n);
    return mp;
}

VisitLog::VisitLog(const std::vector<std::int64_t>& path) {
    if (path.empty()) throw std::invalid_argument("empty path");
    horizon_ = path.size() - 1;
    auto [mn, mx] = std::minmax_element(path.begin(), path.end());
    lo_ = *mn;
    hi_ = *mx;
    times_.resize(static_cast<std::size_t>(hi_ - lo_ + 1));
    for (std::size_t t = 0; t < path.size(); ++t) times_[static_cast<std::size_t>(path[t] - lo_)].push_back(t);
}

const std::vector<std::uint64_t>* VisitLog::visits(std::int64_t k) const {
    if (k < lo_ || k > hi_) return nullptr;
    return &times_[static_cast<std::size_t>(k - lo_)];
}

std::uint64_t VisitLog::local_time(std::uint64_t t, std::int64_t k) const {
    const auto* v = visits(k);
    if (!v) return 0;
    return static_cast<std::uint64_t>(std::upper_bound(v->begin(), v->end(), t) - v->begin());
}

std::optional<std::uint64_t> VisitLog::tau(std::int64_t k, std::int64_t m) const {
    const auto* v = visits(k);
    if (!v || m < 0 || static_cast<std::size_t>(m) >= v->size()) return std::nullopt;
    return (*v)[static_cast<std::size_t>(m)];
}

DualityOutcome duality_check(const VisitLog& log, std::int64_t k, std::int64_t m, std::int64_t j, std::int64_t lp) {
    if (k == j) throw std::invalid_argument("duality needs distinct sites");
    auto tk = log.tau(k, m);
    if (!tk) throw std::invalid_argument("tau_{k,m} beyond the recorded path");
    const std::uint64_t need = static_cast<std::uint64_t>(m) + 1;
    // L(tau_{j,l}, k), with tau beyond the log treated as later than tau_{k,m}
    auto L_at_j = [&](std::int64_t l) -> std::uint64_t {
        auto tj = log.tau(j, l);
        if (!tj) return std::max(need, log.local_time(log.horizon(), k));
        return log.local_time(*tj, k);
    };
    DualityOutcome out;
    out.raw_lhs = log.local_time(*tk, j);
    out.event_a = out.raw_lhs <= static_cast<std::uint64_t>(lp);
    out.event_b = L_at_j(lp) >= need;
    // smallest l with L(tau_{j,l}, k) >= m+1, by bisection on a monotone predicate
    std::int64_t lo = 0, hi = 1;
    while (L_at_j(hi) < need) hi *= 2;
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (L_at_j(mid) >= need)
            hi = mid;
        else
            lo = mid + 1;
    }
    out.raw_rhs = static_cast<std::uint64_t>(lo);
    return out;
}

DualityOutcome duality_check(const VisitLog& log, double x, double h, double y, double hp, std::int64_t n,
                             double sigma) {
    return duality_check(log, site_of(x, n), level_of(h, n, sigma), site_of(y, n), level_of(hp, n, sigma));
}

std::vector<ProcessSample> rescaled_processes(const walk::WalkParams& p, std::int64_t n, double sigma,
                                              const std::vector<double>& t_grid, Philox4x32& rng,
                                              std::vector<std::int64_t>* path) {
    if (!std::is_sorted(t_grid.begin(), t_grid.end()) || (!t_grid.empty() && t_grid.front() < 0.0))
        throw std::invalid_argument("t grid must be ascending and nonnegative");
    const double nn = static_cast<double>(n);
    const double time_scale = std::pow(nn, 1.5);
    const double xs = std::pow(2.0 * sigma, -2.0 / 3.0) * nn;
    const double hs = std::pow(2.0 * sigma, 2.0 / 3.0) * std::sqrt(nn);
    walk::WalkState s;
    if (path) path->assign(1, 0);
    std::vector<ProcessSample> out;
    for (double t : t_grid) {
        auto target = static_cast<std::uint64_t>(std::floor(t * time_scale));
        if (target > s.n()) walk::run_steps(s, p, rng, target - s.n(), path);
        out.push_back({t, static_cast<double>(s.x()) / xs, static_cast<double>(s.site_local_time(s.x())) / hs});
    }
    return out;
}

double modulus_of_continuity(const std::vector<std::int64_t>& path, std::int64_t n, double sigma, double delta_prime) {
    const double nn = static_cast<double>(n);
    const auto w = static_cast<std::size_t>(std::floor(delta_prime * std::pow(nn, 1.5)));
    const double xs = std::pow(2.0 * sigma, -2.0 / 3.0) * nn;
    // sliding-window max - min over windows of w + 1 consecutive steps
    std::deque<std::size_t> mx, mn;
    std::int64_t best = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        while (!mx.empty() && path[mx.back()] <= path[i]) mx.pop_back();
        while (!mn.empty() && path[mn.back()] >= path[i]) mn.pop_back();
        mx.push_back(i);
        mn.push_back(i);
        while (mx.front() + w < i) mx.pop_front();
        while (mn.front() + w < i) mn.pop_front();
        best = std::max(best, path[mx.front()] - path[mn.front()]);
    }
    return static_cast<double>(best) / xs;
}

std::vector<EdgeViewPoint> directed_edge_view(const walk::Snapshot& snap, std::int64_t n, double sigma) {
    std::vector<EdgeViewPoint> out;
    const double sc = sigma * std::sqrt(static_cast<double>(n));
    for (std::int64_t k = snap.lo; k <= snap.hi; ++k)
        out.push_back({static_cast<double>(k) / static_cast<double>(n), static_cast<double>(snap.eplus(k)) / sc});
    return out;
}

}  // namespace tsaw::rk
