#include "tsaw/limit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsaw/parallel.hpp"
#include "tsaw/stats.hpp"

namespace tsaw::limit {

namespace {

constexpr double kTol = 1e-12;
constexpr int kZero = -1;

struct Engine {
    const std::vector<ForwardPoint>& pts;
    const ForwardOptions& opt;
    std::vector<Philox4x32>& streams;
    ForwardFamily out;

    std::size_t N;
    std::vector<int> rep;        // representative (lowest index) of each started curve; kZero if absorbed
    std::vector<bool> started;
    std::vector<double> val;     // value of each representative
    double y0 = 0.0;
    double y = 0.0;
    std::int64_t grid_t = 0;     // fixed mode grid index

    Engine(const std::vector<ForwardPoint>& p, const ForwardOptions& o, std::vector<Philox4x32>& s)
        : pts(p), opt(o), streams(s), N(p.size()) {}

    void note_merge(std::size_t i, std::size_t j, double at, int surv) {
        if (out.merge[i][j] == kNever) {
            out.merge[i][j] = out.merge[j][i] = at;
            out.survivor[i][j] = out.survivor[j][i] = surv;
        }
    }

    void absorb_group(int r, double at) {
        for (std::size_t i = 0; i < N; ++i)
            if (started[i] && rep[i] == r) {
                rep[i] = kZero;
                out.m_plus[i] = at;
            }
        // pairs that meet through the zero curve
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j && started[i] && started[j] && rep[i] == kZero && rep[j] == kZero)
                    note_merge(i, j, std::max(out.m_plus[i], out.m_plus[j]),
                               static_cast<int>(std::min(i, j)));
    }

    void join(int a, int b, double at) {
        int keep = std::min(a, b), drop = std::max(a, b);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (started[i] && started[j] && rep[i] == keep && rep[j] == drop) note_merge(i, j, at, keep);
        for (std::size_t i = 0; i < N; ++i)
            if (started[i] && rep[i] == drop) rep[i] = keep;
    }

    void live_reps(std::vector<int>& r) const {
        r.clear();
        for (std::size_t i = 0; i < N; ++i)
            if (started[i] && rep[i] == static_cast<int>(i)) r.push_back(static_cast<int>(i));
    }

    std::vector<int> live_reps() const {
        std::vector<int> r;
        live_reps(r);
        return r;
    }

    void start_curves(double at) {
        for (std::size_t i = 0; i < N; ++i) {
            if (started[i] || std::abs(pts[i].x - at) > kTol * std::max(1.0, std::abs(at))) continue;
            started[i] = true;
            rep[i] = static_cast<int>(i);
            val[i] = pts[i].h;
            if (opt.record) out.values[i].push_back(pts[i].h);
            if (pts[i].h <= 0.0 && at >= -kTol) {
                rep[i] = kZero;
                out.m_plus[i] = pts[i].x;
                absorb_group(static_cast<int>(i), pts[i].x);
                continue;
            }
            for (int r : live_reps())
                if (r != static_cast<int>(i) && val[r] == val[i]) {
                    join(r, static_cast<int>(i), at);
                    break;
                }
        }
    }

    bool all_done() const {
        for (std::size_t i = 0; i < N; ++i) {
            if (!started[i]) return false;
            if (rep[i] != kZero && !(out.area[i] > opt.area_cap)) return false;
        }
        return true;
    }

    // Advance all live groups by s; the step does not straddle 0.
    void advance(double s) {
        const bool reflecting = y + s <= kTol;
        std::vector<int>& reps = reps_;
        live_reps(reps);
        std::sort(reps.begin(), reps.end(), [&](int a, int b) { return val[a] < val[b] || (val[a] == val[b] && a < b); });
        const double sq = std::sqrt(s);
        std::vector<double>& nv = nv_;
        std::vector<double>& inc = inc_;
        std::vector<double>& kill_at = kill_;
        nv.assign(reps.size(), 0.0);
        inc.assign(reps.size(), 0.0);
        kill_at.assign(reps.size(), kNever);
        for (std::size_t g = 0; g < reps.size(); ++g) {
            int r = reps[g];
            Philox4x32& rng = streams[static_cast<std::size_t>(r)];
            double v = val[r];
            double z = standard_normal(rng);
            double v1 = v + sq * z;
            if (reflecting) {
                v1 = std::abs(v1);
            } else if (v1 <= 0.0) {
                kill_at[g] = y + s * v / (v - v1);
            } else {
                double e = 2.0 * v * v1 / s;
                if (e < 40.0 && uniform01(rng) < std::exp(-e)) kill_at[g] = y + 0.5 * s;
            }
            if (kill_at[g] != kNever) {
                inc[g] = 0.5 * v * (kill_at[g] - y);
                nv[g] = 0.0;
            } else {
                inc[g] = 0.5 * s * (v + v1);
                if (opt.step.adaptive) inc[g] += std::sqrt(s * s * s / 12.0) * standard_normal(rng);
                nv[g] = v1;
            }
        }
        // a killed group drags every group below it to zero as well
        for (std::size_t g = reps.size(); g-- > 1;)
            if (kill_at[g] != kNever && kill_at[g - 1] == kNever) {
                kill_at[g - 1] = kill_at[g];
                inc[g - 1] = 0.5 * val[reps[g - 1]] * (kill_at[g] - y);
                nv[g - 1] = 0.0;
            }
        for (std::size_t i = 0; i < N; ++i) {
            if (!started[i] || rep[i] == kZero) continue;
            auto g = static_cast<std::size_t>(std::find(reps.begin(), reps.end(), rep[i]) - reps.begin());
            out.area[i] += inc[g];
        }
        for (std::size_t g = 0; g < reps.size(); ++g) val[reps[g]] = nv[g];
        for (std::size_t g = 0; g < reps.size(); ++g)
            if (kill_at[g] != kNever) absorb_group(reps[g], kill_at[g]);
        // coalescence of neighbours in the pre-step order; the fixed grid only
        // checks for a crossing or touch, adaptive steps add the bridge test
        std::vector<int>& alive = alive_;
        alive.clear();
        for (std::size_t g = 0; g < reps.size(); ++g)
            if (kill_at[g] == kNever) alive.push_back(reps[g]);
        for (std::size_t a = 0; a + 1 < alive.size(); ++a) {
            int lo = alive[a], hi = alive[a + 1];
            if (rep[static_cast<std::size_t>(lo)] != lo || rep[static_cast<std::size_t>(hi)] != hi) continue;
            double d0 = pre_[static_cast<std::size_t>(hi)] - pre_[static_cast<std::size_t>(lo)];
            double d1 = val[hi] - val[lo];
            bool merged = d1 <= 0.0;
            if (!merged && opt.step.adaptive && d0 > 0.0) {
                double e = d0 * d1 / s;
                Philox4x32& rng = streams[static_cast<std::size_t>(std::min(lo, hi))];
                if (e < 40.0 && uniform01(rng) < std::exp(-e)) merged = true;
            }
            if (merged) {
                int keep = std::min(lo, hi);
                double v = val[keep];
                join(lo, hi, y + s);
                val[keep] = v;
                alive[a + 1] = keep;
            }
        }
        y += s;
        ++out.steps;
    }

    std::vector<double> pre_, nv_, inc_, kill_;
    std::vector<int> reps_, alive_;

    double next_event_after(double at) const {
        double best = opt.y_end;
        auto consider = [&](double e) {
            if (e > at + kTol && e < best) best = e;
        };
        consider(0.0);
        for (auto& p : pts) consider(p.x);
        if (opt.step.adaptive)
            for (double p : opt.probes) consider(p);
        return best;
    }

    double adaptive_step() const {
        std::vector<int> reps = live_reps();
        double vmin = kNever;
        std::vector<double> vs;
        for (int r : reps) {
            vmin = std::min(vmin, val[r]);
            vs.push_back(val[r]);
        }
        std::sort(vs.begin(), vs.end());
        for (std::size_t g = 0; g + 1 < vs.size(); ++g) vmin = std::min(vmin, vs[g + 1] - vs[g]);
        if (vmin == kNever) return opt.step.delta_max;
        double s = opt.step.eps * vmin;
        return std::clamp(s * s, opt.step.delta, opt.step.delta_max);
    }

    void record_probes(bool on_grid) {
        for (std::size_t p = 0; p < opt.probes.size(); ++p) {
            bool hit;
            if (opt.step.adaptive || !on_grid)
                hit = std::abs(opt.probes[p] - y) <= kTol * std::max(1.0, std::abs(y));
            else
                hit = std::llround((opt.probes[p] - y0) / opt.step.delta) == grid_t;
            if (!hit) continue;
            for (std::size_t i = 0; i < N; ++i)
                if (started[i]) out.probe_values[i][p] = rep[i] == kZero ? 0.0 : val[rep[i]];
        }
    }

    void record_values() {
        if (!opt.record) return;
        for (std::size_t i = 0; i < N; ++i)
            if (started[i] && std::abs(pts[i].x - y) > kTol * std::max(1.0, std::abs(y)))
                out.values[i].push_back(rep[i] == kZero ? 0.0 : val[rep[i]]);
    }

    void snapshot_pre() {
        pre_.assign(val.begin(), val.end());
    }

    void run() {
        if (N == 0) throw std::invalid_argument("empty point list");
        if (streams.size() < N) throw std::invalid_argument("one stream per curve required");
        for (auto& p : pts)
            if (!(p.h >= 0.0)) throw std::invalid_argument("curve heights must be >= 0");
        if (!(opt.step.delta > 0.0)) throw std::invalid_argument("step must be > 0");
        out.points = pts;
        out.m_plus.assign(N, kNever);
        out.merge.assign(N, std::vector<double>(N, kNever));
        out.survivor.assign(N, std::vector<int>(N, -1));
        out.area.assign(N, 0.0);
        out.area_censored.assign(N, false);
        out.probe_values.assign(N, std::vector<double>(opt.probes.size(), std::nan("")));
        out.values.assign(N, {});
        rep.assign(N, kZero);
        started.assign(N, false);
        val.assign(N, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            out.merge[i][i] = pts[i].x;
            out.survivor[i][i] = static_cast<int>(i);
        }
        y0 = std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.x < b.x; })->x;
        y = y0;
        if (!opt.step.adaptive)
            for (auto& p : pts) {
                double t = (p.x - y0) / opt.step.delta;
                if (std::abs(t - std::round(t)) > 1e-6) throw std::invalid_argument("start point off the grid");
            }
        start_curves(y);
        record_probes(true);
        while (y < opt.y_end - kTol && !all_done()) {
            if (opt.step.adaptive) {
                double s = std::min(adaptive_step(), next_event_after(y) - y);
                snapshot_pre();
                advance(s);
                start_curves(y);
                record_probes(true);
            } else {
                double target = y0 + static_cast<double>(grid_t + 1) * opt.step.delta;
                if (y < -kTol && target > kTol) {
                    // split at the reflecting/absorbing boundary
                    snapshot_pre();
                    advance(-y);
                    y = 0.0;
                }
                snapshot_pre();
                advance(target - y);
                ++grid_t;
                y = target;
                start_curves(y);
                record_values();
                record_probes(true);
            }
        }
        for (std::size_t i = 0; i < N; ++i) {
            out.area_censored[i] = out.area[i] > opt.area_cap;
            // absorbed before a later probe: the value there is 0
            if (started[i] && rep[i] == kZero)
                for (std::size_t p = 0; p < opt.probes.size(); ++p)
                    if (std::isnan(out.probe_values[i][p]) && opt.probes[p] >= pts[i].x) out.probe_values[i][p] = 0.0;
        }
        out.y_reached = y;
    }
};

}  // namespace

ForwardFamily simulate_forward_branches(const std::vector<ForwardPoint>& points, const ForwardOptions& opt,
                                        std::vector<Philox4x32>& streams) {
    Engine e(points, opt, streams);
    e.run();
    return std::move(e.out);
}

double LimitCurve::value(double y) const {
    long i = std::lround((y - x) / delta);
    const std::vector<double>& v = i >= 0 ? right : left;
    auto idx = static_cast<std::size_t>(std::labs(i));
    if (idx < v.size()) return v[idx];
    bool dead = i >= 0 ? absorbed_right : absorbed_left;
    if (dead) return 0.0;
    throw UnabsorbedCurve("value requested beyond the simulated domain", y);
}

LimitCurve simulate_single_curve(double x, double h, const CurveOptions& opt, Philox4x32& right_rng,
                                 Philox4x32& left_rng) {
    if (!(opt.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (!(h >= 0.0)) throw std::invalid_argument("h must be >= 0");
    LimitCurve c;
    c.x = x;
    c.h = h;
    c.delta = opt.delta;
    ForwardOptions fo;
    fo.step.delta = opt.delta;
    fo.record = opt.record;
    {
        fo.y_end = std::min(x + opt.y_max, opt.right_end);
        std::vector<Philox4x32> s{right_rng};
        ForwardFamily f = simulate_forward_branches({{x, h}}, fo, s);
        right_rng = s[0];
        c.right = std::move(f.values[0]);
        c.m_plus = f.m_plus[0];
        c.absorbed_right = f.m_plus[0] != kNever;
        c.right_area = f.area[0];
    }
    if (opt.with_left) {
        // mirror image: the left branch at x is the right branch at -x
        fo.y_end = -x + opt.y_max;
        std::vector<Philox4x32> s{left_rng};
        ForwardFamily f = simulate_forward_branches({{-x, h}}, fo, s);
        left_rng = s[0];
        c.left = std::move(f.values[0]);
        c.m_minus = f.m_plus[0] == kNever ? -kNever : -f.m_plus[0];
        c.absorbed_left = f.m_plus[0] != kNever;
        c.left_area = f.area[0];
    }
    return c;
}

double inverse_local_time(const LimitCurve& c) {
    if (!c.absorbed_right || !c.absorbed_left)
        throw UnabsorbedCurve("curve not absorbed within the domain cap (reached " +
                                  std::to_string(c.absorbed_right ? c.m_minus : c.x + c.delta * static_cast<double>(c.right.size())) + ")",
                              c.absorbed_right ? c.x - c.delta * static_cast<double>(c.left.size())
                                               : c.x + c.delta * static_cast<double>(c.right.size()));
    return c.right_area + c.left_area;
}

ForwardFamily simulate_forward_family(const std::vector<ForwardPoint>& points, double delta, double y_max,
                                      std::vector<Philox4x32>& streams, bool record) {
    ForwardOptions fo;
    fo.step.delta = delta;
    fo.record = record;
    double x0 = points.empty() ? 0.0 : points.front().x;
    for (auto& p : points) x0 = std::min(x0, p.x);
    fo.y_end = x0 + y_max;
    return simulate_forward_branches(points, fo, streams);
}

CurveSummary simulate_curve_summary(double x, double h, const CurveSummaryOptions& opt, Philox4x32& right_rng,
                                    Philox4x32& left_rng) {
    CurveSummary out;
    out.probe_values.assign(opt.probes.size(), 0.0);
    ForwardOptions fo;
    fo.step = opt.step;
    fo.area_cap = opt.area_cap;
    // left branch first: probes left of x are mirrored
    std::vector<double> lp, rp;
    for (double p : opt.probes)
        if (p < x) lp.push_back(-p);
    for (double p : opt.probes)
        if (p >= x) rp.push_back(p);
    fo.probes = lp;
    fo.y_end = -x + opt.y_cap;
    std::vector<Philox4x32> ls{left_rng};
    ForwardFamily L = simulate_forward_branches({{-x, h}}, fo, ls);
    left_rng = ls[0];
    out.m_minus = L.m_plus[0] == kNever ? -kNever : -L.m_plus[0];
    out.area = L.area[0];
    bool left_alive = L.m_plus[0] == kNever;
    if (L.area[0] > opt.area_cap) {
        out.censored = true;
        out.area = opt.area_cap;
    } else if (left_alive) {
        out.capped = true;
    }
    ForwardFamily R;
    if (!out.censored) {
        fo.probes = rp;
        fo.y_end = x + opt.y_cap;
        fo.area_cap = opt.area_cap - out.area;
        std::vector<Philox4x32> rs{right_rng};
        R = simulate_forward_branches({{x, h}}, fo, rs);
        right_rng = rs[0];
        out.m_plus = R.m_plus[0];
        if (R.area[0] > fo.area_cap) {
            out.censored = true;
            out.area = opt.area_cap;
        } else {
            out.area += R.area[0];
            if (R.m_plus[0] == kNever) out.capped = true;
        }
    }
    std::size_t li = 0, ri = 0;
    for (std::size_t p = 0; p < opt.probes.size(); ++p) {
        if (opt.probes[p] < x) {
            double v = L.probe_values[0][li++];
            out.probe_values[p] = std::isnan(v) ? 0.0 : v;
        } else if (!R.probe_values.empty()) {
            double v = R.probe_values[0][ri++];
            out.probe_values[p] = std::isnan(v) ? 0.0 : v;
        } else {
            out.probe_values[p] = std::nan("");
        }
    }
    return out;
}

namespace {

double density_sample(double a, double h, const DensityOptions& opt, Philox4x32& rr, Philox4x32& lr) {
    CurveSummaryOptions so;
    so.step = opt.step;
    so.area_cap = opt.tail_cut / opt.rate;
    CurveSummary cs = simulate_curve_summary(a, h, so, rr, lr);
    if (cs.censored) return 0.0;  // integrand below rate * e^{-tail_cut}
    if (cs.capped) throw UnabsorbedCurve("curve reached the spatial cap below the area cap", 0.0);
    return opt.rate * std::exp(-opt.rate * cs.area);
}

}  // namespace

std::vector<DensityCell> geometric_time_density(const std::vector<double>& a_grid, const std::vector<double>& h_grid,
                                                const DensityOptions& opt) {
    if (!(opt.rate > 0.0)) throw std::invalid_argument("rate must be > 0");
    if (opt.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    std::vector<DensityCell> cells;
    std::uint64_t cell_id = 0;
    for (double a : a_grid)
        for (double h : h_grid) {
            std::vector<double> vals(static_cast<std::size_t>(opt.replicas));
            const std::uint64_t base = cell_id++ * static_cast<std::uint64_t>(opt.replicas);
            parallel_for(vals.size(), [&](std::size_t r) {
                Philox4x32 rr(opt.seed, stream_id(base + r, 0)), lr(opt.seed, stream_id(base + r, 1));
                vals[r] = density_sample(a, h, opt, rr, lr);
            });
            stats::MeanSe m = stats::mean_se(vals);
            cells.push_back({a, h, m.mean, m.se});
        }
    return cells;
}

BinEstimate geometric_bin_probability(double a0, double a1, double h0, double h1, const DensityOptions& opt,
                                      std::uint64_t bin_id) {
    if (!(a1 > a0 && h1 > h0 && h0 >= 0.0)) throw std::invalid_argument("bad bin");
    const double area = (a1 - a0) * (h1 - h0);
    std::vector<double> vals(static_cast<std::size_t>(opt.replicas));
    const std::uint64_t base = bin_id * static_cast<std::uint64_t>(opt.replicas);
    parallel_for(vals.size(), [&](std::size_t r) {
        Philox4x32 pos(opt.seed, stream_id(base + r, 2));
        double a = a0 + (a1 - a0) * uniform01(pos);
        double h = h0 + (h1 - h0) * uniform01(pos);
        Philox4x32 rr(opt.seed, stream_id(base + r, 0)), lr(opt.seed, stream_id(base + r, 1));
        vals[r] = area * density_sample(a, h, opt, rr, lr);
    });
    stats::MeanSe m = stats::mean_se(vals);
    return {m.mean, m.se};
}

}  // namespace tsaw::limit
