#include "tsaw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "tsaw/coupling.hpp"
#include "tsaw/edge_chain.hpp"
#include "tsaw/limit.hpp"
#include "tsaw/oracle.hpp"
#include "tsaw/parallel.hpp"
#include "tsaw/ray_knight.hpp"
#include "tsaw/stats.hpp"
#include "tsaw/urn.hpp"
#include "tsaw/walk.hpp"

namespace tsaw::experiments {

using io::ExperimentConfig;
using io::ExperimentReport;
using io::Json;

namespace {

constexpr std::int64_t kUnset = std::numeric_limits<std::int64_t>::max();
constexpr double kPFloor = 1e-3;

// lanes below 16 drive the discrete side, 16 and up the limit side
constexpr std::uint32_t kLimitLane = 16;

template <class T, class F>
std::vector<T> replicate(std::int64_t count, F&& fn) {
    std::vector<T> out(static_cast<std::size_t>(count));
    parallel_for(out.size(), [&](std::size_t r) { out[r] = fn(static_cast<std::uint64_t>(r)); });
    return out;
}

Philox4x32 stream(const ExperimentConfig& c, std::uint64_t replica, std::uint32_t lane) {
    return Philox4x32(c.seed, stream_id(replica, lane));
}

std::string tag(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

struct Artifacts {
    const ExperimentConfig& cfg;
    ExperimentReport& rep;
    void write(const std::string& file, const std::string& text) {
        if (cfg.out.empty()) return;
        io::write_file(cfg.out, file, text);
        rep.artifacts.push_back(file);
    }
    template <class F>
    void csv(const std::string& file, F&& fill) {
        if (cfg.out.empty()) return;
        std::ostringstream ss;
        fill(ss);
        write(file, ss.str());
    }
};

void identity_gate(ExperimentReport& rep, std::int64_t checks, std::int64_t violations) {
    rep.note("identity_checks", static_cast<double>(checks));
    rep.gate("identity_violations", static_cast<double>(violations), "==", 0.0);
}

double sigma_of(double lambda) { return std::sqrt(urn::sigma_squared(lambda)); }

// ---------------------------------------------------------------- sigma

void run_sigma(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    const std::int64_t M = static_cast<std::int64_t>(c.extra("M", static_cast<double>(urn::auto_truncation(c.lambda))));
    urn::StationaryLaws a = urn::stationary_laws(c.lambda, M), b = urn::stationary_laws(c.lambda, 2 * M);
    rep.note("sigma2", a.sigma2);
    rep.note("sigma", std::sqrt(a.sigma2));
    rep.note("M", static_cast<double>(M));
    rep.gate("truncation_change", std::abs(a.sigma2 - b.sigma2), "<=", 1e-12);
    // theta series sum x^2 l^{x^2} / sum l^{x^2} over a wide window
    double num = 0.0, den = 0.0;
    for (std::int64_t x = -4 * M; x <= 4 * M; ++x) {
        double w = std::pow(c.lambda, static_cast<double>(x * x));
        num += static_cast<double>(x * x) * w;
        den += w;
    }
    rep.gate("theta_series_diff", std::abs(a.sigma2 - num / den), "<=", 1e-12);
    double worst = 0.0;
    for (std::int64_t x = -M; x < M; ++x) {
        double up = urn::urn_transition_prob(urn::UrnVariant::interior, x, c.lambda);
        double down = 1.0 - urn::urn_transition_prob(urn::UrnVariant::interior, x + 1, c.lambda);
        worst = std::max(worst, std::abs(a.at(a.rho, x) * up - a.at(a.rho, x + 1) * down));
    }
    rep.gate("detailed_balance_residual", worst, "<=", 1e-12);
    art.csv("sigma_stationary.csv", [&](std::ostream& os) { io::write_stationary_csv(os, a); });
}

// ------------------------------------------------------------ enumerate

void run_enumerate(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    if (c.n > oracle::kMaxEnumerationSteps) throw io::ConfigError("enumerate needs n <= 16");
    const int n = static_cast<int>(c.n);
    const std::vector<double> lambdas = c.extra_list("lambdas", {c.lambda});
    const double tv_max = c.extra("tv_max", 0.01);
    const std::int64_t chunk = 10000;
    const std::int64_t chunks = (c.replicas + chunk - 1) / chunk;
    std::int64_t checks = 0, violations = 0;
    std::ostringstream table;
    io::CsvWriter w(table, {"lambda", "x", "exact", "walk", "urn"});
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        if (!(lambda > 0.0 && lambda < 1.0)) throw io::ConfigError("lambdas must lie in (0,1)");
        const ExactLaw exact = oracle::position_law(lambda, n);
        const auto p = walk::WalkParams::make(lambda);
        struct Tally {
            std::map<std::int64_t, std::int64_t> walk, urn;
            std::int64_t checks = 0, violations = 0;
        };
        auto parts = replicate<Tally>(chunks, [&](std::uint64_t ch) {
            Tally t;
            const std::int64_t r0 = static_cast<std::int64_t>(ch) * chunk;
            const std::int64_t r1 = std::min(c.replicas, r0 + chunk);
            for (std::int64_t r = r0; r < r1; ++r) {
                auto ru = static_cast<std::uint64_t>(r);
                Philox4x32 g = stream(c, ru, static_cast<std::uint32_t>(2 * li));
                walk::WalkState s;
                for (int i = 0; i < n; ++i) s.step(p, g);
                ++t.walk[s.x()];
                ++t.checks;
                try {
                    s.check_invariants();
                } catch (const std::logic_error&) {
                    ++t.violations;
                }
                Philox4x32 gu = stream(c, ru, static_cast<std::uint32_t>(2 * li + 1));
                urn::UrnDrivenWalk uw(lambda);
                for (int i = 0; i < n; ++i) uw.step(gu);
                ++t.urn[uw.x()];
            }
            return t;
        });
        std::map<std::int64_t, std::int64_t> wc, uc;
        for (auto& t : parts) {
            for (auto& [x, k] : t.walk) wc[x] += k;
            for (auto& [x, k] : t.urn) uc[x] += k;
            checks += t.checks;
            violations += t.violations;
        }
        auto to_law = [&](const std::map<std::int64_t, std::int64_t>& cnt) {
            ExactLaw l;
            for (auto& [x, k] : cnt) l.add({x}, static_cast<double>(k) / static_cast<double>(c.replicas));
            return l;
        };
        ExactLaw lw = to_law(wc), lu = to_law(uc);
        rep.gate("tv_walk_lambda_" + tag(lambda), stats::tv_distance(lw, exact), "<", tv_max);
        rep.gate("tv_urn_lambda_" + tag(lambda), stats::tv_distance(lu, exact), "<", tv_max);
        for (std::int64_t x = -n; x <= n; ++x)
            w.row({lambda, static_cast<double>(x), exact.prob({x}), lw.prob({x}), lu.prob({x})});
    }
    identity_gate(rep, checks, violations);
    art.write("enumerate_laws.csv", table.str());
}

// ---------------------------------------------------- verify-identities

void run_verify_identities(const ExperimentConfig& c, ExperimentReport& rep, Artifacts&) {
    if (static_cast<std::uint64_t>(c.n) > c.budget) throw walk::BudgetExhausted(c.budget, "n beyond the step budget");
    const auto p = walk::WalkParams::make(c.lambda);
    const auto n_tau = static_cast<std::int64_t>(c.extra("tau_per_replica", 10));
    const auto n_dual = static_cast<std::int64_t>(c.extra("duality_per_replica", 50));
    struct Count {
        std::int64_t decomposition = 0, total = 0, area = 0, duality = 0;
        std::int64_t bad_decomposition = 0, bad_total = 0, bad_area = 0, bad_duality = 0;
    };
    auto parts = replicate<Count>(c.replicas, [&](std::uint64_t r) {
        Count ct;
        Philox4x32 g = stream(c, r, 0);
        walk::WalkState s;
        std::vector<std::int64_t> path{0};
        walk::run_steps(s, p, g, static_cast<std::uint64_t>(c.n), &path);
        // visits recounted from the path against E+ + E- + [k = X_n]
        const std::int64_t lo = s.min_visited(), hi = s.max_visited();
        std::vector<std::uint64_t> visits(static_cast<std::size_t>(hi - lo + 1), 0);
        for (auto x : path) ++visits[static_cast<std::size_t>(x - lo)];
        std::uint64_t sum = 0;
        for (std::int64_t k = lo; k <= hi; ++k) {
            ++ct.decomposition;
            if (visits[static_cast<std::size_t>(k - lo)] != s.site_local_time(k)) ++ct.bad_decomposition;
            sum += s.site_local_time(k);
        }
        ++ct.total;
        if (sum != s.n() + 1) ++ct.bad_total;
        try {
            s.check_invariants();
        } catch (const std::logic_error&) {
            ++ct.bad_total;
        }

        rk::VisitLog log(path);
        Philox4x32 pick = stream(c, r, 1);
        auto site = [&]() { return lo + static_cast<std::int64_t>(uniform01(pick) * static_cast<double>(hi - lo + 1)); };
        auto level = [&](std::int64_t k, std::int64_t extra) {
            auto L = static_cast<double>(s.site_local_time(k) + static_cast<std::uint64_t>(extra));
            return static_cast<std::int64_t>(uniform01(pick) * L);
        };
        // area identity on snapshots of a replay of the same walk
        std::set<walk::StopSpec> specs;
        for (std::int64_t i = 0; i < n_tau; ++i) {
            std::int64_t k = site();
            specs.insert({k, level(k, 0)});
        }
        Philox4x32 replay = stream(c, r, 0);
        walk::RunOptions ro;
        ro.budget = static_cast<std::uint64_t>(c.n) + 1;
        auto snaps = walk::run_until_multi_tau(p, {specs.begin(), specs.end()}, replay, ro);
        for (auto& sn : snaps) {
            ++ct.area;
            std::uint64_t tot = 0;
            for (std::int64_t k = sn.lo; k <= sn.hi; ++k) tot += sn.site_local_time(k);
            auto t = log.tau(sn.spec.k, sn.spec.m);
            bool ok = tot == sn.n + 1 && t && *t == sn.n && sn.x == sn.spec.k &&
                      sn.site_local_time(sn.spec.k) == static_cast<std::uint64_t>(sn.spec.m) + 1;
            if (!ok) ++ct.bad_area;
        }
        for (std::int64_t i = 0; i < n_dual; ++i) {
            std::int64_t k = site(), j = site();
            if (j == k) j = k == hi ? k - 1 : k + 1;
            if (j < lo || j > hi) continue;
            auto d = rk::duality_check(log, k, level(k, 0), j, level(j, 2));
            ++ct.duality;
            if (!d.agree()) ++ct.bad_duality;
        }
        return ct;
    });
    Count t;
    for (auto& x : parts) {
        t.decomposition += x.decomposition;
        t.total += x.total;
        t.area += x.area;
        t.duality += x.duality;
        t.bad_decomposition += x.bad_decomposition;
        t.bad_total += x.bad_total;
        t.bad_area += x.bad_area;
        t.bad_duality += x.bad_duality;
    }
    rep.note("decomposition_checks", static_cast<double>(t.decomposition));
    rep.gate("decomposition_violations", static_cast<double>(t.bad_decomposition), "==", 0.0);
    rep.note("total_mass_checks", static_cast<double>(t.total));
    rep.gate("total_mass_violations", static_cast<double>(t.bad_total), "==", 0.0);
    rep.note("area_checks", static_cast<double>(t.area));
    rep.gate("area_violations", static_cast<double>(t.bad_area), "==", 0.0);
    rep.note("duality_checks", static_cast<double>(t.duality));
    rep.gate("duality_violations", static_cast<double>(t.bad_duality), "==", 0.0);
    identity_gate(rep, t.decomposition + t.total + t.area + t.duality,
                  t.bad_decomposition + t.bad_total + t.bad_area + t.bad_duality);
}

// ------------------------------------------------------------ urn-mixing

void run_urn_mixing(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    const std::int64_t M = static_cast<std::int64_t>(c.extra("M", 40));
    const auto i0 = static_cast<std::int64_t>(c.extra("start", 0));
    const double target = c.extra("tv_target", 1e-3);
    const auto fit_lo = static_cast<std::int64_t>(c.extra("fit_lo", 5));
    const auto fit_hi = static_cast<std::int64_t>(c.extra("fit_hi", 30));
    auto curve = urn::tv_mixing_curve(c.lambda, urn::UrnVariant::interior, i0, c.n, M);
    std::int64_t first = -1;
    for (auto& [n, tv] : curve)
        if (first < 0 && tv < target) first = n;
    rep.note("first_n_below_target", static_cast<double>(first));
    rep.gate("tv_at_n", curve.back().second, "<", target);
    std::vector<double> xs, ys;
    for (auto& [n, tv] : curve)
        if (n >= fit_lo && n <= fit_hi && tv > 0.0) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(std::log(tv));
        }
    if (xs.size() < 3) throw io::ConfigError("fit window needs at least 3 points");
    auto fit = stats::linear_fit(xs, ys);
    rep.note("log_tv_slope", fit.slope);
    rep.gate("log_tv_r2", fit.r2, ">", 0.9);
    art.csv("urn_mixing.csv", [&](std::ostream& os) { io::write_mixing_csv(os, curve); });
}

// ----------------------------------------------------------- tail-bounds

void run_tail_bounds(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    const auto y_max = static_cast<std::int64_t>(c.extra("y_max", 10));
    const auto x_span = static_cast<std::int64_t>(c.extra("x_span", 10));
    auto r = urn::tail_ratio_check(c.lambda, c.n, y_max, x_span, c.extra("rel_slack", 1e-12));
    rep.note("checks", static_cast<double>(r.checks));
    rep.note("worst_right", r.worst_right);
    rep.note("worst_left", r.worst_left);
    rep.gate("violations", static_cast<double>(r.violations), "==", 0.0);
    art.csv("tail_bounds.csv", [&](std::ostream& os) { io::write_tails_csv(os, r); });
}

// ---------------------------------------------------------- grkt-single

struct Shared {
    std::unique_ptr<urn::UrnSamplers> samplers;
    double sigma = 0.0;
    explicit Shared(double lambda) : samplers(std::make_unique<urn::UrnSamplers>(lambda)), sigma(sigma_of(lambda)) {}
};

std::pair<double, double> single_point(const ExperimentConfig& c) {
    if (c.points.size() != 1) throw io::ConfigError("this experiment takes exactly one point");
    return c.points[0];
}

void write_discrete_curve(const ExperimentConfig& c, const Shared& sh, double x, double h, Artifacts& art,
                          const std::string& stem) {
    if (c.out.empty()) return;
    const double cap = c.extra("curve_area_cap", 50.0);
    const std::int64_t n = c.n;
    const double nn = static_cast<double>(n);
    urn::ProfileRequest req;
    req.k = rk::site_of(x, n);
    req.levels = {rk::level_of(h, n, sh.sigma)};
    req.area_cap = static_cast<std::uint64_t>(cap * 2.0 * sh.sigma * std::pow(nn, 1.5));
    req.keep_profiles = true;
    Philox4x32 a = stream(c, 0, 8), b = stream(c, 0, 9), s = stream(c, 0, 10);
    auto ps = urn::sample_profiles(*sh.samplers, req, a, b, s);
    const double scale = 2.0 * sh.sigma * std::sqrt(nn);
    std::vector<std::pair<double, double>> pts;
    const std::int64_t span = ps.hi - ps.lo + 1;
    const std::int64_t stride = std::max<std::int64_t>(1, span / 2000);
    for (std::int64_t site = ps.lo; site <= ps.hi; site += stride)
        pts.emplace_back(static_cast<double>(site) / nn,
                         static_cast<double>(ps.L[0][static_cast<std::size_t>(site - ps.lo)]) / scale);
    io::CurveMetadata md;
    md.x = x;
    md.h = h;
    md.n = n;
    md.sigma = sh.sigma;
    const bool done = !ps.censored && ps.left_complete && ps.right_complete;
    md.tau_n = done ? static_cast<double>(ps.area[0] - 1) / (2.0 * sh.sigma * std::pow(nn, 1.5)) : std::nan("");
    md.mu_minus = done ? static_cast<double>(ps.mu_minus[0]) / nn : std::nan("");
    md.mu_plus = done ? static_cast<double>(ps.mu_plus[0]) / nn : std::nan("");
    md.seed = c.seed;
    art.csv(stem + ".csv", [&](std::ostream& os) { io::write_curve_csv(os, pts); });
    art.write(stem + ".json", io::to_json(md).dump(2) + "\n");
}

void ks_gate(ExperimentReport& rep, const std::string& name, const std::vector<double>& a,
             const std::vector<double>& b, double floor) {
    auto k = stats::ks_two_sample(a, b);
    rep.note(name + "_ks_statistic", k.statistic);
    rep.gate(name + "_ks_p", k.p_value, ">", floor);
}

void run_grkt_single(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    auto [x, h] = single_point(c);
    const std::vector<double> ys = c.extra_list("probes", {-0.5, 0.0, 0.5, 1.0});
    const double absorb_at = c.extra("absorb_at", 1.0);
    const auto ref_reps = static_cast<std::int64_t>(c.extra("ref_replicas", 100000));
    for (double y : ys)
        if (y < x) throw io::ConfigError("probes must lie right of the starting point");
    if (absorb_at <= x) throw io::ConfigError("absorb_at must lie right of the starting point");
    const double y_end = std::max(absorb_at, *std::max_element(ys.begin(), ys.end()));
    Shared sh(c.lambda);
    const std::int64_t n = c.n;
    const double nn = static_cast<double>(n);
    const double scale = 2.0 * sh.sigma * std::sqrt(nn);
    const std::int64_t k = rk::site_of(x, n);
    const std::int64_t m = rk::level_of(h, n, sh.sigma);
    const std::int64_t absorb_site = rk::site_of(absorb_at, n);
    rep.note("k", static_cast<double>(k));
    rep.note("m", static_cast<double>(m));

    struct Row {
        std::vector<double> v;
        bool absorbed = false;
    };
    auto disc = replicate<Row>(c.replicas, [&](std::uint64_t r) {
        urn::ProfileRequest req;
        req.k = k;
        req.levels = {m};
        req.left_limit = k;
        req.right_limit = rk::site_of(y_end, n);
        for (double y : ys) req.probes.push_back(rk::site_of(y, n));
        Philox4x32 a = stream(c, r, 0), b = stream(c, r, 1), s = stream(c, r, 2);
        auto ps = urn::sample_profiles(*sh.samplers, req, a, b, s);
        Row row;
        for (auto L : ps.probe_values[0]) row.v.push_back(static_cast<double>(L) / scale);
        row.absorbed = ps.mu_plus[0] != kUnset && ps.mu_plus[0] < absorb_site;
        return row;
    });
    auto ref = replicate<Row>(ref_reps, [&](std::uint64_t r) {
        limit::ForwardOptions fo;
        fo.step.delta = c.delta;
        fo.y_end = y_end;
        fo.probes = ys;
        std::vector<Philox4x32> st{stream(c, r, kLimitLane)};
        auto f = limit::simulate_forward_branches({{x, h}}, fo, st);
        return Row{f.probe_values[0], f.m_plus[0] <= absorb_at};
    });
    const double floor = stats::bonferroni(kPFloor, ys.size());
    rep.note("p_floor", floor);
    for (std::size_t j = 0; j < ys.size(); ++j) {
        std::vector<double> a, b;
        for (auto& r : disc) a.push_back(r.v[j]);
        for (auto& r : ref) b.push_back(r.v[j]);
        ks_gate(rep, "y_" + tag(ys[j]), a, b, floor);
    }
    auto frac = [](const std::vector<Row>& rows) {
        double k = 0;
        for (auto& r : rows) k += r.absorbed ? 1 : 0;
        return k / static_cast<double>(rows.size());
    };
    const double pd = frac(disc), pr = frac(ref);
    rep.note("absorbed_discrete", pd);
    rep.note("absorbed_reference", pr);
    rep.gate("absorbed_diff", std::abs(pd - pr), "<", c.extra("absorb_tol", 0.02));
    write_discrete_curve(c, sh, x, h, art, "grkt_single_curve");
}

// -------------------------------------------------------------- tau-lim

void run_tau_lim(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    auto [x, h] = single_point(c);
    const double cap = c.extra("area_cap", 20.0);
    const auto ref_reps = static_cast<std::int64_t>(c.extra("ref_replicas", 100000));
    Shared sh(c.lambda);
    const double nn = static_cast<double>(c.n);
    const double tscale = 2.0 * sh.sigma * std::pow(nn, 1.5);
    const std::int64_t k = rk::site_of(x, c.n);
    const std::int64_t m = rk::level_of(h, c.n, sh.sigma);
    auto disc = replicate<double>(c.replicas, [&](std::uint64_t r) {
        urn::ProfileRequest req;
        req.k = k;
        req.levels = {m};
        req.area_cap = static_cast<std::uint64_t>(std::floor(cap * tscale));
        Philox4x32 a = stream(c, r, 0), b = stream(c, r, 1), s = stream(c, r, 2);
        auto ps = urn::sample_profiles(*sh.samplers, req, a, b, s);
        if (ps.censored) return cap;
        return std::min(cap, static_cast<double>(ps.area[0] - 1) / tscale);
    });
    std::vector<char> capped(static_cast<std::size_t>(ref_reps), 0);
    auto ref = replicate<double>(ref_reps, [&](std::uint64_t r) {
        limit::CurveSummaryOptions so;
        so.area_cap = cap;
        Philox4x32 a = stream(c, r, kLimitLane), b = stream(c, r, kLimitLane + 1);
        auto cs = limit::simulate_curve_summary(x, h, so, a, b);
        capped[r] = cs.capped;
        return std::min(cap, cs.area);
    });
    auto cens = [&](const std::vector<double>& v) {
        double k2 = 0;
        for (double t : v) k2 += t >= cap ? 1 : 0;
        return k2 / static_cast<double>(v.size());
    };
    rep.note("area_cap", cap);
    rep.note("censored_discrete", cens(disc));
    rep.note("censored_reference", cens(ref));
    rep.gate("reference_capped_curves", static_cast<double>(std::count(capped.begin(), capped.end(), 1)), "==", 0.0);
    ks_gate(rep, "tau", disc, ref, kPFloor);
    const double md = stats::mean_se(disc).mean, mr = stats::mean_se(ref).mean;
    rep.note("restricted_mean_discrete", md);
    rep.note("restricted_mean_reference", mr);
    rep.gate("restricted_mean_rel_diff", std::abs(md - mr) / mr, "<", c.extra("mean_tol", 0.05));
    art.csv("tau_lim_quantiles.csv", [&](std::ostream& os) {
        io::CsvWriter w(os, {"q", "discrete", "reference"});
        for (int i = 1; i < 20; ++i) {
            double q = i / 20.0;
            w.row({q, stats::quantile(disc, q), stats::quantile(ref, q)});
        }
    });
}

// ------------------------------------------------------------ grkt-joint

// Lower curve absorbed at lo, upper at hi, merged at mg (infinite when beyond
// the cap). A merge before the upper absorption makes the curves identical
// from there on, so both die together.
std::int64_t merge_violations(double lo, double mg, double hi, double start) {
    std::int64_t v = 0;
    if (lo > hi) ++v;
    if (mg > hi || mg < start) ++v;
    if (mg < hi && lo != hi) ++v;
    return v;
}

void run_grkt_joint(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    if (c.points.size() < 2) throw io::ConfigError("grkt-joint needs at least two points");
    const double x = c.points[0].first;
    std::vector<double> hs;
    for (auto& [px, ph] : c.points) {
        if (px != x) throw io::ConfigError("grkt-joint points must share x");
        if (!hs.empty() && ph <= hs.back()) throw io::ConfigError("grkt-joint heights must increase");
        hs.push_back(ph);
    }
    const std::size_t N = hs.size();
    const double y_cap = c.extra("y_cap", 10.0);
    const double y_end = x + y_cap;
    const auto ref_reps = static_cast<std::int64_t>(c.extra("ref_replicas", static_cast<double>(c.replicas)));
    Shared sh(c.lambda);
    const std::int64_t n = c.n;
    const double nn = static_cast<double>(n);
    const std::int64_t k = rk::site_of(x, n);
    std::vector<std::int64_t> levels;
    for (double h : hs) levels.push_back(rk::level_of(h, n, sh.sigma));
    for (std::size_t r = 1; r < N; ++r)
        if (levels[r] <= levels[r - 1]) throw io::ConfigError("heights too close for this n");
    // coordinates: mu+ per curve, then merge of neighbours
    const std::size_t D = 2 * N - 1;
    struct Row {
        std::vector<double> v;
        std::int64_t violations = 0;
    };
    auto disc = replicate<Row>(c.replicas, [&](std::uint64_t r) {
        urn::ProfileRequest req;
        req.k = k;
        req.levels = levels;
        req.left_limit = k;
        req.right_limit = rk::site_of(y_end, n);
        Philox4x32 a = stream(c, r, 0), b = stream(c, r, 1), s = stream(c, r, 2);
        auto ps = urn::sample_profiles(*sh.samplers, req, a, b, s);
        auto resc = [&](std::int64_t site) {
            return site == kUnset ? y_end : std::min(y_end, static_cast<double>(site) / nn);
        };
        Row row;
        for (std::size_t i = 0; i < N; ++i) row.v.push_back(resc(ps.mu_plus[i]));
        for (std::size_t i = 0; i + 1 < N; ++i) row.v.push_back(resc(ps.merge_plus[i]));
        auto num = [](std::int64_t v) {
            return v == kUnset ? std::numeric_limits<double>::infinity() : static_cast<double>(v);
        };
        for (std::size_t i = 0; i + 1 < N; ++i)
            row.violations += merge_violations(num(ps.mu_plus[i]), num(ps.merge_plus[i]), num(ps.mu_plus[i + 1]),
                                               static_cast<double>(k));
        return row;
    });
    std::vector<limit::ForwardPoint> pts;
    for (double h : hs) pts.push_back({x, h});
    auto ref = replicate<Row>(ref_reps, [&](std::uint64_t r) {
        limit::ForwardOptions fo;
        fo.step.delta = c.delta;
        fo.y_end = y_end;
        std::vector<Philox4x32> st;
        for (std::size_t i = 0; i < N; ++i) st.push_back(stream(c, r, kLimitLane + static_cast<std::uint32_t>(i)));
        auto f = limit::simulate_forward_branches(pts, fo, st);
        auto cl = [&](double v) { return std::min(v, y_end); };
        Row row;
        for (std::size_t i = 0; i < N; ++i) row.v.push_back(cl(f.m_plus[i]));
        for (std::size_t i = 0; i + 1 < N; ++i) row.v.push_back(cl(f.merge[i][i + 1]));
        for (std::size_t i = 0; i + 1 < N; ++i) {
            row.violations += merge_violations(f.m_plus[i], f.merge[i][i + 1], f.m_plus[i + 1], x);
            if (f.area[i] > f.area[i + 1]) ++row.violations;
        }
        return row;
    });
    const double floor = stats::bonferroni(kPFloor, D);
    rep.note("p_floor", floor);
    rep.note("y_cap", y_cap);
    for (std::size_t d = 0; d < D; ++d) {
        std::vector<double> a, b;
        for (auto& r : disc) a.push_back(r.v[d]);
        for (auto& r : ref) b.push_back(r.v[d]);
        std::string nm = d < N ? "mu_plus_" + std::to_string(d) : "merge_plus_" + std::to_string(d - N);
        ks_gate(rep, nm, a, b, floor);
    }
    std::int64_t vd = 0, vr = 0;
    for (auto& r : disc) vd += r.violations;
    for (auto& r : ref) vr += r.violations;
    rep.gate("ordering_violations_discrete", static_cast<double>(vd), "==", 0.0);
    rep.gate("ordering_violations_reference", static_cast<double>(vr), "==", 0.0);
    art.csv("grkt_joint_samples.csv", [&](std::ostream& os) {
        std::vector<std::string> hdr{"source", "replica"};
        for (std::size_t d = 0; d < D; ++d)
            hdr.push_back(d < N ? "mu_plus_" + std::to_string(d) : "merge_plus_" + std::to_string(d - N));
        io::CsvWriter w(os, hdr);
        auto dump_rows = [&](const std::vector<Row>& rows, double src) {
            for (std::size_t r = 0; r < std::min<std::size_t>(rows.size(), 2000); ++r) {
                std::vector<double> v{src, static_cast<double>(r)};
                v.insert(v.end(), rows[r].v.begin(), rows[r].v.end());
                w.row(v);
            }
        };
        dump_rows(disc, 0);
        dump_rows(ref, 1);
    });
}

// -------------------------------------------------------------- exponent

void run_exponent(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    std::vector<double> grid = c.t_grid;
    if (grid.empty())
        for (int i = 0; i <= 6; ++i) grid.push_back(std::round(std::pow(10.0, 3.0 + 0.5 * i)));
    if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 1.0)
        throw io::ConfigError("exponent grid must be ascending and >= 1");
    const auto m_max = static_cast<std::uint64_t>(grid.back());
    if (m_max > c.budget) throw walk::BudgetExhausted(c.budget, "largest m beyond the step budget");
    const double q = c.extra("quantile", 0.5);
    const auto p = walk::WalkParams::make(c.lambda);
    struct Row {
        std::vector<double> absx;
        bool bad = false;
    };
    auto rows = replicate<Row>(c.replicas, [&](std::uint64_t r) {
        Philox4x32 g = stream(c, r, 0);
        walk::WalkState s;
        Row row;
        for (double m : grid) {
            walk::run_steps(s, p, g, static_cast<std::uint64_t>(m) - s.n());
            row.absx.push_back(std::abs(static_cast<double>(s.x())));
        }
        try {
            s.check_invariants();
        } catch (const std::logic_error&) {
            row.bad = true;
        }
        return row;
    });
    std::vector<std::vector<double>> samples(grid.size());
    std::int64_t bad = 0;
    for (auto& r : rows) {
        for (std::size_t i = 0; i < grid.size(); ++i) samples[i].push_back(r.absx[i]);
        bad += r.bad;
    }
    auto fit = stats::exponent_fit(grid, samples, q);
    const double target = c.extra("alpha_target", 2.0 / 3.0);
    rep.note("alpha", fit.alpha);
    rep.note("alpha_se", fit.se);
    rep.gate("alpha_error", std::abs(fit.alpha - target), "<=", c.extra("alpha_tol", 0.03));
    rep.gate("r2", fit.r2, ">", 0.99);
    identity_gate(rep, c.replicas, bad);
    art.csv("exponent_quantiles.csv", [&](std::ostream& os) {
        io::CsvWriter w(os, {"m", "quantile"});
        for (std::size_t i = 0; i < grid.size(); ++i) w.row({grid[i], fit.quantiles[i]});
    });
}

// -------------------------------------------------------------- geom-time

void run_geom_time(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    const double rate = c.extra("rate", 1.0);
    const std::vector<double> ae = c.extra_list("a_edges", {-1.5, -0.9, -0.3, 0.3, 0.9, 1.5});
    const std::vector<double> he = c.extra_list("h_edges", {0.0, 0.3, 0.6, 0.9, 1.2, 1.5});
    if (ae.size() < 2 || he.size() < 2 || !std::is_sorted(ae.begin(), ae.end()) || !std::is_sorted(he.begin(), he.end()))
        throw io::ConfigError("bin edges must be ascending with at least two entries");
    const auto ref_reps = static_cast<std::int64_t>(c.extra("ref_replicas", 4000));
    const double sigma = sigma_of(c.lambda);
    const double nn = static_cast<double>(c.n);
    const double time_scale = std::pow(nn, 1.5);
    const double xs = std::pow(2.0 * sigma, -2.0 / 3.0) * nn;
    const double hsc = std::pow(2.0 * sigma, 2.0 / 3.0) * std::sqrt(nn);
    const auto p = walk::WalkParams::make(c.lambda);
    struct Row {
        double X = 0.0, H = 0.0;
        bool bad = false;
    };
    auto rows = replicate<Row>(c.replicas, [&](std::uint64_t r) {
        Philox4x32 clock = stream(c, r, 1);
        const double gamma = exponential1(clock) / rate;
        const auto steps = static_cast<std::uint64_t>(std::floor(gamma * time_scale));
        if (steps > c.budget) throw walk::BudgetExhausted(steps, "geometric time beyond the step budget");
        Philox4x32 g = stream(c, r, 0);
        walk::WalkState s;
        walk::run_steps(s, p, g, steps);
        Row row{static_cast<double>(s.x()) / xs, static_cast<double>(s.site_local_time(s.x())) / hsc, false};
        try {
            s.check_invariants();
        } catch (const std::logic_error&) {
            row.bad = true;
        }
        return row;
    });
    const std::size_t na = ae.size() - 1, nh = he.size() - 1;
    std::vector<double> emp(na * nh, 0.0);
    std::int64_t bad = 0;
    for (auto& r : rows) {
        bad += r.bad;
        auto ia = std::upper_bound(ae.begin(), ae.end(), r.X) - ae.begin() - 1;
        auto ih = std::upper_bound(he.begin(), he.end(), r.H) - he.begin() - 1;
        if (ia < 0 || ih < 0 || ia >= static_cast<long>(na) || ih >= static_cast<long>(nh)) continue;
        emp[static_cast<std::size_t>(ia) * nh + static_cast<std::size_t>(ih)] += 1.0;
    }
    for (double& e : emp) e /= static_cast<double>(c.replicas);
    limit::DensityOptions dop;
    dop.rate = rate;
    dop.replicas = ref_reps;
    dop.seed = c.seed + 1;
    std::vector<limit::BinEstimate> refp;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nh; ++j)
            refp.push_back(limit::geometric_bin_probability(ae[i], ae[i + 1], he[j], he[j + 1], dop, i * nh + j));
    double worst = 0.0, inside_e = 0.0, inside_r = 0.0;
    for (std::size_t b = 0; b < emp.size(); ++b) {
        worst = std::max(worst, std::abs(emp[b] - refp[b].probability));
        inside_e += emp[b];
        inside_r += refp[b].probability;
    }
    rep.note("mass_in_bins_empirical", inside_e);
    rep.note("mass_in_bins_reference", inside_r);
    rep.gate("max_bin_discrepancy", worst, "<", c.extra("bin_tol", 0.03));
    identity_gate(rep, c.replicas, bad);
    art.csv("geom_time_bins.csv", [&](std::ostream& os) {
        io::CsvWriter w(os, {"a0", "a1", "h0", "h1", "empirical", "reference", "reference_se"});
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nh; ++j) {
                auto& e = refp[i * nh + j];
                w.row({ae[i], ae[i + 1], he[j], he[j + 1], emp[i * nh + j], e.probability, e.se});
            }
    });
    art.csv("geom_time_density.csv", [&](std::ostream& os) {
        std::vector<io::DensityRow> d;
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nh; ++j) {
                double area = (ae[i + 1] - ae[i]) * (he[j + 1] - he[j]);
                auto& e = refp[i * nh + j];
                d.push_back({0.5 * (ae[i] + ae[i + 1]), 0.5 * (he[j] + he[j + 1]), e.probability / area, e.se / area});
            }
        io::write_density_csv(os, d);
    });
}

// --------------------------------------------------------------- coupling

void run_coupling(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    const std::vector<double> bs = c.extra_list("b", {50, 100, 200});
    const double dc = c.extra("coupling_delta", 0.5);
    const double target = c.extra("target", 0.9);
    urn::UrnSamplers us(c.lambda);
    urn::MaximalCoupler coupler(us.interior);
    std::vector<double> ps, exact;
    std::ostringstream table;
    io::CsvWriter w(table, {"b", "horizon", "p_gamma_beyond", "p_gamma_beyond_exact", "p_min_above_half"});
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto b = static_cast<std::int64_t>(bs[i]);
        auto rows = replicate<urn::CouplingExperiment>(c.replicas, [&](std::uint64_t r) {
            Philox4x32 g = stream(c, r, static_cast<std::uint32_t>(i));
            return urn::pair_coupling_experiment(coupler, b, dc, g);
        });
        double beyond = 0, half = 0;
        for (auto& e : rows) {
            beyond += e.gamma_beyond;
            half += e.min_above_half;
        }
        const double R = static_cast<double>(c.replicas);
        double defect = 0.0;
        const double fail = urn::coupling_failure_probability(us.interior, b, dc, &defect);
        ps.push_back(beyond / R);
        exact.push_back(fail);
        const std::string sb = std::to_string(b);
        rep.note("p_gamma_beyond_b" + sb, beyond / R);
        rep.note("exact_p_gamma_within_b" + sb, fail);
        rep.gate("exact_defect_b" + sb, defect, "<", 1e-12);
        rep.note("p_min_above_half_b" + sb, half / R);
        w.row({static_cast<double>(b), static_cast<double>(rows.front().horizon), beyond / R, 1.0 - fail, half / R});
    }
    rep.gate("p_gamma_beyond_largest_b", ps.back(), ">=", target);
    rep.gate("exact_p_gamma_beyond_largest_b", 1.0 - exact.back(), ">=", target);
    for (std::size_t i = 1; i < ps.size(); ++i) {
        const std::string pair = "_b" + tag(bs[i - 1]) + "_b" + tag(bs[i]);
        // Monte Carlo: non-decreasing; exact: strictly increasing, compared
        // through the failure probabilities which keep full precision
        rep.gate("increase" + pair, ps[i] - ps[i - 1], ">=", 0.0);
        rep.gate("exact_increase" + pair, exact[i - 1] - exact[i], ">", 0.0);
    }
    art.write("coupling.csv", table.str());
}

// ------------------------------------------------------------ coalescence

void run_coalescence(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    const auto b = static_cast<std::int64_t>(c.extra("b", 4));
    const auto s1 = static_cast<std::int64_t>(c.extra("s1_start", std::pow(static_cast<double>(b), 4)));
    const auto horizon = static_cast<std::int64_t>(c.extra("horizon", std::pow(static_cast<double>(b), 7)));
    std::vector<double> gaps = c.extra_list("gaps", {});
    if (gaps.empty())
        for (std::int64_t g = 1; g <= b; ++g) gaps.push_back(static_cast<double>(g));
    urn::UrnSamplers us(c.lambda);
    std::ostringstream table;
    io::CsvWriter w(table, {"gap", "p_coalesced", "median_theta"});
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const auto gap = static_cast<std::int64_t>(gaps[i]);
        auto rows = replicate<urn::CoalescenceResult>(c.replicas, [&](std::uint64_t r) {
            Philox4x32 g = stream(c, r, static_cast<std::uint32_t>(i));
            return urn::coalescence_experiment(us.interior, s1, gap, horizon, g);
        });
        double hit = 0;
        std::vector<double> th;
        for (auto& e : rows) {
            hit += e.coalesced;
            th.push_back(e.coalesced ? static_cast<double>(e.theta) : static_cast<double>(horizon));
        }
        const double p = hit / static_cast<double>(c.replicas);
        rep.gate("p_coalesced_gap" + std::to_string(gap), p, ">=", c.extra("target", 0.95));
        w.row({static_cast<double>(gap), p, stats::quantile(th, 0.5)});
    }
    rep.note("s1_start", static_cast<double>(s1));
    rep.note("horizon", static_cast<double>(horizon));
    art.write("coalescence.csv", table.str());
}

// -------------------------------------------------------------- limit-sim

void run_limit_sim(const ExperimentConfig& c, ExperimentReport& rep, Artifacts& art) {
    if (c.points.empty()) throw io::ConfigError("limit-sim needs points");
    const double y_max = c.extra("y_max", 5.0);
    std::vector<limit::ForwardPoint> pts;
    for (auto& [x, h] : c.points) pts.push_back({x, h});
    double xmin = pts[0].x;
    for (auto& p : pts) xmin = std::min(xmin, p.x);
    for (auto& p : pts) {
        double t = (p.x - xmin) / c.delta;
        if (std::abs(t - std::round(t)) > 1e-6) throw io::ConfigError("points must sit on the delta grid");
    }
    const std::size_t N = pts.size();
    auto viol = replicate<std::int64_t>(c.replicas, [&](std::uint64_t r) {
        limit::ForwardOptions fo;
        fo.step.delta = c.delta;
        fo.y_end = xmin + y_max;
        fo.record = true;
        std::vector<Philox4x32> st;
        for (std::size_t i = 0; i < N; ++i) st.push_back(stream(c, r, kLimitLane + static_cast<std::uint32_t>(i)));
        auto f = limit::simulate_forward_branches(pts, fo, st);
        std::int64_t v = 0;
        // value of curve i at grid index t of the common grid
        auto at = [&](std::size_t i, std::size_t t, double& out) {
            auto off = static_cast<std::size_t>(std::llround((pts[i].x - xmin) / c.delta));
            if (t < off || t - off >= f.values[i].size()) return false;
            out = f.values[i][t - off];
            return true;
        };
        std::size_t T = 0;
        for (std::size_t i = 0; i < N; ++i)
            T = std::max(T, static_cast<std::size_t>(std::llround((pts[i].x - xmin) / c.delta)) + f.values[i].size());
        for (std::size_t i = 0; i < N; ++i) {
            bool zero = false;
            for (double val : f.values[i]) {
                if (val < 0.0) ++v;
                if (zero && val != 0.0) ++v;
                if (val == 0.0) zero = true;
            }
        }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) {
                int sign = 0;
                for (std::size_t t = 0; t < T; ++t) {
                    double a, b;
                    if (!at(i, t, a) || !at(j, t, b)) continue;
                    double y = xmin + static_cast<double>(t) * c.delta;
                    if (y >= f.merge[i][j] - 1e-9 && a != b) ++v;
                    int s = (a > b) - (a < b);
                    if (s != 0 && sign != 0 && s != sign) ++v;
                    if (s != 0) sign = s;
                }
            }
        return v;
    });
    std::int64_t tot = 0;
    for (auto v : viol) tot += v;
    rep.gate("invariant_violations", static_cast<double>(tot), "==", 0.0);
    if (c.out.empty()) return;
    const double sigma = sigma_of(c.lambda);
    for (std::size_t i = 0; i < N; ++i) {
        limit::CurveOptions co;
        co.delta = c.delta;
        co.y_max = y_max;
        Philox4x32 a = stream(c, 0, 32 + 2 * static_cast<std::uint32_t>(i));
        Philox4x32 b = stream(c, 0, 33 + 2 * static_cast<std::uint32_t>(i));
        auto cv = limit::simulate_single_curve(pts[i].x, pts[i].h, co, a, b);
        std::vector<std::pair<double, double>> xy;
        for (std::size_t t = cv.left.size(); t-- > 1;) xy.emplace_back(cv.x - static_cast<double>(t) * c.delta, cv.left[t]);
        for (std::size_t t = 0; t < cv.right.size(); ++t) xy.emplace_back(cv.x + static_cast<double>(t) * c.delta, cv.right[t]);
        io::CurveMetadata md;
        md.x = cv.x;
        md.h = cv.h;
        md.n = 0;
        md.sigma = sigma;
        md.tau_n = cv.absorbed_left && cv.absorbed_right ? limit::inverse_local_time(cv) : std::nan("");
        md.mu_minus = cv.m_minus;
        md.mu_plus = cv.m_plus;
        md.seed = c.seed;
        std::string stem = "limit_curve_" + std::to_string(i);
        art.csv(stem + ".csv", [&](std::ostream& os) { io::write_curve_csv(os, xy); });
        art.write(stem + ".json", io::to_json(md).dump(2) + "\n");
    }
}

// ----------------------------------------------------------------- report

void run_report(const ExperimentConfig& c, ExperimentReport& rep, Artifacts&) {
    if (c.out.empty()) throw io::ConfigError("report needs --out pointing at earlier results");
    std::vector<std::string> files;
    for (auto& e : std::filesystem::directory_iterator(c.out)) {
        std::string f = e.path().filename().string();
        const std::string suffix = ".report.json";
        if (f.size() > suffix.size() && f.compare(f.size() - suffix.size(), suffix.size(), suffix) == 0 &&
            f != "report.report.json")
            files.push_back(f);
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw io::ConfigError("no reports found in " + c.out);
    for (auto& f : files) {
        auto r = io::report_from_json(Json::parse(io::read_file((std::filesystem::path(c.out) / f).string())));
        rep.gate(r.name, r.evaluate() ? 1.0 : 0.0, "==", 1.0);
    }
}

using Runner = void (*)(const ExperimentConfig&, ExperimentReport&, Artifacts&);

const std::vector<std::pair<std::string, Runner>>& table() {
    static const std::vector<std::pair<std::string, Runner>> t{
        {"sigma", run_sigma},
        {"enumerate", run_enumerate},
        {"verify-identities", run_verify_identities},
        {"urn-mixing", run_urn_mixing},
        {"tail-bounds", run_tail_bounds},
        {"grkt-single", run_grkt_single},
        {"grkt-joint", run_grkt_joint},
        {"tau-lim", run_tau_lim},
        {"exponent", run_exponent},
        {"geom-time", run_geom_time},
        {"coupling", run_coupling},
        {"coalescence", run_coalescence},
        {"limit-sim", run_limit_sim},
        {"report", run_report},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& names() {
    static const std::vector<std::string> n = [] {
        std::vector<std::string> v;
        for (auto& [k, f] : table()) v.push_back(k);
        return v;
    }();
    return n;
}

ExperimentConfig default_config(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    c.lambda = 0.5;
    c.seed = 20240601;
    if (name == "sigma") {
        c.n = 1;
        c.replicas = 1;
    } else if (name == "enumerate") {
        c.n = 12;
        c.replicas = 1000000;
        c.extras["lambdas"] = {0.3, 0.5, 0.7};
    } else if (name == "verify-identities") {
        c.n = 10000;
        c.replicas = 200;
    } else if (name == "urn-mixing") {
        c.n = 60;
        c.replicas = 1;
    } else if (name == "tail-bounds") {
        c.n = 20;
        c.replicas = 1;
    } else if (name == "grkt-single") {
        c.n = 100000;
        c.replicas = 10000;
        c.delta = 1e-4;
        c.points = {{-1.0, 1.0}};
        c.extras["ref_replicas"] = 100000;
    } else if (name == "tau-lim") {
        c.n = 100000;
        c.replicas = 10000;
        c.points = {{-1.0, 1.0}};
        c.extras["ref_replicas"] = 100000;
        c.extras["area_cap"] = 20.0;
    } else if (name == "grkt-joint") {
        c.n = 10000;
        c.replicas = 10000;
        c.delta = 1e-4;
        c.points = {{-1.0, 1.0}, {-1.0, 2.0}};
        c.extras["ref_replicas"] = 10000;
        c.extras["y_cap"] = 10.0;
    } else if (name == "exponent") {
        c.n = 1000000;
        c.replicas = 2000;
        for (int i = 0; i <= 6; ++i) c.t_grid.push_back(std::round(std::pow(10.0, 3.0 + 0.5 * i)));
    } else if (name == "geom-time") {
        c.n = 10000;
        c.replicas = 5000;
        c.extras["rate"] = 1.0;
        c.extras["ref_replicas"] = 4000;
    } else if (name == "coupling") {
        c.replicas = 4000;
        c.n = 1;
        c.extras["b"] = {50, 100, 200};
        c.extras["coupling_delta"] = 0.5;
    } else if (name == "coalescence") {
        c.replicas = 1000;
        c.n = 1;
        c.extras["b"] = 4;
    } else if (name == "limit-sim") {
        c.n = 1;
        c.replicas = 200;
        c.delta = 1e-3;
        c.points = {{-1.0, 1.0}, {-1.0, 2.0}, {0.0, 0.5}, {0.5, 1.0}};
    } else if (name == "report") {
        c.n = 1;
        c.replicas = 1;
    } else {
        throw io::ConfigError("unknown experiment " + name);
    }
    return c;
}

ExperimentConfig smoke_config(const std::string& name) {
    ExperimentConfig c = default_config(name);
    if (name == "enumerate") {
        c.replicas = 20000;
        c.extras["tv_max"] = 0.05;
    } else if (name == "verify-identities") {
        c.n = 1000;
        c.replicas = 10;
    } else if (name == "grkt-single" || name == "tau-lim") {
        c.n = 1000;
        c.replicas = 300;
        c.extras["ref_replicas"] = 300;
        c.delta = 1e-3;
    } else if (name == "grkt-joint") {
        c.n = 1000;
        c.replicas = 200;
        c.extras["ref_replicas"] = 200;
        c.extras["y_cap"] = 3.0;
        c.delta = 1e-3;
    } else if (name == "exponent") {
        c.replicas = 40;
        c.t_grid = {100, 316, 1000, 3162, 10000};
    } else if (name == "geom-time") {
        c.n = 100;
        c.replicas = 300;
        c.extras["ref_replicas"] = 40;
    } else if (name == "coupling") {
        c.replicas = 200;
    } else if (name == "coalescence") {
        c.replicas = 100;
    } else if (name == "limit-sim") {
        c.replicas = 10;
        c.extras["y_max"] = 2.0;
    }
    return c;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    io::validate(cfg);
    Runner fn = nullptr;
    for (auto& [k, f] : table())
        if (k == cfg.name) fn = f;
    if (!fn) throw io::ConfigError("unknown experiment " + cfg.name);
    ExperimentReport rep;
    rep.name = cfg.name;
    rep.params = io::to_json(cfg);
    rep.params.erase("out");
    Artifacts art{cfg, rep};
    try {
        fn(cfg, rep, art);
    } catch (const io::ConfigError&) {
        throw;
    } catch (const walk::BudgetExhausted& e) {
        rep.error = std::string("budget exhausted: ") + e.what();
    } catch (const std::exception& e) {
        rep.error = e.what();
    }
    rep.pass = rep.evaluate();
    if (!cfg.out.empty()) {
        std::string file = cfg.name + ".report.json";
        rep.artifacts.push_back(file);
        io::write_file(cfg.out, file, io::dump(rep));
    }
    return rep;
}

}  // namespace tsaw::experiments
