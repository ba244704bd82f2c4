// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
//   acceptance [--out DIR] [--only 1,5,12] [--smoke]
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "tsaw/experiments.hpp"
#include "tsaw/parallel.hpp"

using namespace tsaw;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string out_dir = "acceptance_out";
bool smoke = false;
std::map<std::string, io::ExperimentReport> cache;

const io::ExperimentReport& run(const std::string& name) {
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    auto c = smoke ? experiments::smoke_config(name) : experiments::default_config(name);
    c.out = out_dir + "/main";
    auto t0 = std::chrono::steady_clock::now();
    auto r = experiments::run_experiment(c);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "  [%s] %s in %.1f s%s%s\n", name.c_str(), r.pass ? "pass" : "fail", secs,
                 r.error.empty() ? "" : ": ", r.error.c_str());
    for (auto& s : r.statistics)
        if (!s.pass) std::fprintf(stderr, "    gate %s = %.6g (%s %.6g)\n", s.name.c_str(), s.value, s.relation.c_str(), s.threshold);
    return cache.emplace(name, std::move(r)).first->second;
}

std::string val(const io::ExperimentReport& r, const std::string& stat) {
    const io::Statistic* s = r.find(stat);
    if (!s) return stat + "=missing";
    std::ostringstream ss;
    ss << stat << "=" << s->value;
    return ss.str();
}

Outcome single(const std::string& name, const std::vector<std::string>& show) {
    const auto& r = run(name);
    Outcome o{r.pass, ""};
    for (auto& s : show) o.detail += (o.detail.empty() ? "" : " ") + val(r, s);
    if (!r.error.empty()) o.detail += " error: " + r.error;
    return o;
}

Outcome criterion_identities() {
    // exact identities wherever walks are run, with the dedicated experiment
    // supplying most of the sampled checks
    double checks = 0, violations = 0;
    bool ok = true;
    for (const char* name : {"verify-identities", "enumerate", "exponent", "geom-time"}) {
        const auto& r = run(name);
        const io::Statistic* c = r.find("identity_checks");
        const io::Statistic* v = r.find("identity_violations");
        if (!c || !v || !r.error.empty()) {
            ok = false;
            continue;
        }
        checks += c->value;
        violations += v->value;
    }
    ok = ok && run("verify-identities").pass && violations == 0 && checks >= (smoke ? 100 : 10000);
    std::ostringstream ss;
    ss << "checks=" << checks << " violations=" << violations << " "
       << val(run("verify-identities"), "duality_checks");
    return {ok, ss.str()};
}

Outcome criterion_coupling() {
    const auto& a = run("coupling");
    const auto& b = run("coalescence");
    return {a.pass && b.pass, val(a, "p_gamma_beyond_largest_b") + " " + val(a, "exact_p_gamma_within_b200") + " " +
                                  val(b, "p_coalesced_gap1") + " " + val(b, "p_coalesced_gap4")};
}

bool same_outputs(const io::ExperimentReport& a, const std::string& da, const io::ExperimentReport& b,
                  const std::string& db) {
    if (io::dump(a) != io::dump(b) || a.artifacts != b.artifacts) return false;
    for (auto& f : a.artifacts)
        if (io::read_file(da + "/" + f) != io::read_file(db + "/" + f)) return false;
    return true;
}

Outcome criterion_determinism() {
    // every experiment at small scale under 1 and 3 workers, plus the
    // cheap full-scale ones re-run against the main results
    int checked = 0, differ = 0;
    std::string bad;
    for (const auto& name : experiments::names()) {
        if (name == "report") continue;
        auto c = experiments::smoke_config(name);
        std::string d1 = out_dir + "/det_w1", d3 = out_dir + "/det_w3";
        set_worker_count(1);
        c.out = d1;
        auto r1 = experiments::run_experiment(c);
        set_worker_count(3);
        c.out = d3;
        auto r3 = experiments::run_experiment(c);
        set_worker_count(0);
        ++checked;
        if (!same_outputs(r1, d1, r3, d3)) {
            ++differ;
            bad += " " + name;
        }
    }
    for (const char* name : {"sigma", "urn-mixing", "tail-bounds", "verify-identities"}) {
        const auto& first = run(name);
        auto c = smoke ? experiments::smoke_config(name) : experiments::default_config(name);
        c.out = out_dir + "/rerun";
        set_worker_count(2);
        auto again = experiments::run_experiment(c);
        set_worker_count(0);
        ++checked;
        if (!same_outputs(first, out_dir + "/main", again, c.out)) {
            ++differ;
            bad += std::string(" ") + name + "(rerun)";
        }
    }
    std::ostringstream ss;
    ss << "runs_compared=" << checked << " differing=" << differ << bad;
    return {differ == 0, ss.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--out" && i + 1 < argc)
            out_dir = argv[++i];
        else if (a == "--smoke")
            smoke = true;
        else if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
        } else {
            std::cerr << "usage: acceptance [--out DIR] [--only 1,2,...] [--smoke]\n";
            return 2;
        }
    }
    std::filesystem::remove_all(out_dir);
    std::filesystem::create_directories(out_dir);

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, [] { return single("enumerate", {"tv_walk_lambda_0.3", "tv_walk_lambda_0.5", "tv_walk_lambda_0.7",
                                              "tv_urn_lambda_0.3", "tv_urn_lambda_0.5", "tv_urn_lambda_0.7"}); }},
        {2, criterion_identities},
        {3, [] { return single("sigma", {"sigma2", "truncation_change", "detailed_balance_residual"}); }},
        {4, [] { return single("urn-mixing", {"tv_at_n", "first_n_below_target", "log_tv_r2"}); }},
        {5, [] { return single("tail-bounds", {"checks", "violations", "worst_right", "worst_left"}); }},
        {6, [] {
             return single("grkt-single", {"y_-0.5_ks_p", "y_0_ks_p", "y_0.5_ks_p", "y_1_ks_p", "absorbed_discrete",
                                           "absorbed_reference", "absorbed_diff"});
         }},
        {7, [] {
             return single("tau-lim", {"tau_ks_p", "restricted_mean_discrete", "restricted_mean_reference",
                                       "restricted_mean_rel_diff", "censored_discrete"});
         }},
        {8, [] {
             return single("grkt-joint", {"mu_plus_0_ks_p", "mu_plus_1_ks_p", "merge_plus_0_ks_p",
                                          "ordering_violations_discrete", "ordering_violations_reference"});
         }},
        {9, [] { return single("exponent", {"alpha", "alpha_se", "r2"}); }},
        {10, [] { return single("geom-time", {"max_bin_discrepancy", "mass_in_bins_empirical"}); }},
        {11, criterion_coupling},
        {12, criterion_determinism},
    };
    bool all = true;
    for (auto& [id, fn] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
