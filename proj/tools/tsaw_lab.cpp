// Experiment runner. Exit status 0 iff every gate of the invoked experiment
// passes; 2 on a bad configuration.
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "tsaw/experiments.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<double> lambda;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> replicas;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<std::string> out;
    std::optional<std::uint64_t> budget;
    std::vector<std::string> extras;
    bool smoke = false;
    bool print_config = false;
    bool quiet = false;
};

tsaw::io::ExperimentConfig build_config(const std::string& name, const Flags& f) {
    using namespace tsaw;
    io::ExperimentConfig c = f.smoke ? experiments::smoke_config(name) : experiments::default_config(name);
    if (!f.config.empty()) c = io::load_config(f.config, c);
    c.name = name;
    if (f.lambda) c.lambda = *f.lambda;
    if (f.n) c.n = *f.n;
    if (f.replicas) c.replicas = *f.replicas;
    if (f.seed) c.seed = *f.seed;
    if (f.delta) c.delta = *f.delta;
    if (f.out) c.out = *f.out;
    if (f.budget) c.budget = *f.budget;
    for (auto& kv : f.extras) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw io::ConfigError("--set expects key=value, got " + kv);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        try {
            c.extras[key] = io::Json::parse(val);
        } catch (const nlohmann::json::parse_error&) {
            c.extras[key] = val;
        }
    }
    io::validate(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tsaw_lab: self-repelling walk experiments"};
    app.require_subcommand(1);
    Flags f;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : tsaw::experiments::names()) {
        CLI::App* s = app.add_subcommand(name, "run the " + name + " experiment");
        s->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
        s->add_option("--lambda", f.lambda, "edge-repulsion parameter in (0,1)");
        s->add_option("--n", f.n, "scale parameter");
        s->add_option("--replicas", f.replicas, "number of replicas");
        s->add_option("--seed", f.seed, "master seed");
        s->add_option("--delta", f.delta, "grid step of the limit simulator");
        s->add_option("--out", f.out, "directory for the report and CSV files");
        s->add_option("--budget", f.budget, "walk step cap per replica");
        s->add_option("--set", f.extras, "experiment-specific key=value (value parsed as JSON)");
        s->add_flag("--smoke", f.smoke, "start from the small smoke-test configuration");
        s->add_flag("--print-config", f.print_config, "print the resolved config and exit");
        s->add_flag("--quiet", f.quiet, "do not echo the report");
        subs[name] = s;
    }
    CLI11_PARSE(app, argc, argv);

    std::string name;
    for (auto& [k, s] : subs)
        if (s->parsed()) name = k;
    try {
        auto cfg = build_config(name, f);
        if (f.print_config) {
            std::cout << tsaw::io::to_json(cfg).dump(2) << "\n";
            return 0;
        }
        auto rep = tsaw::experiments::run_experiment(cfg);
        if (!f.quiet) std::cout << tsaw::io::dump(rep);
        std::cerr << name << ": " << (rep.pass ? "PASS" : "FAIL") << "\n";
        return rep.pass ? 0 : 1;
    } catch (const tsaw::io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
