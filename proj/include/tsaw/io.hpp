#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tsaw/urn.hpp"

namespace tsaw::io {

using Json = nlohmann::ordered_json;

// One gate or informational number of an experiment. relation is one of
// "<", "<=", ">", ">=", "==", or "info" (never gates).
struct Statistic {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation = "info";
    bool pass = true;
};

Statistic make_statistic(const std::string& name, double value, const std::string& relation, double threshold);
Statistic info(const std::string& name, double value);

struct ExperimentReport {
    std::string name;
    Json params = Json::object();
    std::vector<Statistic> statistics;
    std::vector<std::string> artifacts;  // file names relative to the output directory
    std::string error;                   // set when the run stopped early
    bool pass = false;

    void gate(const std::string& stat, double value, const std::string& relation, double threshold) {
        statistics.push_back(make_statistic(stat, value, relation, threshold));
    }
    void note(const std::string& stat, double value) { statistics.push_back(info(stat, value)); }
    const Statistic* find(const std::string& stat) const;
    // All gates pass and no error.
    bool evaluate() const;
};

Json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const Json& j);
// Two-space indented JSON with a trailing newline; the byte form compared
// by the determinism checks.
std::string dump(const ExperimentReport& r);

struct ExperimentConfig {
    std::string name;
    double lambda = 0.5;
    std::int64_t n = 1000;
    std::int64_t replicas = 100;
    std::uint64_t seed = 1;
    double delta = 1e-4;
    std::vector<std::pair<double, double>> points;  // (x, h)
    std::vector<double> t_grid;
    std::string out;                 // artifact directory; empty writes nothing
    std::uint64_t budget = std::uint64_t(1) << 40;  // walk step cap per replica
    Json extras = Json::object();    // experiment-specific knobs

    double extra(const std::string& key, double fallback) const;
    std::vector<double> extra_list(const std::string& key, const std::vector<double>& fallback) const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws ConfigError on out-of-range fields.
void validate(const ExperimentConfig& c);
Json to_json(const ExperimentConfig& c);
// Missing keys keep the values already in base.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
void save_config(const std::string& path, const ExperimentConfig& c);

// Shortest text that reads back to the same double.
std::string format_double(double v);

// CSV with a mandatory header row, '.' decimals, '\n' row ends.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);

private:
    std::ostream& os_;
    std::size_t width_;
};

void write_stationary_csv(std::ostream& os, const urn::StationaryLaws& st);
void write_mixing_csv(std::ostream& os, const std::vector<std::pair<std::int64_t, double>>& curve);
void write_tails_csv(std::ostream& os, const urn::TailReport& r);

struct DensityRow {
    double a = 0.0;
    double h = 0.0;
    double density = 0.0;
    double se = 0.0;
};
void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows);
void write_curve_csv(std::ostream& os, const std::vector<std::pair<double, double>>& points);

struct CurveMetadata {
    double x = 0.0;
    double h = 0.0;
    std::int64_t n = 0;
    double sigma = 0.0;
    double tau_n = 0.0;
    double mu_minus = 0.0;
    double mu_plus = 0.0;
    std::uint64_t seed = 0;
};
Json to_json(const CurveMetadata& m);

// Writes text to dir/name, creating dir if needed.
void write_file(const std::string& dir, const std::string& name, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace tsaw::io
