#include "tsaw/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tsaw::io {

Statistic make_statistic(const std::string& name, double value, const std::string& relation, double threshold) {
    Statistic s{name, value, threshold, relation, false};
    if (relation == "<")
        s.pass = value < threshold;
    else if (relation == "<=")
        s.pass = value <= threshold;
    else if (relation == ">")
        s.pass = value > threshold;
    else if (relation == ">=")
        s.pass = value >= threshold;
    else if (relation == "==")
        s.pass = value == threshold;
    else
        throw std::invalid_argument("unknown relation " + relation);
    return s;
}

Statistic info(const std::string& name, double value) { return Statistic{name, value, 0.0, "info", true}; }

const Statistic* ExperimentReport::find(const std::string& stat) const {
    for (auto& s : statistics)
        if (s.name == stat) return &s;
    return nullptr;
}

bool ExperimentReport::evaluate() const {
    if (!error.empty()) return false;
    for (auto& s : statistics)
        if (!s.pass) return false;
    return true;
}

namespace {

Json number(double v) {
    // JSON has no NaN or infinity
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double read_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    std::string s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::invalid_argument("not a number: " + s);
}

}  // namespace

Json to_json(const ExperimentReport& r) {
    Json j;
    j["name"] = r.name;
    j["params"] = r.params;
    Json stats = Json::array();
    for (auto& s : r.statistics) {
        Json e;
        e["name"] = s.name;
        e["value"] = number(s.value);
        e["threshold"] = number(s.threshold);
        e["relation"] = s.relation;
        e["pass"] = s.pass;
        stats.push_back(e);
    }
    j["statistics"] = stats;
    j["artifacts"] = r.artifacts;
    if (!r.error.empty()) j["error"] = r.error;
    j["pass"] = r.pass;
    return j;
}

ExperimentReport report_from_json(const Json& j) {
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.params = j.value("params", Json::object());
    for (auto& e : j.at("statistics")) {
        Statistic s;
        s.name = e.at("name").get<std::string>();
        s.value = read_number(e.at("value"));
        s.threshold = read_number(e.at("threshold"));
        s.relation = e.at("relation").get<std::string>();
        s.pass = e.at("pass").get<bool>();
        r.statistics.push_back(s);
    }
    if (j.contains("artifacts")) r.artifacts = j["artifacts"].get<std::vector<std::string>>();
    r.error = j.value("error", std::string());
    r.pass = j.at("pass").get<bool>();
    return r;
}

std::string dump(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

double ExperimentConfig::extra(const std::string& key, double fallback) const {
    if (!extras.contains(key)) return fallback;
    return read_number(extras[key]);
}

std::vector<double> ExperimentConfig::extra_list(const std::string& key, const std::vector<double>& fallback) const {
    if (!extras.contains(key)) return fallback;
    std::vector<double> v;
    for (auto& e : extras[key]) v.push_back(read_number(e));
    return v;
}

void validate(const ExperimentConfig& c) {
    if (c.name.empty()) throw ConfigError("experiment name missing");
    if (!(c.lambda > 0.0 && c.lambda < 1.0)) throw ConfigError("lambda must lie in (0,1)");
    if (c.n < 1) throw ConfigError("n must be >= 1");
    if (c.replicas < 1) throw ConfigError("replicas must be >= 1");
    if (!(c.delta > 0.0 && c.delta <= 1.0)) throw ConfigError("delta must lie in (0,1]");
    if (c.budget < 1) throw ConfigError("budget must be >= 1");
    for (auto& [x, h] : c.points)
        if (!std::isfinite(x) || !(h >= 0.0) || !std::isfinite(h)) throw ConfigError("points need finite x and h >= 0");
    for (double t : c.t_grid)
        if (!std::isfinite(t)) throw ConfigError("t grid entries must be finite");
    if (!c.extras.is_object()) throw ConfigError("extras must be an object");
}

Json to_json(const ExperimentConfig& c) {
    Json j;
    j["name"] = c.name;
    j["lambda"] = c.lambda;
    j["n"] = c.n;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    j["delta"] = c.delta;
    Json pts = Json::array();
    for (auto& [x, h] : c.points) pts.push_back(Json::array({x, h}));
    j["points"] = pts;
    j["t_grid"] = c.t_grid;
    j["out"] = c.out;
    j["budget"] = c.budget;
    j["extras"] = c.extras;
    return j;
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        for (auto& [key, v] : j.items()) {
            if (key == "name")
                c.name = v.get<std::string>();
            else if (key == "lambda")
                c.lambda = v.get<double>();
            else if (key == "n")
                c.n = v.get<std::int64_t>();
            else if (key == "replicas")
                c.replicas = v.get<std::int64_t>();
            else if (key == "seed")
                c.seed = v.get<std::uint64_t>();
            else if (key == "delta")
                c.delta = v.get<double>();
            else if (key == "points") {
                c.points.clear();
                for (auto& p : v) c.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            } else if (key == "t_grid")
                c.t_grid = v.get<std::vector<double>>();
            else if (key == "out")
                c.out = v.get<std::string>();
            else if (key == "budget")
                c.budget = v.get<std::uint64_t>();
            else if (key == "extras") {
                for (auto& [ek, ev] : v.items()) c.extras[ek] = ev;
            } else
                throw ConfigError("unknown config key " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(j, std::move(base));
}

void save_config(const std::string& path, const ExperimentConfig& c) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << to_json(c).dump(2) << "\n";
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != width_) throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
    os_ << "\n";
}

void write_stationary_csv(std::ostream& os, const urn::StationaryLaws& st) {
    CsvWriter w(os, {"x", "pi", "rho", "pi_tilde"});
    for (std::int64_t x = -st.M; x <= st.M; ++x)
        w.row({static_cast<double>(x), st.at(st.pi, x), st.at(st.rho, x), st.at(st.pi_tilde, x)});
}

void write_mixing_csv(std::ostream& os, const std::vector<std::pair<std::int64_t, double>>& curve) {
    CsvWriter w(os, {"n", "tv"});
    for (auto& [n, tv] : curve) w.row({static_cast<double>(n), tv});
}

void write_tails_csv(std::ostream& os, const urn::TailReport& r) {
    CsvWriter w(os, {"y", "n", "ratio", "bound"});
    for (auto& t : r.left) w.row({static_cast<double>(t.y), static_cast<double>(t.n), t.ratio, t.bound});
    for (auto& t : r.right) w.row({static_cast<double>(t.y), static_cast<double>(t.n), t.ratio, t.bound});
}

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows) {
    CsvWriter w(os, {"a", "h", "density", "se"});
    for (auto& r : rows) w.row({r.a, r.h, r.density, r.se});
}

void write_curve_csv(std::ostream& os, const std::vector<std::pair<double, double>>& points) {
    CsvWriter w(os, {"y", "value"});
    for (auto& [y, v] : points) w.row({y, v});
}

Json to_json(const CurveMetadata& m) {
    Json j;
    j["x"] = m.x;
    j["h"] = m.h;
    j["n"] = m.n;
    j["sigma"] = m.sigma;
    j["tau_n"] = m.tau_n;
    j["mu_minus"] = m.mu_minus;
    j["mu_plus"] = m.mu_plus;
    j["seed"] = m.seed;
    return j;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + dir + "/" + name);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace tsaw::io
