#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsaw/rng.hpp"

namespace tsaw::limit {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

// Fixed grid of width delta, or adaptive steps clamp((eps v)^2, delta, delta_max)
// where v is the smallest distance between distinct curves or to zero.
struct StepPolicy {
    double delta = 1e-4;
    bool adaptive = false;
    double eps = 0.1;
    double delta_max = 0.05;
};

struct ForwardPoint {
    double x = 0.0;
    double h = 0.0;
};

struct ForwardOptions {
    StepPolicy step;
    double y_end = 50.0;  // stop here even if curves are alive
    double area_cap = kNever;  // a curve stops counting once its area exceeds this
    std::vector<double> probes;  // y values; fixed mode rounds to the grid
    bool record = false;         // keep grid values
};

// Right branches of curves started at points[i], coalescing on contact and
// absorbed at 0 on [0, inf); reflected on (-inf, 0].
struct ForwardFamily {
    std::vector<ForwardPoint> points;
    std::vector<double> m_plus;  // absorption point, kNever if alive at the end
    std::vector<std::vector<double>> merge;  // merge[i][j], kNever if not merged
    std::vector<std::vector<int>> survivor;  // surviving stream index of each merged pair
    std::vector<double> area;                // area under curve i on [x_i, m_plus_i]
    std::vector<bool> area_censored;         // area exceeded the cap before absorption
    std::vector<std::vector<double>> probe_values;  // [curve][probe]; NaN before the curve starts
    std::vector<std::vector<double>> values;        // recorded values, values[i][t] at grid y_i + t delta
    double y_reached = 0.0;
    std::int64_t steps = 0;
};

// streams[i] drives curve i while it leads its group.
ForwardFamily simulate_forward_branches(const std::vector<ForwardPoint>& points, const ForwardOptions& opt,
                                        std::vector<Philox4x32>& streams);

struct LimitCurve {
    double x = 0.0;
    double h = 0.0;
    double delta = 0.0;
    std::vector<double> right;  // values at x + i delta
    std::vector<double> left;   // values at x - i delta
    double m_minus = -kNever;
    double m_plus = kNever;
    bool absorbed_left = false;
    bool absorbed_right = false;
    double right_area = 0.0;
    double left_area = 0.0;

    double value(double y) const;  // nearest grid point
};

class UnabsorbedCurve : public std::runtime_error {
public:
    UnabsorbedCurve(const std::string& what, double reached) : std::runtime_error(what), reached_(reached) {}
    double reached() const { return reached_; }

private:
    double reached_;
};

struct CurveOptions {
    double delta = 1e-4;
    double y_max = 50.0;  // domain cap |y - x| <= y_max
    bool record = true;
    bool with_left = true;
    double right_end = kNever;  // optional earlier stop for the right branch
};

LimitCurve simulate_single_curve(double x, double h, const CurveOptions& opt, Philox4x32& right_rng,
                                 Philox4x32& left_rng);

// Trapezoid area over [m_minus, m_plus]; throws UnabsorbedCurve if a branch
// hit the domain cap.
double inverse_local_time(const LimitCurve& c);

// Fixed-grid forward family; every x_i must sit on the grid min(x) + delta Z.
ForwardFamily simulate_forward_family(const std::vector<ForwardPoint>& points, double delta, double y_max,
                                      std::vector<Philox4x32>& streams, bool record = true);

// Both branches in adaptive mode, keeping only what the experiments need.
struct CurveSummaryOptions {
    StepPolicy step{1e-4, true, 0.1, 0.05};
    double y_cap = 1e4;        // per-branch spatial cap
    double area_cap = kNever;  // censoring level for the total area
    std::vector<double> probes;
};

struct CurveSummary {
    double area = 0.0;       // min(true area, area_cap) when censored
    bool censored = false;   // total area exceeded area_cap
    bool capped = false;     // a branch reached y_cap alive below the area cap
    double m_minus = -kNever;
    double m_plus = kNever;
    std::vector<double> probe_values;
};

CurveSummary simulate_curve_summary(double x, double h, const CurveSummaryOptions& opt, Philox4x32& right_rng,
                                    Philox4x32& left_rng);

// Monte Carlo estimate of the density of (X(gamma), H(gamma)) at (a, h) for
// gamma ~ Exp(rate): E[rate exp(-rate t_{a,h})].
struct DensityCell {
    double a = 0.0;
    double h = 0.0;
    double density = 0.0;
    double se = 0.0;
};

struct DensityOptions {
    double rate = 1.0;
    std::int64_t replicas = 1000;
    std::uint64_t seed = 0;
    StepPolicy step{1e-4, true, 0.1, 0.05};
    double tail_cut = 40.0;  // censor areas beyond tail_cut / rate
};

std::vector<DensityCell> geometric_time_density(const std::vector<double>& a_grid, const std::vector<double>& h_grid,
                                                const DensityOptions& opt);

// Probability of the bin [a0,a1] x [h0,h1], sampling (a, h) uniformly inside it.
struct BinEstimate {
    double probability = 0.0;
    double se = 0.0;
};

BinEstimate geometric_bin_probability(double a0, double a1, double h0, double h1, const DensityOptions& opt,
                                      std::uint64_t bin_id);

}  // namespace tsaw::limit
