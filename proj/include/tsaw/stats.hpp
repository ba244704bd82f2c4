#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tsaw/oracle.hpp"

namespace tsaw::stats {

class Ecdf {
public:
    explicit Ecdf(std::vector<double> samples);
    double operator()(double t) const;  // fraction of samples <= t
    const std::vector<double>& sorted() const { return xs_; }
    std::size_t size() const { return xs_.size(); }

private:
    std::vector<double> xs_;
};

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Kolmogorov distribution tail Q(t) = 2 sum (-1)^{j-1} exp(-2 j^2 t^2).
double kolmogorov_q(double t);

KsResult ks_two_sample(const Ecdf& a, const Ecdf& b);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// One-sample KS against a continuous cdf.
template <class Cdf>
KsResult ks_one_sample(std::vector<double> a, Cdf cdf) {
    if (a.empty()) throw std::invalid_argument("empty sample");
    Ecdf e(std::move(a));
    const auto& xs = e.sorted();
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    double en = std::sqrt(n);
    return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

double tv_distance(const ExactLaw& p, const ExactLaw& q);

// Type 7 sample quantile.
double quantile(std::vector<double> v, double q);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ExponentFit {
    double alpha = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double se = 0.0;
    std::vector<double> quantiles;
};

// Fit log q-quantile of |X_m| against log m. samples[i] belongs to m_grid[i].
ExponentFit exponent_fit(const std::vector<double>& m_grid, const std::vector<std::vector<double>>& samples, double q);

// Per-test floor divided by the number of tests.
inline double bonferroni(double floor, std::size_t tests) { return floor / static_cast<double>(tests ? tests : 1); }

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v);

}  // namespace tsaw::stats
