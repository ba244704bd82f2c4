#include "tsaw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/statistics/linear_regression.hpp>

namespace tsaw::stats {

Ecdf::Ecdf(std::vector<double> samples) : xs_(std::move(samples)) {
    if (xs_.empty()) throw std::invalid_argument("empty sample");
    for (double x : xs_)
        if (std::isnan(x)) throw std::invalid_argument("NaN in sample");
    std::sort(xs_.begin(), xs_.end());
}

double Ecdf::operator()(double t) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
    return static_cast<double>(it - xs_.begin()) / static_cast<double>(xs_.size());
}

double kolmogorov_q(double t) {
    if (t < 1e-3) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        double term = sign * 2.0 * std::exp(-2.0 * j * j * t * t);
        sum += term;
        if (std::abs(term) <= 1e-12 * std::abs(sum) || std::abs(term) <= 1e-300) return std::clamp(sum, 0.0, 1.0);
        sign = -sign;
    }
    return 1.0;  // series did not settle: t is tiny
}

KsResult ks_two_sample(const Ecdf& a, const Ecdf& b) {
    const auto& x = a.sorted();
    const auto& y = b.sorted();
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double en = std::sqrt(na * nb / (na + nb));
    return {d, d == 0.0 ? 1.0 : kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    return ks_two_sample(Ecdf(std::move(a)), Ecdf(std::move(b)));
}

double tv_distance(const ExactLaw& p, const ExactLaw& q) {
    std::set<Outcome> keys;
    for (auto& [k, v] : p.p) keys.insert(k);
    for (auto& [k, v] : q.p) keys.insert(k);
    double s = 0.0;
    for (auto& k : keys) s += std::abs(p.prob(k) - q.prob(k));
    return 0.5 * s;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    double h = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    double a = v[lo];
    if (lo + 1 >= v.size()) return a;
    double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
    return a + (h - static_cast<double>(lo)) * (b - a);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("need at least 3 paired points");
    auto [c0, c1, r2] = boost::math::statistics::simple_ordinary_least_squares_with_R_squared(x, y);
    LinearFit f;
    f.intercept = c0;
    f.slope = c1;
    f.r2 = std::clamp(r2, 0.0, 1.0);
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    for (double v : x) mx += v;
    mx /= n;
    double sxx = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        double e = y[i] - (c0 + c1 * x[i]);
        sse += e * e;
    }
    f.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
    return f;
}

ExponentFit exponent_fit(const std::vector<double>& m_grid, const std::vector<std::vector<double>>& samples,
                         double q) {
    if (m_grid.size() != samples.size()) throw std::invalid_argument("grid and sample lists differ in length");
    if (m_grid.size() < 4) throw std::invalid_argument("need at least 4 grid points");
    auto [mn, mx] = std::minmax_element(m_grid.begin(), m_grid.end());
    if (!(*mn > 0.0) || std::log10(*mx / *mn) < 2.0 - 1e-9)
        throw std::invalid_argument("grid must be positive and span at least 2 decades");
    ExponentFit out;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        std::vector<double> a;
        a.reserve(samples[i].size());
        for (double v : samples[i]) a.push_back(std::abs(v));
        double qv = quantile(std::move(a), q);
        if (!(qv > 0.0)) throw std::invalid_argument("degenerate quantile at grid point " + std::to_string(i));
        out.quantiles.push_back(qv);
        lx.push_back(std::log(m_grid[i]));
        ly.push_back(std::log(qv));
    }
    LinearFit f = linear_fit(lx, ly);
    out.alpha = f.slope;
    out.intercept = f.intercept;
    out.r2 = f.r2;
    out.se = f.slope_se;
    return out;
}

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe m;
    if (v.empty()) return m;
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / static_cast<double>(v.size());
    double s2 = 0.0;
    for (double x : v) s2 += (x - m.mean) * (x - m.mean);
    if (v.size() > 1) m.se = std::sqrt(s2 / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    return m;
}

}  // namespace tsaw::stats
