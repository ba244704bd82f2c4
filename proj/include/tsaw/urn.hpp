#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tsaw/rng.hpp"
#include "tsaw/urn_variant.hpp"

namespace tsaw::urn {

inline constexpr double kTailTolerance = 1e-18;
inline constexpr double kDefectTolerance = 1e-12;

// P(up | state i) for the given variant.
inline double urn_transition_prob(UrnVariant v, std::int64_t i, double lambda) {
    // a/(1+a) with a = lambda^e, written to stay finite for large |e|
    double e = static_cast<double>(2 * i + exponent_shift(v));
    return 1.0 / (1.0 + std::pow(lambda, -e));
}

class DiscrepancyChain {
public:
    DiscrepancyChain() = default;
    DiscrepancyChain(double lambda, UrnVariant v, std::int64_t i0)
        : lambda_(lambda), variant_(v), state_(i0) {}

    // One draw; true for red (up-step).
    template <class G>
    bool draw(G& g) {
        bool red = uniform01(g) < urn_transition_prob(variant_, state_, lambda_);
        state_ += red ? 1 : -1;
        ++draws_;
        if (!red) ++blues_;
        return red;
    }

    // Draws until blue_count reaches `blues`; returns the state then.
    template <class G>
    std::int64_t run_until_blues(std::uint64_t blues, G& g, std::uint64_t budget = std::uint64_t(1) << 40) {
        while (blues_ < blues) {
            if (draws_ >= budget) throw std::runtime_error("urn draw budget exhausted");
            draw(g);
        }
        return state_;
    }

    double lambda() const { return lambda_; }
    UrnVariant variant() const { return variant_; }
    std::int64_t state() const { return state_; }
    std::uint64_t draws() const { return draws_; }
    std::uint64_t blue_count() const { return blues_; }

private:
    double lambda_ = 0.5;
    UrnVariant variant_ = UrnVariant::interior;
    std::int64_t state_ = 0;
    std::uint64_t draws_ = 0;
    std::uint64_t blues_ = 0;
};

// Smallest M with lambda^{M^2} < tol.
std::int64_t auto_truncation(double lambda, double tol = kTailTolerance);

// Laws on [-M, M]; index x + M.
struct StationaryLaws {
    double lambda = 0.5;
    std::int64_t M = 0;
    std::vector<double> pi;        // D at blue draws, interior
    std::vector<double> rho;       // D at all draws, interior
    std::vector<double> pi_tilde;  // origin chain at blue draws
    double sigma2 = 0.0;

    double at(const std::vector<double>& v, std::int64_t x) const {
        return (x < -M || x > M) ? 0.0 : v[static_cast<std::size_t>(x + M)];
    }
    // Stationary law of the blue-time chain for a variant.
    const std::vector<double>& blue_law(UrnVariant v) const {
        return v == UrnVariant::interior ? pi : pi_tilde;
    }
};

StationaryLaws stationary_laws(double lambda, std::int64_t M, double tol = kTailTolerance);
double sigma_squared(double lambda);

// Law of D_{beta_n} on [-M, M] (index x + M) with the mass clipped away.
struct DBetaLaw {
    std::int64_t M = 0;
    std::vector<double> p;
    double mass_defect = 0.0;

    double at(std::int64_t x) const {
        return (x < -M || x > M) ? 0.0 : p[static_cast<std::size_t>(x + M)];
    }
    double total() const;
};

// One-blue kernel K(i, j) = P_i(D_{beta_1} = j) on [-M, M].
class BlueKernel {
public:
    BlueKernel(double lambda, UrnVariant v, std::int64_t M);
    // Pushes a row vector one blue draw forward; clipped mass added to *lost.
    std::vector<double> apply(const std::vector<double>& row, double* lost) const;
    std::int64_t M() const { return M_; }
    double entry(std::int64_t i, std::int64_t j) const {
        return K_[static_cast<std::size_t>((i + M_) * W_ + (j + M_))];
    }
    double row_defect(std::int64_t i) const { return defect_[static_cast<std::size_t>(i + M_)]; }

private:
    std::int64_t M_;
    std::int64_t W_;
    std::vector<double> K_;
    std::vector<double> defect_;
};

// Throws std::runtime_error if the clipped mass exceeds tol.
DBetaLaw exact_D_beta_dist(double lambda, UrnVariant v, std::int64_t i0, std::int64_t n,
                           std::int64_t M, double tol = kDefectTolerance);

double tv_vectors(const std::vector<double>& a, const std::vector<double>& b);

// (n, TV(law of D_{beta_n}, stationary)) for n = 0..n_max.
std::vector<std::pair<std::int64_t, double>> tv_mixing_curve(double lambda, UrnVariant v,
                                                             std::int64_t i0, std::int64_t n_max,
                                                             std::int64_t M);

struct TailRow {
    std::int64_t y = 0;
    std::int64_t n = 0;
    double ratio = 0.0;  // sup over the swept x
    double bound = 0.0;
};

struct TailReport {
    std::vector<TailRow> right;  // y >= 0: P(y+1)/P(y) vs lambda^{2y+1}/(1-lambda)
    std::vector<TailRow> left;   // y <= 0: P(y-1)/P(y) vs lambda+lambda^2
    std::int64_t checks = 0;
    std::int64_t violations = 0;
    double worst_right = 0.0;  // max ratio/bound
    double worst_left = 0.0;
    bool pass() const { return violations == 0; }
};

// Sweeps starting points x in [-x_span, x_span] (x <= y on the right tail).
TailReport tail_ratio_check(double lambda, std::int64_t n_max, std::int64_t y_max,
                            std::int64_t x_span, double rel_slack = 1e-12);

// D_{beta_n} by running the chain.
template <class G>
std::int64_t sample_D_beta(double lambda, UrnVariant v, std::int64_t i0, std::int64_t n, G& g) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    DiscrepancyChain c(lambda, v, i0);
    return c.run_until_blues(static_cast<std::uint64_t>(n), g);
}

// Rubin's construction: red clocks of rates lambda^{2(l+i-1)-1}, blue clocks
// of rates lambda^{2(i-1)}, i = 1..m. True if the m-th red comes first.
template <class G>
bool rubin_red_before_blue(double lambda, std::int64_t ell, std::int64_t m, G& g) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const double ll = std::log(lambda);
    double red = 0.0, blue = 0.0;
    for (std::int64_t i = 1; i <= m; ++i) {
        red += exponential1(g) * std::exp(-ll * static_cast<double>(2 * (ell + i - 1) - 1));
        blue += exponential1(g) * std::exp(-ll * static_cast<double>(2 * (i - 1)));
    }
    return red < blue;
}

// Exact P_l(D_{beta_m} >= l), the event sampled by rubin_red_before_blue.
double exact_red_before_blue(double lambda, std::int64_t ell, std::int64_t m);

// TSAW driven by one urn chain per site.
class UrnDrivenWalk {
public:
    explicit UrnDrivenWalk(double lambda);

    template <class G>
    bool step(G& g) {
        DiscrepancyChain& c = chain(x_);
        bool right = c.draw(g);
        x_ += right ? 1 : -1;
        ++n_;
        return right;
    }

    std::int64_t x() const { return x_; }
    std::uint64_t n() const { return n_; }
    // Chain of site k (created with its initial state on first use).
    DiscrepancyChain& chain(std::int64_t k);
    // Initial discrepancy for site k: 0 for k >= 1, 1 for k <= -1, 0 at the origin.
    static std::int64_t initial_state(std::int64_t k) { return k <= -1 ? 1 : 0; }
    static UrnVariant site_variant(std::int64_t k) {
        return k == 0 ? UrnVariant::origin : UrnVariant::interior;
    }

private:
    double lambda_;
    std::int64_t x_ = 0;
    std::uint64_t n_ = 0;
    std::int64_t base_ = 0;
    std::vector<DiscrepancyChain> sites_;
    std::vector<bool> init_;
};

template <class G>
bool urn_driven_walk_step(UrnDrivenWalk& w, G& g) {
    return w.step(g);
}

}  // namespace tsaw::urn
