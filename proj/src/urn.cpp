#include "tsaw/urn.hpp"

#include <algorithm>
#include <string>

namespace tsaw::urn {

std::int64_t auto_truncation(double lambda, double tol) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
    std::int64_t M = 1;
    while (std::pow(lambda, static_cast<double>(M * M)) >= tol) ++M;
    return M;
}

namespace {

std::vector<double> normalized(std::vector<double> w) {
    // sum smallest terms first
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    double s = 0.0;
    for (double v : sorted) s += v;
    for (double& v : w) v /= s;
    return w;
}

}  // namespace

StationaryLaws stationary_laws(double lambda, std::int64_t M, double tol) {
    if (M < 1) throw std::invalid_argument("truncation M must be positive");
    if (!(std::pow(lambda, static_cast<double>(M * M)) < tol))
        throw std::invalid_argument("truncation M=" + std::to_string(M) +
                                    " too small: lambda^{M^2} not below tolerance");
    StationaryLaws s;
    s.lambda = lambda;
    s.M = M;
    const double ll = std::log(lambda);
    std::vector<double> pi, rho, pt;
    for (std::int64_t x = -M; x <= M; ++x) {
        double xd = static_cast<double>(x);
        pi.push_back(std::exp(ll * xd * xd));
        rho.push_back(std::exp(ll * xd * (xd - 2.0)) * (1.0 + std::exp(ll * (2.0 * xd - 1.0))));
        pt.push_back(std::exp(ll * (xd + 1.0) * xd));
    }
    // pi symmetric by construction: mirror the computed half
    for (std::int64_t x = 1; x <= M; ++x)
        pi[static_cast<std::size_t>(M - x)] = pi[static_cast<std::size_t>(M + x)];
    s.pi = normalized(pi);
    s.rho = normalized(rho);
    s.pi_tilde = normalized(pt);
    double v = 0.0;
    for (std::int64_t x = M; x >= 1; --x) v += 2.0 * static_cast<double>(x * x) * s.at(s.pi, x);
    s.sigma2 = v;
    return s;
}

double sigma_squared(double lambda) {
    return stationary_laws(lambda, auto_truncation(lambda)).sigma2;
}

double DBetaLaw::total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

BlueKernel::BlueKernel(double lambda, UrnVariant v, std::int64_t M)
    : M_(M), W_(2 * M + 1), K_(static_cast<std::size_t>(W_ * W_), 0.0),
      defect_(static_cast<std::size_t>(W_), 0.0) {
    if (M < 1) throw std::invalid_argument("truncation M must be positive");
    std::vector<double> up(static_cast<std::size_t>(W_));
    for (std::int64_t i = -M; i <= M; ++i) up[static_cast<std::size_t>(i + M)] = urn_transition_prob(v, i, lambda);
    for (std::int64_t i = -M; i <= M; ++i) {
        // climb t = i, i+1, ... ; a blue at state t lands on t-1
        double climb = 1.0;
        for (std::int64_t t = i; t <= M; ++t) {
            double pu = up[static_cast<std::size_t>(t + M)];
            double mass = climb * (1.0 - pu);
            if (t - 1 < -M)
                defect_[static_cast<std::size_t>(i + M)] += mass;
            else
                K_[static_cast<std::size_t>((i + M) * W_ + (t - 1 + M))] = mass;
            climb *= pu;
        }
        defect_[static_cast<std::size_t>(i + M)] += climb;
    }
}

std::vector<double> BlueKernel::apply(const std::vector<double>& row, double* lost) const {
    std::vector<double> out(static_cast<std::size_t>(W_), 0.0);
    for (std::int64_t i = 0; i < W_; ++i) {
        double r = row[static_cast<std::size_t>(i)];
        if (r == 0.0) continue;
        const double* k = &K_[static_cast<std::size_t>(i * W_)];
        // K(i, j) vanishes for j < i - 1
        for (std::int64_t j = std::max<std::int64_t>(0, i - 1); j < W_; ++j) out[static_cast<std::size_t>(j)] += r * k[j];
        if (lost) *lost += r * defect_[static_cast<std::size_t>(i)];
    }
    return out;
}

DBetaLaw exact_D_beta_dist(double lambda, UrnVariant v, std::int64_t i0, std::int64_t n, std::int64_t M,
                           double tol) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (i0 < -M || i0 > M) throw std::invalid_argument("i0 outside truncation window");
    BlueKernel K(lambda, v, M);
    DBetaLaw law;
    law.M = M;
    law.p.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
    law.p[static_cast<std::size_t>(i0 + M)] = 1.0;
    for (std::int64_t b = 0; b < n; ++b) law.p = K.apply(law.p, &law.mass_defect);
    if (law.mass_defect > tol)
        throw std::runtime_error("truncation defect " + std::to_string(law.mass_defect) +
                                 " above tolerance; increase M");
    return law;
}

double tv_vectors(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tv_vectors: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
}

std::vector<std::pair<std::int64_t, double>> tv_mixing_curve(double lambda, UrnVariant v, std::int64_t i0,
                                                             std::int64_t n_max, std::int64_t M) {
    if (i0 < -M || i0 > M) throw std::invalid_argument("i0 outside truncation window");
    StationaryLaws st = stationary_laws(lambda, M);
    const std::vector<double>& target = st.blue_law(v);
    BlueKernel K(lambda, v, M);
    std::vector<double> row(static_cast<std::size_t>(2 * M + 1), 0.0);
    row[static_cast<std::size_t>(i0 + M)] = 1.0;
    double defect = 0.0;
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        if (n > 0) row = K.apply(row, &defect);
        if (defect > kDefectTolerance) throw std::runtime_error("truncation defect above tolerance");
        out.emplace_back(n, tv_vectors(row, target));
    }
    return out;
}

TailReport tail_ratio_check(double lambda, std::int64_t n_max, std::int64_t y_max, std::int64_t x_span,
                            double rel_slack) {
    const std::int64_t M = std::max(auto_truncation(lambda), y_max + x_span + 30);
    BlueKernel K(lambda, UrnVariant::interior, M);
    const double right_c = 1.0 / (1.0 - lambda);
    const double left_bound = lambda + lambda * lambda;
    TailReport rep;
    // right[n][y], left[n][y]: sup over x
    std::vector<std::vector<double>> rsup(static_cast<std::size_t>(n_max + 1),
                                          std::vector<double>(static_cast<std::size_t>(y_max + 1), 0.0));
    std::vector<std::vector<double>> lsup = rsup;
    for (std::int64_t x = -x_span; x <= x_span; ++x) {
        std::vector<double> row(static_cast<std::size_t>(2 * M + 1), 0.0);
        row[static_cast<std::size_t>(x + M)] = 1.0;
        double defect = 0.0;
        for (std::int64_t n = 1; n <= n_max; ++n) {
            row = K.apply(row, &defect);
            auto P = [&](std::int64_t y) { return row[static_cast<std::size_t>(y + M)]; };
            for (std::int64_t y = 0; y <= y_max; ++y) {
                if (x > y) continue;
                if (P(y) == 0.0) {
                    if (P(y + 1) != 0.0) ++rep.violations;  // cannot happen for a nearest-neighbour chain
                    continue;
                }
                double r = P(y + 1) / P(y);
                ++rep.checks;
                if (r > std::pow(lambda, 2 * y + 1) * right_c * (1.0 + rel_slack)) ++rep.violations;
                auto& s = rsup[static_cast<std::size_t>(n)][static_cast<std::size_t>(y)];
                s = std::max(s, r);
            }
            for (std::int64_t y = 0; y >= -y_max; --y) {
                if (P(y) == 0.0) {
                    if (P(y - 1) != 0.0) ++rep.violations;
                    continue;
                }
                double r = P(y - 1) / P(y);
                ++rep.checks;
                if (r > left_bound * (1.0 + rel_slack)) ++rep.violations;
                auto& s = lsup[static_cast<std::size_t>(n)][static_cast<std::size_t>(-y)];
                s = std::max(s, r);
            }
        }
    }
    for (std::int64_t y = 0; y <= y_max; ++y)
        for (std::int64_t n = 1; n <= n_max; ++n) {
            double rb = std::pow(lambda, 2 * y + 1) * right_c;
            double r = rsup[static_cast<std::size_t>(n)][static_cast<std::size_t>(y)];
            rep.right.push_back({y, n, r, rb});
            rep.worst_right = std::max(rep.worst_right, r / rb);
        }
    for (std::int64_t y = 0; y >= -y_max; --y)
        for (std::int64_t n = 1; n <= n_max; ++n) {
            double r = lsup[static_cast<std::size_t>(n)][static_cast<std::size_t>(-y)];
            rep.left.push_back({y, n, r, left_bound});
            rep.worst_left = std::max(rep.worst_left, r / left_bound);
        }
    return rep;
}

double exact_red_before_blue(double lambda, std::int64_t ell, std::int64_t m) {
    std::int64_t M = std::abs(ell) + m + auto_truncation(lambda) + 2;
    DBetaLaw law = exact_D_beta_dist(lambda, UrnVariant::interior, ell, m, M);
    double s = 0.0;
    for (std::int64_t x = ell; x <= M; ++x) s += law.at(x);
    return s;
}

UrnDrivenWalk::UrnDrivenWalk(double lambda) : lambda_(lambda), base_(-16), sites_(32), init_(32, false) {}

DiscrepancyChain& UrnDrivenWalk::chain(std::int64_t k) {
    if (k < base_ || k >= base_ + static_cast<std::int64_t>(sites_.size())) {
        std::int64_t size = static_cast<std::int64_t>(sites_.size());
        std::int64_t new_base = std::min(base_, k) - size;
        std::int64_t new_end = std::max(base_ + size, k + 1) + size;
        std::vector<DiscrepancyChain> s(static_cast<std::size_t>(new_end - new_base));
        std::vector<bool> in(s.size(), false);
        for (std::int64_t j = 0; j < size; ++j) {
            s[static_cast<std::size_t>(base_ + j - new_base)] = sites_[static_cast<std::size_t>(j)];
            in[static_cast<std::size_t>(base_ + j - new_base)] = init_[static_cast<std::size_t>(j)];
        }
        sites_.swap(s);
        init_.swap(in);
        base_ = new_base;
    }
    auto idx = static_cast<std::size_t>(k - base_);
    if (!init_[idx]) {
        sites_[idx] = DiscrepancyChain(lambda_, site_variant(k), initial_state(k));
        init_[idx] = true;
    }
    return sites_[idx];
}

}  // namespace tsaw::urn
