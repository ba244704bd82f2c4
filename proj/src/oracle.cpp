#include "tsaw/oracle.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tsaw {

double ExactLaw::total() const {
    double s = 0.0;
    for (auto& [o, w] : p) s += w;
    return s;
}

ExactLaw ExactLaw::map(const std::function<Outcome(const Outcome&)>& f) const {
    ExactLaw out;
    for (auto& [o, w] : p) out.add(f(o), w);
    return out;
}

ExactLaw ExactLaw::from_samples(const std::vector<Outcome>& samples) {
    std::map<Outcome, std::uint64_t> counts;
    for (auto& s : samples) ++counts[s];
    ExactLaw law;
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& [o, c] : counts) law.p[o] = static_cast<double>(c) * inv;
    return law;
}

void write_law_csv(std::ostream& os, const ExactLaw& law) {
    os << "outcome,probability\n";
    auto old = os.precision(17);
    for (auto& [o, w] : law.p) {
        for (std::size_t i = 0; i < o.size(); ++i) os << (i ? ":" : "") << o[i];
        os << ',' << w << '\n';
    }
    os.precision(old);
}

}  // namespace tsaw

namespace tsaw::oracle {

namespace {

struct Enumerator {
    double beta;
    int n;
    const std::function<void(const std::vector<std::int64_t>&, double)>& visit;
    std::vector<std::int64_t> path;
    // crossings[j] counts traversals of the undirected edge {j - n - 1, j - n}
    std::vector<int> crossings;

    int& edge(std::int64_t left) { return crossings[static_cast<std::size_t>(left + n + 1)]; }

    void go(int depth, double prob) {
        if (depth == n) {
            visit(path, prob);
            return;
        }
        std::int64_t x = path.back();
        double wr = std::exp(-beta * edge(x));
        double wl = std::exp(-beta * edge(x - 1));
        double pr = wr / (wr + wl);
        ++edge(x);
        path.push_back(x + 1);
        go(depth + 1, prob * pr);
        path.pop_back();
        --edge(x);
        ++edge(x - 1);
        path.push_back(x - 1);
        go(depth + 1, prob * (1.0 - pr));
        path.pop_back();
        --edge(x - 1);
    }
};

}  // namespace

void enumerate_paths(double lambda, int n,
                     const std::function<void(const std::vector<std::int64_t>&, double)>& visit) {
    if (n < 0 || n > kMaxEnumerationSteps)
        throw std::invalid_argument("enumeration limited to n <= " + std::to_string(kMaxEnumerationSteps));
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
    Enumerator e{-std::log(lambda), n, visit, {0}, std::vector<int>(2 * static_cast<std::size_t>(n) + 3, 0)};
    e.path.reserve(static_cast<std::size_t>(n) + 1);
    e.go(0, 1.0);
}

ExactLaw position_law(double lambda, int n) {
    ExactLaw law;
    enumerate_paths(lambda, n, [&](const std::vector<std::int64_t>& path, double w) {
        law.add({path.back()}, w);
    });
    return law;
}

ExactLaw position_local_time_law(double lambda, int n, std::int64_t k) {
    ExactLaw law;
    enumerate_paths(lambda, n, [&](const std::vector<std::int64_t>& path, double w) {
        std::int64_t visits = 0;
        for (auto x : path) visits += (x == k);
        law.add({path.back(), visits}, w);
    });
    return law;
}

ExactLaw tau_law(double lambda, std::int64_t k, std::int64_t m, int n_cap) {
    ExactLaw law;
    enumerate_paths(lambda, n_cap, [&](const std::vector<std::int64_t>& path, double w) {
        std::int64_t visits = 0;
        std::int64_t tau = n_cap;
        for (std::size_t i = 0; i < path.size(); ++i) {
            visits += (path[i] == k);
            if (visits > m) {
                tau = static_cast<std::int64_t>(i);
                break;
            }
        }
        law.add({tau}, w);
    });
    return law;
}

ExactLaw joint_D_beta_dp(double lambda, urn::UrnVariant variant, std::int64_t i0, std::int64_t n1,
                         std::int64_t n2, std::int64_t M, double* defect) {
    if (n1 < 0 || n2 < n1) throw std::invalid_argument("need 0 <= n1 <= n2");
    if (i0 < -M || i0 > M) throw std::invalid_argument("i0 outside truncation window");
    const std::size_t W = static_cast<std::size_t>(2 * M + 1);
    const int shift = urn::exponent_shift(variant);
    std::vector<double> up(W);
    for (std::int64_t d = -M; d <= M; ++d) {
        double a = std::pow(lambda, static_cast<double>(2 * d + shift));
        up[static_cast<std::size_t>(d + M)] = a / (1.0 + a);
    }
    double lost = 0.0;
    // One blue: mass climbs by red draws until a blue moves it one step down.
    auto next_blue = [&](const std::vector<double>& cur) {
        std::vector<double> nxt(W, 0.0);
        double carry = 0.0;
        for (std::size_t j = 0; j < W; ++j) {
            double here = cur[j] + carry;
            double blue = here * (1.0 - up[j]);
            if (j == 0)
                lost += blue;
            else
                nxt[j - 1] += blue;
            carry = here * up[j];
        }
        lost += carry;
        return nxt;
    };

    std::vector<double> dist(W, 0.0);
    dist[static_cast<std::size_t>(i0 + M)] = 1.0;
    for (std::int64_t b = 0; b < n1; ++b) dist = next_blue(dist);

    ExactLaw law;
    for (std::size_t j1 = 0; j1 < W; ++j1) {
        if (dist[j1] == 0.0) continue;
        std::vector<double> branch(W, 0.0);
        branch[j1] = dist[j1];
        for (std::int64_t b = n1; b < n2; ++b) branch = next_blue(branch);
        for (std::size_t j2 = 0; j2 < W; ++j2)
            if (branch[j2] != 0.0)
                law.add({static_cast<std::int64_t>(j1) - M, static_cast<std::int64_t>(j2) - M}, branch[j2]);
    }
    if (defect) *defect = lost;
    return law;
}

}  // namespace tsaw::oracle
