#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "tsaw/urn_variant.hpp"

namespace tsaw {

using Outcome = std::vector<std::int64_t>;

// Discrete law over integer tuples.
struct ExactLaw {
    std::map<Outcome, double> p;

    void add(const Outcome& o, double w) { p[o] += w; }
    double prob(const Outcome& o) const {
        auto it = p.find(o);
        return it == p.end() ? 0.0 : it->second;
    }
    double total() const;
    // Image law under f.
    ExactLaw map(const std::function<Outcome(const Outcome&)>& f) const;

    static ExactLaw from_samples(const std::vector<Outcome>& samples);
};

// CSV `outcome,probability`; tuple coordinates joined with ':'.
void write_law_csv(std::ostream& os, const ExactLaw& law);

}  // namespace tsaw

namespace tsaw::oracle {

inline constexpr int kMaxEnumerationSteps = 16;

// Visits every n-step path X_0..X_n with its exact probability. The step law
// is evaluated straight from exp(-beta * undirected crossings), independently
// of the walk module's bookkeeping.
void enumerate_paths(double lambda, int n,
                     const std::function<void(const std::vector<std::int64_t>&, double)>& visit);

ExactLaw position_law(double lambda, int n);                       // (X_n)
ExactLaw position_local_time_law(double lambda, int n, std::int64_t k = 0);  // (X_n, L(n,k))
ExactLaw tau_law(double lambda, std::int64_t k, std::int64_t m, int n_cap);  // (tau ^ n_cap)

// Exact joint law of (D_{beta_{n1}}, D_{beta_{n2}}), n1 <= n2, computed draw
// by draw with states clipped to [-M, M]; the lost mass goes to *defect.
ExactLaw joint_D_beta_dp(double lambda, urn::UrnVariant variant, std::int64_t i0, std::int64_t n1,
                         std::int64_t n2, std::int64_t M, double* defect = nullptr);

}  // namespace tsaw::oracle
