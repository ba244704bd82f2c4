#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "tsaw/rng.hpp"
#include "tsaw/urn.hpp"

namespace tsaw::urn {

// Walker/Vose alias table over {0, ..., w.size()-1}.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& weights);

    template <class G>
    std::size_t sample(G& g) const {
        std::uint64_t u = g();
        // high 32 bits pick the column, low 32 bits decide within it
        std::size_t col = static_cast<std::size_t>((u >> 32) * prob_.size() >> 32);
        double v = static_cast<double>(u & ((std::uint64_t(1) << 32) - 1)) * 0x1.0p-32;
        return v < prob_[col] ? col : alias_[col];
    }
    std::size_t size() const { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

// Laws P_d(D_{beta_g} = .) cached for g up to the point where every row is
// within tv_cut of the stationary law; beyond that the stationary law is used.
class DBetaSampler {
public:
    DBetaSampler(double lambda, UrnVariant v, std::int64_t M = 0, double tv_cut = 1e-13,
                 std::int64_t g_limit = 20000);

    template <class G>
    std::int64_t sample(std::int64_t d, std::uint64_t g, G& rng) const {
        if (g == 0) return d;
        if (g > static_cast<std::uint64_t>(g_cap_))
            return static_cast<std::int64_t>(stationary_table_.sample(rng)) - M_;
        return static_cast<std::int64_t>(table(d, static_cast<std::int64_t>(g)).sample(rng)) - M_;
    }

    // Row law (index x + M); g beyond the cap returns the stationary law.
    const std::vector<double>& row(std::int64_t d, std::uint64_t g) const;
    const std::vector<double>& stationary() const { return stationary_; }

    std::int64_t M() const { return M_; }
    std::int64_t g_cap() const { return g_cap_; }
    double lambda() const { return lambda_; }
    UrnVariant variant() const { return variant_; }

private:
    const AliasTable& table(std::int64_t d, std::int64_t g) const;
    std::size_t slot(std::int64_t d, std::int64_t g) const;

    double lambda_;
    UrnVariant variant_;
    std::int64_t M_;
    std::int64_t W_;
    std::int64_t g_cap_ = 0;
    std::vector<double> stationary_;
    AliasTable stationary_table_;
    std::vector<std::vector<double>> rows_;  // slot(d, g), g >= 1
    std::vector<AliasTable> tables_;
};

// Samplers for both urn variants at one lambda.
struct UrnSamplers {
    explicit UrnSamplers(double lambda);
    DBetaSampler interior;
    DBetaSampler origin;
};

// Joint edge local times of one walk frozen at tau_{k, m_1} < ... < tau_{k, m_N},
// sampled site by site from the urn chains without running the walk.
struct ProfileRequest {
    std::int64_t k = 0;
    std::vector<std::int64_t> levels;  // strictly increasing m_r >= 0
    std::int64_t right_limit = std::numeric_limits<std::int64_t>::max();
    std::int64_t left_limit = std::numeric_limits<std::int64_t>::min();
    // Censoring: stop once sum of L for the top level exceeds area_cap.
    std::uint64_t area_cap = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::int64_t> probes;  // sites whose L is recorded
    bool keep_profiles = false;
};

struct ProfileSample {
    // Site-k urn split: E+(k) per level.
    std::vector<std::int64_t> eplus_at_k;
    // Per level, valid when the corresponding side completed; unreached
    // extrema hold std::numeric_limits<int64_t>::max().
    std::vector<std::uint64_t> area;      // sum_k L(tau_r, k) = tau_r + 1
    std::vector<std::int64_t> mu_plus;    // max visited site
    std::vector<std::int64_t> mu_minus;   // min visited site
    // merge_plus[r] / merge_minus[r]: walk extrema between tau_r and tau_{r+1}
    std::vector<std::int64_t> merge_plus;
    std::vector<std::int64_t> merge_minus;
    bool right_complete = false;  // absorbed before limit and cap
    bool left_complete = false;
    bool censored = false;        // area cap reached
    std::vector<std::vector<std::uint64_t>> probe_values;  // [level][probe]
    // Optional full profiles over [lo, hi].
    std::int64_t lo = 0, hi = 0;
    std::vector<std::vector<std::uint64_t>> L;
    std::vector<std::vector<std::uint64_t>> eplus;
    std::vector<std::vector<std::uint64_t>> eminus;
};

ProfileSample sample_profiles(const UrnSamplers& s, const ProfileRequest& req, Philox4x32& right_rng,
                              Philox4x32& left_rng, Philox4x32& site_rng);

}  // namespace tsaw::urn
