#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsaw/rng.hpp"

namespace tsaw::walk {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t(1) << 40;
inline constexpr int kTableHalfWidth = 64;

struct WalkParams {
    double lambda = 0.5;
    double beta = 0.0;
    std::uint64_t seed = 0;
    // right_prob[w + 64] = 1 / (1 + lambda^w)
    std::array<double, 2 * kTableHalfWidth + 1> right_prob{};

    static WalkParams make(double lambda, std::uint64_t seed = 0);

    double p_right(std::int64_t w) const {
        if (w >= -kTableHalfWidth && w <= kTableHalfWidth) return right_prob[w + kTableHalfWidth];
        return 1.0 / (1.0 + std::exp(-beta * static_cast<double>(w)));
    }
};

struct StopSpec {
    std::int64_t k = 0;
    std::int64_t m = 0;
    auto operator<=>(const StopSpec&) const = default;
};

class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(std::uint64_t steps, const std::string& what)
        : std::runtime_error(what), steps_(steps) {}
    std::uint64_t steps() const { return steps_; }

private:
    std::uint64_t steps_;
};

struct EdgeCounts {
    std::uint64_t plus = 0;   // crossings k -> k+1
    std::uint64_t minus = 0;  // crossings k -> k-1
    bool operator==(const EdgeCounts&) const = default;
};

class WalkState {
public:
    WalkState();

    std::uint64_t n() const { return n_; }
    std::int64_t x() const { return x_; }
    std::int64_t min_visited() const { return lo_; }
    std::int64_t max_visited() const { return hi_; }

    std::uint64_t eplus(std::int64_t k) const { return in_store(k) ? at(k).plus : 0; }
    std::uint64_t eminus(std::int64_t k) const { return in_store(k) ? at(k).minus : 0; }
    std::uint64_t site_local_time(std::int64_t k) const {
        return eplus(k) + eminus(k) + (k == x_ ? 1 : 0);
    }

    // w such that P(right) = 1/(1+lambda^w).
    std::int64_t weight_difference() const {
        const EdgeCounts* c = &at(x_);
        return static_cast<std::int64_t>(c[-1].plus + c[0].minus) -
               static_cast<std::int64_t>(c[0].plus + c[1].minus);
    }

    void apply_step(bool right) {
        EdgeCounts& c = at(x_);
        if (right) {
            if (++c.plus == 0) overflow();
            ++x_;
            if (x_ > hi_) {
                hi_ = x_;
                if (x_ + 1 >= base_ + static_cast<std::int64_t>(e_.size())) grow();
            }
        } else {
            if (++c.minus == 0) overflow();
            --x_;
            if (x_ < lo_) {
                lo_ = x_;
                if (x_ - 1 < base_) grow();
            }
        }
        ++n_;
    }

    template <class G>
    bool step(const WalkParams& p, G& g) {
        bool right = uniform01(g) < p.p_right(weight_difference());
        apply_step(right);
        return right;
    }

    // Edge counts over [min_visited, max_visited].
    std::vector<EdgeCounts> profile() const;

    // Throws std::logic_error if a structural invariant is broken.
    void check_invariants() const;

private:
    bool in_store(std::int64_t k) const {
        return k >= base_ && k < base_ + static_cast<std::int64_t>(e_.size());
    }
    const EdgeCounts& at(std::int64_t k) const { return e_[static_cast<std::size_t>(k - base_)]; }
    EdgeCounts& at(std::int64_t k) { return e_[static_cast<std::size_t>(k - base_)]; }
    void grow();
    [[noreturn]] void overflow() const;

    std::uint64_t n_ = 0;
    std::int64_t x_ = 0;
    std::int64_t lo_ = 0;
    std::int64_t hi_ = 0;
    std::int64_t base_ = 0;
    std::vector<EdgeCounts> e_;
};

double step_probability(const WalkState& s, const WalkParams& p);

template <class G>
WalkState& step(WalkState& s, const WalkParams& p, G& g) {
    s.step(p, g);
    return s;
}

// Copy of the walk taken at a stopping time.
struct Snapshot {
    StopSpec spec;
    std::uint64_t n = 0;
    std::int64_t x = 0;
    std::int64_t lo = 0;  // running minimum
    std::int64_t hi = 0;  // running maximum
    std::vector<EdgeCounts> edges;  // sites lo..hi

    static Snapshot capture(const WalkState& s, StopSpec spec);

    std::uint64_t eplus(std::int64_t k) const {
        return (k < lo || k > hi) ? 0 : edges[static_cast<std::size_t>(k - lo)].plus;
    }
    std::uint64_t eminus(std::int64_t k) const {
        return (k < lo || k > hi) ? 0 : edges[static_cast<std::size_t>(k - lo)].minus;
    }
    std::uint64_t site_local_time(std::int64_t k) const {
        return eplus(k) + eminus(k) + (k == x ? 1 : 0);
    }
};

struct RunOptions {
    std::uint64_t budget = kDefaultBudget;
    // When set, receives X_0, X_1, ..., X_final.
    std::vector<std::int64_t>* path = nullptr;
};

// Runs a fresh walk to tau_{k,m}. Throws BudgetExhausted past the budget.
WalkState run_until_tau(const WalkParams& p, StopSpec spec, Philox4x32& g,
                        const RunOptions& opt = {});

using SnapshotObserver = std::function<void(const Snapshot&)>;

// One walk, stopped at every tau in specs; snapshots in stopping-time order.
std::vector<Snapshot> run_until_multi_tau(const WalkParams& p, const std::vector<StopSpec>& specs,
                                          Philox4x32& g, const RunOptions& opt = {},
                                          const SnapshotObserver& observer = {});

// Advances an existing walk by count steps.
void run_steps(WalkState& s, const WalkParams& p, Philox4x32& g, std::uint64_t count,
               std::vector<std::int64_t>* path = nullptr);

void write_profile_csv(std::ostream& os, const Snapshot& snap);
void write_path_csv(std::ostream& os, const std::vector<std::int64_t>& path);

}  // namespace tsaw::walk
