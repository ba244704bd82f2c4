#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tsaw/edge_chain.hpp"
#include "tsaw/walk.hpp"

namespace tsaw::rk {

// k = floor(x n), m = floor(2 sigma h sqrt(n)).
std::int64_t site_of(double x, std::int64_t n);
std::int64_t level_of(double h, std::int64_t n, double sigma);

class SnapshotMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rescaled local-time profile L(tau, k) / (2 sigma sqrt(n)) frozen at tau_{k,m}.
struct RKCurve {
    double x = 0.0;
    double h = 0.0;
    std::int64_t n = 1;
    double sigma = 1.0;
    std::int64_t k = 0;
    std::int64_t m = 0;
    std::uint64_t tau = 0;
    std::int64_t lo = 0;  // min visited site
    std::int64_t hi = 0;  // max visited site
    std::vector<std::uint64_t> L;  // sites lo..hi

    double scale() const;  // 2 sigma sqrt(n)
    std::uint64_t local_time(std::int64_t site) const {
        return (site < lo || site > hi) ? 0 : L[static_cast<std::size_t>(site - lo)];
    }
    double value(double y) const;  // Lambda^n(y) on the lattice floor(y n)
    double tau_rescaled() const;   // tau / (2 sigma n^{3/2})
    double mu_minus() const { return static_cast<double>(lo) / static_cast<double>(n); }
    double mu_plus() const { return static_cast<double>(hi) / static_cast<double>(n); }
    // (tau + 1) - sum_k L(tau, k); zero on every valid curve.
    std::int64_t area_residual() const;
    // Throws std::logic_error when a curve invariant fails.
    void check_invariants() const;
};

RKCurve extract_curve(const walk::Snapshot& snap, double x, double h, std::int64_t n, double sigma);

// Curve from an urn-sampled profile (level index r); needs keep_profiles and
// both sides complete.
RKCurve curve_from_profile(const urn::ProfileSample& ps, std::size_t r, std::int64_t k, std::int64_t m, double x,
                           double h, std::int64_t n, double sigma);

struct MergePoints {
    std::int64_t minus = 0;       // walk minimum between the two stopping times
    std::int64_t plus = 0;        // walk maximum between the two stopping times
    std::int64_t edge_plus = 0;   // min{j >= k v k' : E+ profiles agree}
    std::int64_t edge_minus = 0;  // max{j <= k ^ k' : E- profiles agree}
    std::int64_t local_plus = 0;  // same with site local times
    std::int64_t local_minus = 0;
    double rescaled_minus = 0.0;
    double rescaled_plus = 0.0;
};

// a and b are snapshots of one walk whose trajectory is path (X_0..X_T).
MergePoints merge_points(const walk::Snapshot& a, const walk::Snapshot& b, const std::vector<std::int64_t>& path,
                         std::int64_t n);

// Visit times per site, built from a trajectory.
class VisitLog {
public:
    explicit VisitLog(const std::vector<std::int64_t>& path);
    std::uint64_t horizon() const { return horizon_; }
    // L(t, k): visits to k at times <= t.
    std::uint64_t local_time(std::uint64_t t, std::int64_t k) const;
    // tau_{k,m}, if it lies within the log.
    std::optional<std::uint64_t> tau(std::int64_t k, std::int64_t m) const;
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }

private:
    const std::vector<std::uint64_t>* visits(std::int64_t k) const;
    std::uint64_t horizon_ = 0;
    std::int64_t lo_ = 0, hi_ = 0;
    std::vector<std::vector<std::uint64_t>> times_;
};

struct DualityOutcome {
    bool event_a = false;  // L(tau_{k,m}, j) <= l'
    bool event_b = false;  // m + 1 <= L(tau_{j,l'}, k)
    std::uint64_t raw_lhs = 0;  // L(tau_{k,m}, j)
    std::uint64_t raw_rhs = 0;  // min{l >= 0 : L(tau_{j,l}, k) >= m+1}
    bool agree() const { return event_a == event_b && raw_lhs == raw_rhs; }
};

// Integer form; requires tau_{k,m} within the log and k != j.
DualityOutcome duality_check(const VisitLog& log, std::int64_t k, std::int64_t m, std::int64_t j, std::int64_t lp);

// Scaled form: k = floor(xn), m = level_of(h), j = floor(yn), l' = level_of(h').
DualityOutcome duality_check(const VisitLog& log, double x, double h, double y, double hp, std::int64_t n,
                             double sigma);

struct ProcessSample {
    double t = 0.0;
    double X = 0.0;  // X_{floor(t n^{3/2})} / ((2 sigma)^{-2/3} n)
    double H = 0.0;  // L(., X) / ((2 sigma)^{2/3} sqrt(n))
};

// Runs a fresh walk to ceil(max(t) n^{3/2}); t_grid ascending.
std::vector<ProcessSample> rescaled_processes(const walk::WalkParams& p, std::int64_t n, double sigma,
                                              const std::vector<double>& t_grid, Philox4x32& rng,
                                              std::vector<std::int64_t>* path = nullptr);

// max over |s - t| <= delta' of |X_n(t) - X_n(s)| along a stored path.
double modulus_of_continuity(const std::vector<std::int64_t>& path, std::int64_t n, double sigma, double delta_prime);

struct EdgeViewPoint {
    double y = 0.0;
    double value = 0.0;  // E+(floor(yn)) / (sigma sqrt(n))
};

// Directed-edge debug view of a snapshot.
std::vector<EdgeViewPoint> directed_edge_view(const walk::Snapshot& snap, std::int64_t n, double sigma);

}  // namespace tsaw::rk
