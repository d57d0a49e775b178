#pragma once

#include "sehurdle/rng.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sehurdle {

enum class KernelFamily { negative_binomial, geometric, poisson };

[[nodiscard]] std::string_view kernel_family_name(KernelFamily family) noexcept; // "nb" | "geom" | "pois"
[[nodiscard]] KernelFamily parse_kernel_family(std::string_view name);

/// Decay kernel g(u) on lags u = 1, 2, ...: a shifted count distribution with
/// mean `mu` > 1. The negative binomial carries a size r > 0; the geometric is
/// the r = 1 member and the Poisson is the r -> infinity limit.
class DecayKernel {
public:
    [[nodiscard]] static DecayKernel negative_binomial(double mu, double r);
    [[nodiscard]] static DecayKernel geometric(double mu);
    [[nodiscard]] static DecayKernel poisson(double mu);
    // r is ignored for geometric and Poisson kernels.
    [[nodiscard]] static DecayKernel make(KernelFamily family, double mu, double r = 1.0);

    [[nodiscard]] KernelFamily family() const noexcept { return family_; }
    [[nodiscard]] double mean() const noexcept { return mu_; }
    // Size parameter; absent for the Poisson limit, 1 for the geometric.
    [[nodiscard]] std::optional<double> size() const noexcept;

    friend bool operator==(const DecayKernel&, const DecayKernel&) = default;

private:
    DecayKernel(KernelFamily family, double mu, double r);

    KernelFamily family_;
    double mu_;
    double r_;
};

// Longest kernel table ever built; callers pass tighter caps when the data is shorter.
inline constexpr long kMaxKernelLag = 10'000'000;
inline constexpr double kDefaultTailEpsilon = 1e-15;

[[nodiscard]] double kernel_log_pmf(const DecayKernel& k, long u);
[[nodiscard]] double kernel_pmf(const DecayKernel& k, long u);
// G(u) = sum_{v<=u} g(v).
[[nodiscard]] double kernel_cdf(const DecayKernel& k, long u);
// 1 - G(u), evaluated without cancellation.
[[nodiscard]] double kernel_sf(const DecayKernel& k, long u);
// Smallest u with G(u) >= 1/2.
[[nodiscard]] long kernel_median(const DecayKernel& k);
// Smallest U with 1 - G(U) < eps.
[[nodiscard]] long truncation_horizon(const DecayKernel& k, double eps = kDefaultTailEpsilon);

[[nodiscard]] long draw_lag(const DecayKernel& k, Rng& rng);

/// Tabulated g and G on lags 1..length(), built by the ratio recurrence
/// g(u+1)/g(u) from a log-space g(1). Tabulation stops at `max_lag` or once an
/// analytic bound on the remaining tail falls below `eps`; beyond the table
/// g = 0 and G stays at its last value, so G(u) - G(u-1) = g(u) holds exactly.
class KernelTable {
public:
    KernelTable(const DecayKernel& k, long max_lag, double eps = kDefaultTailEpsilon);

    [[nodiscard]] long length() const noexcept { return static_cast<long>(pmf_.size()) - 1; }
    [[nodiscard]] double pmf(long u) const noexcept {
        return (u >= 1 && u <= length()) ? pmf_[static_cast<std::size_t>(u)] : 0.0;
    }
    [[nodiscard]] double cdf(long u) const noexcept {
        if (u < 1) {
            return 0.0;
        }
        return cdf_[static_cast<std::size_t>(u > length() ? length() : u)];
    }
    // Upper bound on the mass past the last tabulated lag.
    [[nodiscard]] double tail_bound() const noexcept { return tail_bound_; }

private:
    std::vector<double> pmf_; // index 0 unused (g(0) = 0)
    std::vector<double> cdf_;
    double tail_bound_{0.0};
};

} // namespace sehurdle
