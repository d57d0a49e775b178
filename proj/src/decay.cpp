#include "sehurdle/decay.hpp"

#include "sehurdle/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <random>

namespace sehurdle {

namespace {

double nb_success_prob(double mu, double r) { return r / (mu - 1.0 + r); }

// Smallest u >= 1 with pred(u) true, for a predicate monotone in u.
template <class Pred>
long first_true(Pred&& pred) {
    long hi = 1;
    while (!pred(hi)) {
        if (hi > (std::numeric_limits<long>::max() >> 2)) {
            throw HorizonError("kernel search exceeded the representable lag range");
        }
        hi *= 2;
    }
    long lo = hi / 2; // pred(lo) false or lo == 0
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

std::string_view kernel_family_name(KernelFamily family) noexcept {
    switch (family) {
    case KernelFamily::negative_binomial:
        return "nb";
    case KernelFamily::geometric:
        return "geom";
    case KernelFamily::poisson:
        return "pois";
    }
    return "nb";
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "nb") {
        return KernelFamily::negative_binomial;
    }
    if (name == "geom") {
        return KernelFamily::geometric;
    }
    if (name == "pois") {
        return KernelFamily::poisson;
    }
    throw ParseError("unknown kernel '" + std::string(name) + "' (expected nb, geom or pois)");
}

DecayKernel::DecayKernel(KernelFamily family, double mu, double r) : family_(family), mu_(mu), r_(r) {
    if (!std::isfinite(mu) || mu <= 1.0) {
        throw DomainError("kernel mean must be finite and > 1 (got " + std::to_string(mu) + ")");
    }
    if (family == KernelFamily::negative_binomial && (!std::isfinite(r) || r <= 0.0)) {
        throw DomainError("negative binomial size must be finite and > 0 (got " + std::to_string(r) + ")");
    }
}

DecayKernel DecayKernel::negative_binomial(double mu, double r) {
    return DecayKernel(KernelFamily::negative_binomial, mu, r);
}

DecayKernel DecayKernel::geometric(double mu) { return DecayKernel(KernelFamily::geometric, mu, 1.0); }

DecayKernel DecayKernel::poisson(double mu) {
    return DecayKernel(KernelFamily::poisson, mu, std::numeric_limits<double>::infinity());
}

DecayKernel DecayKernel::make(KernelFamily family, double mu, double r) {
    switch (family) {
    case KernelFamily::negative_binomial:
        return negative_binomial(mu, r);
    case KernelFamily::geometric:
        return geometric(mu);
    case KernelFamily::poisson:
        return poisson(mu);
    }
    return negative_binomial(mu, r);
}

std::optional<double> DecayKernel::size() const noexcept {
    if (family_ == KernelFamily::poisson) {
        return std::nullopt;
    }
    return r_;
}

double kernel_log_pmf(const DecayKernel& k, long u) {
    if (u < 1) {
        return -std::numeric_limits<double>::infinity();
    }
    const double mu = k.mean();
    const double lag = static_cast<double>(u - 1);
    switch (k.family()) {
    case KernelFamily::negative_binomial: {
        const double r = *k.size();
        using boost::math::lgamma;
        return lgamma(r + lag) - lgamma(r) - lgamma(lag + 1.0) - r * std::log1p((mu - 1.0) / r) -
               lag * std::log1p(r / (mu - 1.0));
    }
    case KernelFamily::geometric:
        return -std::log(mu) + lag * std::log1p(-1.0 / mu);
    case KernelFamily::poisson: {
        const double lambda = mu - 1.0;
        return -lambda + lag * std::log(lambda) - boost::math::lgamma(lag + 1.0);
    }
    }
    return 0.0;
}

double kernel_pmf(const DecayKernel& k, long u) {
    return u < 1 ? 0.0 : std::exp(kernel_log_pmf(k, u));
}

double kernel_cdf(const DecayKernel& k, long u) {
    if (u < 1) {
        return 0.0;
    }
    const double mu = k.mean();
    const double x = static_cast<double>(u);
    switch (k.family()) {
    case KernelFamily::negative_binomial: {
        const double r = *k.size();
        return boost::math::ibeta(r, x, nb_success_prob(mu, r));
    }
    case KernelFamily::geometric:
        return -std::expm1(x * std::log1p(-1.0 / mu));
    case KernelFamily::poisson:
        return boost::math::gamma_q(x, mu - 1.0);
    }
    return 0.0;
}

double kernel_sf(const DecayKernel& k, long u) {
    if (u < 1) {
        return 1.0;
    }
    const double mu = k.mean();
    const double x = static_cast<double>(u);
    switch (k.family()) {
    case KernelFamily::negative_binomial: {
        const double r = *k.size();
        return boost::math::ibetac(r, x, nb_success_prob(mu, r));
    }
    case KernelFamily::geometric:
        return std::exp(x * std::log1p(-1.0 / mu));
    case KernelFamily::poisson:
        return boost::math::gamma_p(x, mu - 1.0);
    }
    return 0.0;
}

long kernel_median(const DecayKernel& k) {
    return first_true([&](long u) { return kernel_cdf(k, u) >= 0.5; });
}

long truncation_horizon(const DecayKernel& k, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("tail tolerance must lie in (0, 1)");
    }
    return first_true([&](long u) { return kernel_sf(k, u) < eps; });
}

long draw_lag(const DecayKernel& k, Rng& rng) {
    const double mu = k.mean();
    switch (k.family()) {
    case KernelFamily::negative_binomial: {
        const double r = *k.size();
        std::gamma_distribution<double> rate(r, (mu - 1.0) / r);
        const double lambda = rate(rng);
        if (!(lambda > 0.0)) {
            return 1;
        }
        std::poisson_distribution<long> extra(lambda);
        return 1 + extra(rng);
    }
    case KernelFamily::geometric: {
        std::geometric_distribution<long> extra(1.0 / mu);
        return 1 + extra(rng);
    }
    case KernelFamily::poisson: {
        std::poisson_distribution<long> extra(mu - 1.0);
        return 1 + extra(rng);
    }
    }
    return 1;
}

KernelTable::KernelTable(const DecayKernel& k, long max_lag, double eps) {
    if (max_lag < 1) {
        pmf_.assign(1, 0.0);
        cdf_.assign(1, 0.0);
        tail_bound_ = 1.0;
        return;
    }
    const double mu = k.mean();
    const KernelFamily family = k.family();
    const double r = family == KernelFamily::negative_binomial ? *k.size() : 1.0;
    const double q = family == KernelFamily::negative_binomial ? (mu - 1.0) / (mu - 1.0 + r) : (mu - 1.0) / mu;

    // g(u+1) / g(u)
    const auto ratio = [&](long u) {
        const double x = static_cast<double>(u);
        switch (family) {
        case KernelFamily::negative_binomial:
            return (r + x - 1.0) / x * q;
        case KernelFamily::geometric:
            return q;
        case KernelFamily::poisson:
            return (mu - 1.0) / x;
        }
        return q;
    };
    // Bound on the ratio for every lag >= u, or >= 1 when none is available yet.
    const auto ratio_cap = [&](long u) {
        switch (family) {
        case KernelFamily::negative_binomial:
            return r <= 1.0 ? q : ratio(u);
        case KernelFamily::geometric:
            return q;
        case KernelFamily::poisson:
            return ratio(u);
        }
        return 1.0;
    };

    pmf_.assign(1, 0.0);
    cdf_.assign(1, 0.0);
    double g = std::exp(kernel_log_pmf(k, 1));
    double cumulative = 0.0;
    for (long u = 1;; ++u) {
        cumulative += g;
        pmf_.push_back(g);
        cdf_.push_back(cumulative);
        const double rho = ratio_cap(u);
        tail_bound_ = rho < 1.0 ? g * rho / (1.0 - rho) : 1.0 - cumulative;
        if (u >= max_lag) {
            break;
        }
        if (rho < 1.0 && tail_bound_ < eps) {
            break;
        }
        g *= ratio(u);
    }
}

} // namespace sehurdle
