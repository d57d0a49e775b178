#include "sehurdle/zeta.hpp"

#include "sehurdle/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace sehurdle {

namespace {

// B_{2k} / (2k)! for k = 1..10
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};

constexpr long kEulerMaclaurinStart = 16;
constexpr long kExactInversionLimit = 1'000'000;

void check_exponent(double s) {
    if (!(s > 1.0) || !std::isfinite(s)) {
        throw DomainError("zeta series diverges for s <= 1 (got s = " + std::to_string(s) + ")");
    }
}

struct TailSums {
    double value;
    double derivative;
};

// sum_{n>=a} n^{-s} and its s-derivative.
TailSums tail_sums(double s, long a) {
    const long n_em = std::max(a, kEulerMaclaurinStart);
    double value = 0.0;
    double derivative = 0.0;
    for (long n = a; n < n_em; ++n) {
        const double ln = std::log(static_cast<double>(n));
        const double term = std::exp(-s * ln);
        value += term;
        derivative -= ln * term;
    }
    const double big_n = static_cast<double>(n_em);
    const double log_n = std::log(big_n);
    const double pow_1ms = std::exp((1.0 - s) * log_n); // N^{1-s}
    const double pow_ms = pow_1ms / big_n;               // N^{-s}

    value += pow_1ms / (s - 1.0) + 0.5 * pow_ms;
    derivative += -log_n * pow_1ms / (s - 1.0) - pow_1ms / ((s - 1.0) * (s - 1.0)) - 0.5 * log_n * pow_ms;

    // c_k (s)_{2k-1} N^{1-s-2k}
    double rising = s;            // (s)_{2k-1}
    double rising_log_deriv = 1.0 / s; // d/ds log (s)_{2k-1}
    double power = pow_ms / big_n; // N^{-s-1}
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
        const double term = kBernoulliOverFactorial[k] * rising * power;
        value += term;
        derivative += term * (rising_log_deriv - log_n);
        const double j1 = s + static_cast<double>(2 * k + 1);
        const double j2 = s + static_cast<double>(2 * k + 2);
        rising *= j1 * j2;
        rising_log_deriv += 1.0 / j1 + 1.0 / j2;
        power /= big_n * big_n;
    }
    return {value, derivative};
}

} // namespace

double clamp_zeta_exponent(double s) noexcept {
    if (std::isnan(s)) {
        return kMinZetaExponent;
    }
    return std::clamp(s, kMinZetaExponent, kMaxZetaExponent);
}

double zeta_norm(double s) {
    check_exponent(s);
    return tail_sums(s, 1).value;
}

double zeta_derivative(double s) {
    check_exponent(s);
    return tail_sums(s, 1).derivative;
}

double zeta_mean_log(double s) {
    check_exponent(s);
    const auto sums = tail_sums(s, 1);
    return -sums.derivative / sums.value;
}

double zeta_tail(double s, long a) {
    check_exponent(s);
    if (a < 1) {
        throw DomainError("zeta tail must start at n >= 1");
    }
    return tail_sums(s, a).value;
}

double zeta_log_pmf(long y, double s) {
    check_exponent(s);
    if (y < 1) {
        throw DomainError("zeta distribution has no support below 1 (got y = " + std::to_string(y) + ")");
    }
    return -s * std::log(static_cast<double>(y)) - std::log(zeta_norm(s));
}

double zeta_pmf(long y, double s) { return std::exp(zeta_log_pmf(y, s)); }

double zeta_sf(long y, double s) {
    check_exponent(s);
    if (y < 1) {
        return 1.0;
    }
    return zeta_tail(s, y + 1) / zeta_norm(s);
}

long draw_zeta(double s, Rng& rng) {
    s = clamp_zeta_exponent(s);
    const double u = uniform01(rng);
    const double inv_norm = 1.0 / zeta_norm(s);
    double cumulative = 0.0;
    for (long y = 1; y <= kExactInversionLimit; ++y) {
        cumulative += std::exp(-s * std::log(static_cast<double>(y))) * inv_norm;
        if (u < cumulative) {
            return y;
        }
    }
    // Beyond the exact range, P(Y > y | Y > Y0) ~ ((y + 1/2) / (Y0 + 1/2))^{1-s}.
    const double remaining = 1.0 - cumulative;
    const double v = remaining > 0.0 ? std::clamp((u - cumulative) / remaining, 0.0, 1.0 - 1e-16) : 0.0;
    const double anchor = static_cast<double>(kExactInversionLimit) + 0.5;
    const double y = anchor * std::pow(1.0 - v, -1.0 / (s - 1.0)) + 0.5;
    constexpr double kCap = static_cast<double>(std::numeric_limits<long>::max() / 2);
    return std::max(kExactInversionLimit + 1, static_cast<long>(std::min(std::floor(y), kCap)));
}

} // namespace sehurdle
