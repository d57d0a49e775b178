#pragma once

#include "sehurdle/rng.hpp"

namespace sehurdle {

// Working range for the zeta exponent during evaluation and estimation.
inline constexpr double kMinZetaExponent = 1.0 + 1e-6;
inline constexpr double kMaxZetaExponent = 50.0;

[[nodiscard]] double clamp_zeta_exponent(double s) noexcept;

// Riemann zeta for real s > 1: direct sum plus Euler-Maclaurin tail.
[[nodiscard]] double zeta_norm(double s);
// d zeta / ds.
[[nodiscard]] double zeta_derivative(double s);
// -zeta'(s)/zeta(s) = E[log Y] under the zeta distribution; strictly decreasing in s.
[[nodiscard]] double zeta_mean_log(double s);
// Hurwitz tail sum_{n>=a} n^{-s}, a >= 1.
[[nodiscard]] double zeta_tail(double s, long a);

[[nodiscard]] double zeta_log_pmf(long y, double s);
[[nodiscard]] double zeta_pmf(long y, double s);
// P(Y > y)
[[nodiscard]] double zeta_sf(long y, double s);

// Inversion with exact partial sums up to 10^6 and a continuous power-law tail beyond.
[[nodiscard]] long draw_zeta(double s, Rng& rng);

} // namespace sehurdle
