#pragma once

// Independent oracles used only by tests. These deliberately avoid the
// library's computational routes: confidence-interval endpoints come from
// bisection on directly summed binomial tails, and Fisher p-values from
// exact integer enumeration of all tables with the observed margins.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace oracle {

// P(X >= s) for X ~ Binomial(n, p), summed term by term in log space.
inline double binom_upper_tail(std::int64_t n, std::int64_t s, double p) {
    if (s <= 0) return 1.0;
    if (s > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double sum = 0.0;
    for (std::int64_t k = s; k <= n; ++k) {
        const double lt = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0) + k * std::log(p) +
                          (n - k) * std::log1p(-p);
        sum += std::exp(lt);
    }
    return sum;
}

inline double binom_lower_tail(std::int64_t n, std::int64_t s, double p) {
    if (s >= n) return 1.0;
    if (s < 0) return 0.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    double sum = 0.0;
    for (std::int64_t k = 0; k <= s; ++k) {
        const double lt = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0) + k * std::log(p) +
                          (n - k) * std::log1p(-p);
        sum += std::exp(lt);
    }
    return sum;
}

// Clopper-Pearson lower endpoint: smallest p with P(X >= s | p) >= alpha/2,
// located by bisection on the monotone tail.
inline double cp_lower(std::int64_t s, std::int64_t n, double level) {
    if (s == 0) return 0.0;
    const double target = (1.0 - level) / 2.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (binom_upper_tail(n, s, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double cp_upper(std::int64_t s, std::int64_t n, double level) {
    if (s == n) return 1.0;
    const double target = (1.0 - level) / 2.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (binom_lower_tail(n, s, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Exact integer binomial coefficient; safe in int64 for n <= 33.
inline std::int64_t choose_exact(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (n > 33) throw std::invalid_argument("choose_exact: n too large for exact int64");
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Two-sided Fisher p by full enumeration with exact integer table weights.
// All tie comparisons are integer comparisons, so the included-table set is
// exact. Valid for margins small enough that the weights fit in int64.
inline double fisher_two_sided_enum(const std::array<std::int64_t, 4>& t) {
    const std::int64_t a = t[0], b = t[1], c = t[2], d = t[3];
    const std::int64_t r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
    const std::int64_t n = r1 + r2;
    if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 1.0;

    const std::int64_t w_obs = choose_exact(r1, a) * choose_exact(r2, c1 - a);
    const std::int64_t k_lo = std::max<std::int64_t>(0, c1 - r2);
    const std::int64_t k_hi = std::min(r1, c1);
    std::int64_t acc = 0;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const std::int64_t w = choose_exact(r1, k) * choose_exact(r2, c1 - k);
        if (w <= w_obs) acc += w;
    }
    return static_cast<double>(acc) / static_cast<double>(choose_exact(n, c1));
}

}  // namespace oracle
