#pragma once

// Exact statistics for classifier evaluation: accuracy, Clopper-Pearson
// binomial confidence intervals, and two-sided Fisher exact tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace xg::stats {

// k x k count matrix, rows = true label, columns = predicted label.
struct ConfusionMatrix {
    std::vector<std::string> class_order;
    std::vector<std::int64_t> counts;  // row-major, class_order.size()^2

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> classes)
        : class_order(std::move(classes)),
          counts(class_order.size() * class_order.size(), 0) {}

    std::size_t size() const { return class_order.size(); }

    std::int64_t& at(std::size_t true_idx, std::size_t pred_idx) {
        return counts[true_idx * size() + pred_idx];
    }
    std::int64_t at(std::size_t true_idx, std::size_t pred_idx) const {
        return counts[true_idx * size() + pred_idx];
    }

    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < class_order.size(); ++i)
            if (class_order[i] == label) return i;
        throw std::invalid_argument("confusion matrix: unknown label '" + label + "'");
    }
};

struct BinomialCI {
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double level = 0.95;
    double lower = 0.0;
    double upper = 1.0;
};

struct FisherResult {
    std::array<std::int64_t, 4> table{};  // {a, b, c, d} row-major
    double p_two_sided = 1.0;
    bool degenerate_margin = false;  // some margin was zero; p = 1 by convention
};

inline double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (cm.size() == 0 || total == 0)
        throw std::invalid_argument("accuracy: empty confusion matrix");
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) correct += cm.at(i, i);
    return static_cast<double>(correct) / static_cast<double>(total);
}

inline double per_class_recall(const ConfusionMatrix& cm, const std::string& label) {
    const std::size_t i = cm.index_of(label);
    std::int64_t row_total = 0;
    for (std::size_t j = 0; j < cm.size(); ++j) row_total += cm.at(i, j);
    if (row_total == 0)
        throw std::invalid_argument("per_class_recall: empty row for '" + label + "'");
    return static_cast<double>(cm.at(i, i)) / static_cast<double>(row_total);
}

namespace detail {

// Regularized incomplete beta I_x(a, b) via the standard continued fraction
// (Lentz's method). Accurate to near machine precision for the (a, b) ranges
// that arise from binomial tails.
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double reg_inc_beta(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * betacf(a, b, x) / a;
    return 1.0 - std::exp(ln_front + std::log(betacf(b, a, 1.0 - x)) - std::log(b));
}

// Smallest-x inverse of I_x(a, b) = q by bisection; I is monotone in x.
inline double inv_reg_inc_beta(double q, double a, double b) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (reg_inc_beta(mid, a, b) < q)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace detail

// Exact equal-tailed Clopper-Pearson interval. Endpoints are the usual beta
// quantiles: lower solves P(X >= s | p) = (1-level)/2, upper solves
// P(X <= s | p) = (1-level)/2, with the degenerate s = 0 / s = n cases pinned
// to 0 and 1.
inline BinomialCI clopper_pearson(std::int64_t successes, std::int64_t trials,
                                  double level = 0.95) {
    if (trials <= 0 || successes < 0 || successes > trials)
        throw std::invalid_argument("clopper_pearson: require 0 <= successes <= trials, trials > 0");
    if (level <= 0.0 || level >= 1.0)
        throw std::invalid_argument("clopper_pearson: level must be in (0, 1)");

    const double alpha = 1.0 - level;
    BinomialCI ci;
    ci.successes = successes;
    ci.trials = trials;
    ci.level = level;

    const double s = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    ci.lower = (successes == 0)
                   ? 0.0
                   : detail::inv_reg_inc_beta(alpha / 2.0, s, n - s + 1.0);
    ci.upper = (successes == trials)
                   ? 1.0
                   : detail::inv_reg_inc_beta(1.0 - alpha / 2.0, s + 1.0, n - s);
    return ci;
}

// Two-sided Fisher exact test on a 2x2 table {a, b; c, d} with fixed margins.
// The p-value sums the hypergeometric probabilities of all tables whose
// probability does not exceed that of the observed table (probability-mass
// rule, with a small relative slack so exact rational ties are kept).
inline FisherResult fisher_exact(const std::array<std::int64_t, 4>& table) {
    for (auto v : table)
        if (v < 0) throw std::invalid_argument("fisher_exact: negative cell count");

    FisherResult res;
    res.table = table;

    const std::int64_t a = table[0], b = table[1], c = table[2], d = table[3];
    const std::int64_t r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
    const std::int64_t n = r1 + r2;

    if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) {
        res.p_two_sided = 1.0;
        res.degenerate_margin = true;
        return res;
    }

    const double log_denom = detail::log_choose(n, c1);
    auto log_pmf = [&](std::int64_t k) {
        return detail::log_choose(r1, k) + detail::log_choose(r2, c1 - k) - log_denom;
    };

    const std::int64_t k_lo = std::max<std::int64_t>(0, c1 - r2);
    const std::int64_t k_hi = std::min(r1, c1);
    const double log_p_obs = log_pmf(a);
    // relative slack for floating-point tie detection
    const double cutoff = log_p_obs + std::log1p(1e-7);

    double p = 0.0;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double lp = log_pmf(k);
        if (lp <= cutoff) p += std::exp(lp);
    }
    res.p_two_sided = std::min(1.0, p);
    return res;
}

// Contingency encoding for comparing two accuracies on same-size test sets:
// [[correct_a, wrong_a], [correct_b, wrong_b]].
inline FisherResult fisher_accuracy_comparison(std::int64_t correct_a, std::int64_t total_a,
                                               std::int64_t correct_b, std::int64_t total_b) {
    return fisher_exact({correct_a, total_a - correct_a, correct_b, total_b - correct_b});
}

// Alternative p-value conventions. two_sided is the reporting default; the
// others exist so reported reference numbers computed under a different
// convention can be cross-checked.
enum class FisherAlternative {
    two_sided,          // probability-mass rule (fisher_exact default)
    greater,            // upper tail of the top-left cell
    less,               // lower tail
    mid_p_greater,      // upper tail minus half the observed point mass
    point_probability,  // hypergeometric mass of the observed table alone
};

inline double fisher_p(const std::array<std::int64_t, 4>& table, FisherAlternative alt) {
    if (alt == FisherAlternative::two_sided) return fisher_exact(table).p_two_sided;

    const std::int64_t a = table[0], b = table[1], c = table[2], d = table[3];
    const std::int64_t r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
    const std::int64_t n = r1 + r2;
    if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 1.0;

    const double log_denom = detail::log_choose(n, c1);
    auto pmf = [&](std::int64_t k) {
        return std::exp(detail::log_choose(r1, k) + detail::log_choose(r2, c1 - k) - log_denom);
    };
    const std::int64_t k_lo = std::max<std::int64_t>(0, c1 - r2);
    const std::int64_t k_hi = std::min(r1, c1);

    double p = 0.0;
    switch (alt) {
        case FisherAlternative::greater:
            for (std::int64_t k = a; k <= k_hi; ++k) p += pmf(k);
            break;
        case FisherAlternative::less:
            for (std::int64_t k = k_lo; k <= a; ++k) p += pmf(k);
            break;
        case FisherAlternative::mid_p_greater:
            for (std::int64_t k = a; k <= k_hi; ++k) p += pmf(k);
            p -= 0.5 * pmf(a);
            break;
        case FisherAlternative::point_probability:
            p = pmf(a);
            break;
        case FisherAlternative::two_sided:
            break;  // handled above
    }
    return std::min(1.0, p);
}

}  // namespace xg::stats
