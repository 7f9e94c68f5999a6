#pragma once

// Numerically stable primitives: rising-factorial Gamma ratios,
// fractional weight sequences, integer backward differences and the
// summation-by-parts identity checkers. Everything here is pure.

#include <cmath>
#include <utility>

#include "core.hpp"

namespace nablafc {

/// Gamma(t+r)/Gamma(t) for integer t >= 0, i.e. the rising factorial
/// t^(r). Returns 0 at t = 0 (limit convention Gamma(r)/Gamma(0)).
/// Throws if t+r sits on a nonpositive-integer Gamma pole with t >= 1.
inline double rising_factorial_ratio(int t, double r) {
    if (t < 0) throw std::domain_error("rising_factorial_ratio: t must be nonnegative");
    if (t == 0) return 0.0;
    if (r == 0.0) return 1.0;
    const double lg_t = std::lgamma(static_cast<double>(t));
    const double x = static_cast<double>(t) + r;
    if (x > 0.0) return std::exp(std::lgamma(x) - lg_t);
    // Shift the argument into (0,1]: Gamma(x) = Gamma(x+m) / prod (x+i).
    // The product carries the sign that lgamma would lose.
    const int m = static_cast<int>(std::floor(-x)) + 1;
    double prod = 1.0;
    for (int i = 0; i < m; ++i) {
        const double factor = x + i;
        if (factor == 0.0)
            throw std::domain_error("rising_factorial_ratio: Gamma pole (t+r is a nonpositive integer)");
        prod *= factor;
    }
    return std::exp(std::lgamma(x + m) - lg_t) / prod;
}

enum class WeightKind { Difference, Sum };

/// Precomputed fractional weights for one order, by multiplicative
/// recurrence (Gamma quotients overflow for large j; the recurrence
/// does not). values[0] = 1 for both kinds.
struct WeightTable {
    double alpha = 0.0;
    WeightKind kind = WeightKind::Difference;
    std::vector<double> values;
};

/// Difference weights c_j = (-1)^j binom(alpha, j):
/// c_0 = 1, c_j = c_{j-1} (j-1-alpha)/j. Any real alpha.
inline WeightTable gl_diff_weights(double alpha, std::size_t count) {
    if (count == 0) throw std::invalid_argument("gl_diff_weights: count must be >= 1");
    WeightTable t{alpha, WeightKind::Difference, std::vector<double>(count)};
    t.values[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j)
        t.values[j] = t.values[j - 1] * (static_cast<double>(j) - 1.0 - alpha) / static_cast<double>(j);
    return t;
}

/// Sum weights of order alpha (difference weights of order alpha-1):
/// w_0 = 1, w_j = w_{j-1} (j-alpha)/j. For alpha in (0,1) these are
/// positive and nonincreasing.
inline WeightTable gl_sum_weights(double alpha, std::size_t count) {
    if (count == 0) throw std::invalid_argument("gl_sum_weights: count must be >= 1");
    WeightTable t{alpha, WeightKind::Sum, std::vector<double>(count)};
    t.values[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j)
        t.values[j] = t.values[j - 1] * (static_cast<double>(j) - alpha) / static_cast<double>(j);
    return t;
}

/// Exact binomial coefficient binom(n, j) for small integer n.
inline double binomial(int n, int j) {
    if (j < 0 || j > n) return 0.0;
    double acc = 1.0;
    for (int i = 1; i <= j; ++i) acc = acc * static_cast<double>(n - j + i) / static_cast<double>(i);
    return acc;
}

/// n-th integer backward difference at k; needs samples k-n..k.
inline std::vector<double> backward_difference(const SampledSignal& s, int n, GridIndex k) {
    if (n < 1) throw std::invalid_argument("backward_difference: order must be >= 1");
    if (!s.covers(k - n, k))
        throw std::out_of_range("backward_difference: signal does not cover k-n..k");
    std::vector<double> acc(s.dimension(), 0.0);
    for (int j = 0; j <= n; ++j) {
        const double w = (j % 2 == 0 ? 1.0 : -1.0) * binomial(n, j);
        for (std::size_t c = 0; c < s.dimension(); ++c) acc[c] += w * s.at(k - j, c);
    }
    return acc;
}

inline double backward_difference_scalar(const SampledSignal& s, int n, GridIndex k) {
    return backward_difference(s, n, k)[0];
}

/// Residuals (LHS - RHS) of the two summation-by-parts identities
///   sum_{j=a}^k f(j-1) nabla g(j) = f g |_{a-1}^k - sum_{j=a}^k nabla f(j) g(j)
///   sum_{j=a}^k f(j)   nabla g(j) = f g |_{a-1}^k - sum_{j=a}^k nabla f(j) g(j-1)
/// Both are identically zero in exact arithmetic.
inline std::pair<double, double> summation_by_parts_residuals(const SampledSignal& f,
                                                              const SampledSignal& g,
                                                              GridIndex a, GridIndex k) {
    if (f.dimension() != 1 || g.dimension() != 1)
        throw std::invalid_argument("summation_by_parts_residuals: scalar signals required");
    if (!f.covers(a - 1, k) || !g.covers(a - 1, k))
        throw std::invalid_argument("summation_by_parts_residuals: length mismatch (need a-1..k on both)");
    const double boundary = f.at(k) * g.at(k) - f.at(a - 1) * g.at(a - 1);
    double lhs1 = 0.0, rhs1 = 0.0, lhs2 = 0.0, rhs2 = 0.0;
    for (GridIndex j = a; j <= k; ++j) {
        const double df = f.at(j) - f.at(j - 1);
        const double dg = g.at(j) - g.at(j - 1);
        lhs1 += f.at(j - 1) * dg;
        rhs1 += df * g.at(j);
        lhs2 += f.at(j) * dg;
        rhs2 += df * g.at(j - 1);
    }
    return {lhs1 - (boundary - rhs1), lhs2 - (boundary - rhs2)};
}

}  // namespace nablafc
