#pragma once

// The three nabla fractional differences on sampled signals, the
// RL = Caputo + correction bridge, and the variants with modified
// base, fixed memory window and time-varying order.
//
// Conventions: any sum whose upper limit falls below its lower limit
// is 0. Orders for RL/Caputo live in (0,1]; the closed endpoint
// degenerates exactly to the first backward difference. All operators
// act componentwise on vector signals and accumulate lag-ascending,
// so algebraically equal routes are bit-equal.

#include <algorithm>

#include "kernel.hpp"

namespace nablafc {

namespace detail {

inline void check_unit_order(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error(std::string(who) + ": order must lie in (0,1]");
}

inline void require_cover(const SampledSignal& s, GridIndex lo, GridIndex hi, const char* who) {
    if (!s.covers(lo, hi))
        throw std::out_of_range(std::string(who) + ": signal does not cover " + std::to_string(lo) +
                                ".." + std::to_string(hi));
}

// sum_{j=0}^{count-1} w[j] * x(k-j), componentwise
inline std::vector<double> lag_sum(const SampledSignal& s, const std::vector<double>& w,
                                   std::size_t count, GridIndex k) {
    std::vector<double> acc(s.dimension(), 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        const GridIndex idx = k - static_cast<GridIndex>(j);
        for (std::size_t c = 0; c < s.dimension(); ++c) acc[c] += w[j] * s.at(idx, c);
    }
    return acc;
}

// sum_{j=0}^{count-1} w[j] * (x(k-j) - x(k-j-1))
inline std::vector<double> lag_nabla_sum(const SampledSignal& s, const std::vector<double>& w,
                                         std::size_t count, GridIndex k) {
    std::vector<double> acc(s.dimension(), 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        const GridIndex idx = k - static_cast<GridIndex>(j);
        for (std::size_t c = 0; c < s.dimension(); ++c)
            acc[c] += w[j] * (s.at(idx, c) - s.at(idx - 1, c));
    }
    return acc;
}

}  // namespace detail

/// Grunwald-Letnikov difference of order alpha at k:
/// sum_{j=0}^{k-a} c_j x(k-j). Any real alpha; at k = a this is x(a).
inline std::vector<double> gl_difference(const SampledSignal& s, double alpha, GridIndex k) {
    if (k < s.base()) throw std::out_of_range("gl_difference: k below base");
    detail::require_cover(s, s.base(), k, "gl_difference");
    const std::size_t count = static_cast<std::size_t>(k - s.base()) + 1;
    return detail::lag_sum(s, gl_diff_weights(alpha, count).values, count, k);
}

/// Caputo difference (sum-after-difference) of order alpha in (0,1]:
/// sum_{j=a}^{k} w_{k-j} nabla x(j). At k = a this is nabla x(a).
inline std::vector<double> caputo_difference(const SampledSignal& s, double alpha, GridIndex k) {
    detail::check_unit_order(alpha, "caputo_difference");
    if (k < s.base()) throw std::out_of_range("caputo_difference: k below base");
    detail::require_cover(s, s.base() - 1, k, "caputo_difference");
    const std::size_t count = static_cast<std::size_t>(k - s.base()) + 1;
    return detail::lag_nabla_sum(s, gl_sum_weights(alpha, count).values, count, k);
}

/// Riemann-Liouville difference (difference-after-sum) of order alpha
/// in (0,1]: nabla of the order-(alpha-1) GL sum, with the empty sum
/// at a-1 taken as 0 (so the value at k = a is x(a)).
inline std::vector<double> rl_difference(const SampledSignal& s, double alpha, GridIndex k) {
    detail::check_unit_order(alpha, "rl_difference");
    if (k < s.base()) throw std::out_of_range("rl_difference: k below base");
    detail::require_cover(s, s.base(), k, "rl_difference");
    const std::size_t count = static_cast<std::size_t>(k - s.base()) + 1;
    const auto w = gl_sum_weights(alpha, count);
    auto acc = detail::lag_sum(s, w.values, count, k);
    if (k > s.base()) {
        const auto prev = detail::lag_sum(s, w.values, count - 1, k - 1);
        for (std::size_t c = 0; c < s.dimension(); ++c) acc[c] -= prev[c];
    }
    return acc;
}

/// RL via the bridge: Caputo value plus the initial-sample correction
/// (k-a+1)^(-alpha)/Gamma(1-alpha) * x(a-1). Defined for k >= a+1;
/// agrees with rl_difference to rounding.
inline std::vector<double> rl_from_caputo(const SampledSignal& s, double alpha, GridIndex k) {
    detail::check_unit_order(alpha, "rl_from_caputo");
    if (k <= s.base()) throw std::out_of_range("rl_from_caputo: requires k >= a+1");
    auto acc = caputo_difference(s, alpha, k);
    const double corr = rising_factorial_ratio(k - s.base() + 1, -alpha) / std::tgamma(1.0 - alpha);
    for (std::size_t c = 0; c < s.dimension(); ++c) acc[c] += corr * s.at(s.base() - 1, c);
    return acc;
}

/// GL difference with the modified base (sum truncated at lag k-a-1,
/// so the sample at a is never touched). Defined for k >= a+1;
/// at k = a+1 it is just x(a+1).
inline std::vector<double> gl_modified_difference(const SampledSignal& s, double alpha, GridIndex k) {
    if (k <= s.base()) throw std::out_of_range("gl_modified_difference: requires k >= a+1");
    detail::require_cover(s, s.base() + 1, k, "gl_modified_difference");
    const std::size_t count = static_cast<std::size_t>(k - s.base() - 1) + 1;
    return detail::lag_sum(s, gl_diff_weights(alpha, count).values, count, k);
}

/// Fixed-memory variants: the convolution keeps only the most recent
/// memory+1 lags. The window is clamped at the base instant, so
/// memory >= k-a reproduces the full-history operator exactly. Once
/// the window clears the base (k > a + memory) the n = 1 RL and
/// Caputo forms coincide.
inline std::vector<double> fixed_memory_difference(const SampledSignal& s, double alpha, int memory,
                                                   GridIndex k, Definition kind) {
    if (memory < 0) throw std::invalid_argument("fixed_memory_difference: memory must be >= 0");
    if (k < s.base()) throw std::out_of_range("fixed_memory_difference: k below base");
    detail::require_cover(s, std::max(s.base(), k - memory) - 1, k, "fixed_memory_difference");
    const int window = std::min<long>(memory, k - s.base());
    const std::size_t count = static_cast<std::size_t>(window) + 1;
    switch (kind) {
        case Definition::GL:
            return detail::lag_sum(s, gl_diff_weights(alpha, count).values, count, k);
        case Definition::Caputo:
            detail::check_unit_order(alpha, "fixed_memory_difference");
            return detail::lag_nabla_sum(s, gl_sum_weights(alpha, count).values, count, k);
        case Definition::RL: {
            detail::check_unit_order(alpha, "fixed_memory_difference");
            const auto w = gl_sum_weights(alpha, count);
            auto acc = detail::lag_sum(s, w.values, count, k);
            const int prev_window = std::min<long>(memory, k - 1 - s.base());
            if (prev_window >= 0) {
                const auto prev =
                    detail::lag_sum(s, w.values, static_cast<std::size_t>(prev_window) + 1, k - 1);
                for (std::size_t c = 0; c < s.dimension(); ++c) acc[c] -= prev[c];
            }
            return acc;
        }
    }
    throw std::invalid_argument("fixed_memory_difference: unknown definition");
}

/// Time-varying order: the weights are generated from alpha(k) frozen
/// at the evaluation instant (no per-lag order mixing).
inline std::vector<double> variable_order_difference(const SampledSignal& s, const VariableOrder& orders,
                                                     GridIndex k, Definition kind) {
    const double alpha = orders.at(k);
    switch (kind) {
        case Definition::GL: return gl_difference(s, alpha, k);
        case Definition::Caputo: return caputo_difference(s, alpha, k);
        case Definition::RL: return rl_difference(s, alpha, k);
    }
    throw std::invalid_argument("variable_order_difference: unknown definition");
}

/// A bound fractional-difference evaluator: one definition plus the
/// family parameters (standard / fixed memory / variable order).
/// Lets the inequality machinery treat all families uniformly.
class FractionalOperator {
public:
    static FractionalOperator standard(Definition def, double alpha) {
        FractionalOperator op;
        op.def_ = def;
        op.family_ = Family::Standard;
        op.alpha_ = alpha;
        return op;
    }

    static FractionalOperator fixed_memory(Definition def, double alpha, int memory) {
        FractionalOperator op;
        op.def_ = def;
        op.family_ = Family::FixedMemory;
        op.alpha_ = alpha;
        op.memory_ = memory;
        return op;
    }

    static FractionalOperator variable_order(Definition def, VariableOrder orders) {
        FractionalOperator op;
        op.def_ = def;
        op.family_ = Family::VariableOrder;
        op.orders_ = std::move(orders);
        return op;
    }

    std::vector<double> operator()(const SampledSignal& s, GridIndex k) const {
        switch (family_) {
            case Family::Standard:
                switch (def_) {
                    case Definition::GL: return gl_difference(s, alpha_, k);
                    case Definition::RL: return rl_difference(s, alpha_, k);
                    case Definition::Caputo: return caputo_difference(s, alpha_, k);
                }
                break;
            case Family::FixedMemory:
                return fixed_memory_difference(s, alpha_, memory_, k, def_);
            case Family::VariableOrder:
                return variable_order_difference(s, orders_, k, def_);
        }
        throw std::invalid_argument("FractionalOperator: bad state");
    }

    double scalar(const SampledSignal& s, GridIndex k) const { return (*this)(s, k)[0]; }

    Definition definition() const noexcept { return def_; }

private:
    enum class Family { Standard, FixedMemory, VariableOrder };
    FractionalOperator() = default;

    Definition def_ = Definition::Caputo;
    Family family_ = Family::Standard;
    double alpha_ = 0.5;
    int memory_ = 0;
    VariableOrder orders_{};
};

}  // namespace nablafc
