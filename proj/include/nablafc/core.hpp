#pragma once

// Grid/signal types shared by every module of the nabla fractional
// calculus toolkit. Signals live on the integer grid a-1, a, a+1, ...
// (base instant a plus at least one pre-base sample, which the Caputo
// and Riemann-Liouville operators need).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nablafc {

inline constexpr const char* kToolVersion = "0.1.0";

/// A point of the grid N_{a-h}; plain int, alias for readability.
using GridIndex = int;

enum class Definition { GL, RL, Caputo };

inline const char* to_string(Definition d) {
    switch (d) {
        case Definition::GL: return "gl";
        case Definition::RL: return "rl";
        case Definition::Caputo: return "caputo";
    }
    return "?";
}

/// x^n by repeated multiplication (exact sign handling, reproducible).
inline double int_power(double x, long n) {
    if (n < 0) return 1.0 / int_power(x, -n);
    double acc = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

/// sign(v) * |v|^p, the odd-root reading of fractional powers on
/// possibly negative states; continuous and odd in v.
inline double signed_power(double v, double p) {
    if (!(p > 0.0)) throw std::domain_error("signed_power: exponent must be positive");
    if (v == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(v), p), v);
}

/// x^(num/den). The fraction is reduced first; an odd reduced
/// denominator selects signed-root semantics, an even one requires
/// x >= 0. num == 0 gives 1 (0^0 = 1 convention).
inline double rational_power(double x, long num, long den) {
    if (den <= 0) throw std::domain_error("rational_power: denominator must be positive");
    if (num == 0) return 1.0;
    const long g = std::gcd(num < 0 ? -num : num, den);
    num /= g;
    den /= g;
    if (den == 1) return int_power(x, num);
    if (den % 2 == 0) {
        if (x < 0.0) throw std::domain_error("rational_power: negative base under an even root");
        return std::pow(x, static_cast<double>(num) / static_cast<double>(den));
    }
    const double mag = std::pow(std::fabs(x), static_cast<double>(num) / static_cast<double>(den));
    return (x < 0.0 && num % 2 != 0) ? -mag : mag;
}

/// A real scalar or vector sequence on grid points a-h, ..., a-1, a,
/// ..., a+len-1. Component values are stored contiguously per
/// component; all entries are required to be finite.
class SampledSignal {
public:
    SampledSignal(GridIndex base, std::size_t dimension, std::size_t history_depth = 1)
        : base_(base), dim_(dimension), hist_(history_depth), cols_(dimension) {
        if (dimension == 0) throw std::invalid_argument("SampledSignal: dimension must be positive");
        if (history_depth == 0) throw std::invalid_argument("SampledSignal: need at least one pre-base sample");
    }

    /// Scalar signal from one pre-base value and the samples at a, a+1, ...
    static SampledSignal scalar(GridIndex base, double pre_base, std::vector<double> samples) {
        SampledSignal s(base, 1);
        s.set_history({{pre_base}});
        for (double v : samples) s.append({&v, 1});
        return s;
    }

    /// Scalar signal with history a-h..a-1 (deepest first).
    static SampledSignal scalar_with_history(GridIndex base, const std::vector<double>& history,
                                             const std::vector<double>& samples) {
        SampledSignal s(base, 1, history.size());
        std::vector<std::vector<double>> rows;
        rows.reserve(history.size());
        for (double v : history) rows.push_back({v});
        s.set_history(rows);
        for (double v : samples) s.append({&v, 1});
        return s;
    }

    /// Vector signal: pre_base is x(a-1), states are x(a), x(a+1), ...
    static SampledSignal vector_valued(GridIndex base, const std::vector<double>& pre_base,
                                       const std::vector<std::vector<double>>& states) {
        SampledSignal s(base, pre_base.size());
        s.set_history({pre_base});
        for (const auto& row : states) s.append(row);
        return s;
    }

    void set_history(const std::vector<std::vector<double>>& rows) {
        if (rows.size() != hist_) throw std::invalid_argument("SampledSignal: history depth mismatch");
        for (std::size_t c = 0; c < dim_; ++c) cols_[c].clear();
        for (const auto& row : rows) {
            check_row(row.size());
            for (std::size_t c = 0; c < dim_; ++c) cols_[c].push_back(checked(row[c]));
        }
        len_ = 0;
    }

    void append(std::span<const double> state) {
        check_row(state.size());
        for (std::size_t c = 0; c < dim_; ++c) cols_[c].push_back(checked(state[c]));
        ++len_;
    }

    void append(const std::vector<double>& state) { append(std::span<const double>(state)); }
    void append(double v) { append({&v, 1}); }

    GridIndex base() const noexcept { return base_; }
    GridIndex first() const noexcept { return base_ - static_cast<GridIndex>(hist_); }
    GridIndex last() const noexcept { return base_ + static_cast<GridIndex>(len_) - 1; }
    std::size_t dimension() const noexcept { return dim_; }
    std::size_t sample_count() const noexcept { return len_; }
    bool covers(GridIndex lo, GridIndex hi) const noexcept { return lo >= first() && hi <= last() && lo <= hi; }

    double at(GridIndex k, std::size_t c = 0) const {
        if (k < first() || k > last())
            throw std::out_of_range("SampledSignal: index " + std::to_string(k) + " outside " +
                                    std::to_string(first()) + ".." + std::to_string(last()));
        if (c >= dim_) throw std::out_of_range("SampledSignal: component out of range");
        return cols_[c][static_cast<std::size_t>(k - first())];
    }

    std::vector<double> state(GridIndex k) const {
        std::vector<double> row(dim_);
        for (std::size_t c = 0; c < dim_; ++c) row[c] = at(k, c);
        return row;
    }

    /// One component as a scalar signal.
    SampledSignal component(std::size_t c) const {
        if (c >= dim_) throw std::out_of_range("SampledSignal: component out of range");
        SampledSignal out(base_, 1, hist_);
        out.cols_[0] = cols_[c];
        out.len_ = len_;
        return out;
    }

    /// Pointwise map, applied to every component and every grid point.
    SampledSignal map(const std::function<double(double)>& fn) const {
        SampledSignal out(base_, dim_, hist_);
        out.cols_ = cols_;
        out.len_ = len_;
        for (auto& col : out.cols_)
            for (auto& v : col) v = checked(fn(v));
        return out;
    }

    /// Scalar signal built by collapsing each state through fn.
    SampledSignal map_state(const std::function<double(std::span<const double>)>& fn) const {
        SampledSignal out(base_, 1, hist_);
        std::vector<double> row(dim_);
        for (GridIndex k = first(); k <= last(); ++k) {
            for (std::size_t c = 0; c < dim_; ++c) row[c] = at(k, c);
            out.cols_[0].push_back(checked(fn(row)));
        }
        out.len_ = len_;
        return out;
    }

private:
    void check_row(std::size_t n) const {
        if (n != dim_) throw std::invalid_argument("SampledSignal: state dimension mismatch");
    }
    static double checked(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("SampledSignal: non-finite entry");
        return v;
    }

    GridIndex base_;
    std::size_t dim_;
    std::size_t hist_;
    std::vector<std::vector<double>> cols_;
    std::size_t len_ = 0;
};

/// Time-varying order alpha(k), defined on k = base, base+1, ...
struct VariableOrder {
    GridIndex base = 0;
    std::vector<double> orders;

    double at(GridIndex k) const {
        if (k < base || k >= base + static_cast<GridIndex>(orders.size()))
            throw std::out_of_range("VariableOrder: order not defined at k=" + std::to_string(k));
        return orders[static_cast<std::size_t>(k - base)];
    }
};

}  // namespace nablafc
