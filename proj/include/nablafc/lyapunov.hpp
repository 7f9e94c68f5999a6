#pragma once

// Gap evaluators for the five Lyapunov inequality families (even
// power, conjugate power, power chain, dyadic power, quadratic form),
// their single-parameter corollary collapses, the Young inequality
// helper, and an SPD factorization. A gap is LHS - RHS of one
// inequality at one instant; correct theory makes it nonpositive for
// every admissible signal.

#include <limits>

#include "operators.hpp"

namespace nablafc {

enum class InequalityForm { EvenPower, ConjugatePower, PowerChain, Dyadic, QuadraticForm };

inline const char* to_string(InequalityForm f) {
    switch (f) {
        case InequalityForm::EvenPower: return "even_power";
        case InequalityForm::ConjugatePower: return "conjugate_power";
        case InequalityForm::PowerChain: return "power_chain";
        case InequalityForm::Dyadic: return "dyadic";
        case InequalityForm::QuadraticForm: return "quadratic_form";
    }
    return "?";
}

/// One inequality instance. m and n parametrize the exponents
/// (conjugate power needs 2m > n, power chain 2m >= n); the quadratic
/// form carries a symmetric positive definite kappa x kappa matrix.
struct InequalityKind {
    InequalityForm form = InequalityForm::EvenPower;
    int m = 1;
    int n = 1;
    std::vector<double> P;  // row-major, QuadraticForm only
    std::size_t kappa = 1;

    static InequalityKind even_power(int m) { return {InequalityForm::EvenPower, m, 1, {}, 1}; }
    static InequalityKind conjugate_power(int m, int n) {
        return {InequalityForm::ConjugatePower, m, n, {}, 1};
    }
    static InequalityKind power_chain(int m, int n) { return {InequalityForm::PowerChain, m, n, {}, 1}; }
    static InequalityKind dyadic(int m) { return {InequalityForm::Dyadic, m, 1, {}, 1}; }
    static InequalityKind quadratic_form(std::vector<double> P, std::size_t kappa) {
        return {InequalityForm::QuadraticForm, 1, 1, std::move(P), kappa};
    }
};

/// Young: (a^p/p + b^q/q) - a*b >= 0 for a,b >= 0 and conjugate
/// exponents; zero exactly when a^p = b^q.
inline double young_gap(double a, double b, double p, double q) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("young_gap: a and b must be nonnegative");
    if (!(p > 1.0 && q > 1.0) || std::fabs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
        throw std::domain_error("young_gap: exponents must be conjugate (1/p + 1/q = 1)");
    return std::pow(a, p) / p + std::pow(b, q) / q - a * b;
}

/// Cholesky-style factor M (upper triangular) with M^T M = P.
/// Throws if P is not symmetric to 1e-12 (relative) or a pivot fails.
inline std::vector<double> spd_factor(const std::vector<double>& P, std::size_t kappa) {
    if (P.size() != kappa * kappa) throw std::invalid_argument("spd_factor: size mismatch");
    double scale = 1.0;
    for (double v : P) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < kappa; ++i)
        for (std::size_t j = i + 1; j < kappa; ++j)
            if (std::fabs(P[i * kappa + j] - P[j * kappa + i]) > 1e-12 * scale)
                throw std::domain_error("spd_factor: matrix not symmetric");
    // P = L L^T rowwise; returned M = L^T.
    std::vector<double> L(kappa * kappa, 0.0);
    for (std::size_t i = 0; i < kappa; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = P[i * kappa + j];
            for (std::size_t t = 0; t < j; ++t) sum -= L[i * kappa + t] * L[j * kappa + t];
            if (i == j) {
                if (!(sum > 0.0)) throw std::domain_error("spd_factor: nonpositive pivot, matrix not SPD");
                L[i * kappa + i] = std::sqrt(sum);
            } else {
                L[i * kappa + j] = sum / L[j * kappa + j];
            }
        }
    }
    std::vector<double> M(kappa * kappa, 0.0);
    for (std::size_t i = 0; i < kappa; ++i)
        for (std::size_t j = 0; j <= i; ++j) M[j * kappa + i] = L[i * kappa + j];
    return M;
}

/// LHS, RHS and their difference for one inequality at one instant.
struct GapParts {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    /// Magnitude both sides are measured against, floored at 1.
    double scale() const { return std::max({1.0, std::fabs(lhs), std::fabs(rhs)}); }
};

namespace detail {

inline SampledSignal powered(const SampledSignal& s, long num, long den) {
    return s.map([num, den](double v) { return rational_power(v, num, den); });
}

inline void check_scalar(const SampledSignal& s, const char* who) {
    if (s.dimension() != 1) throw std::invalid_argument(std::string(who) + ": scalar signal required");
}

}  // namespace detail

/// Evaluate one inequality gap with an arbitrary bound operator
/// (standard, fixed-memory or variable-order family).
inline GapParts inequality_gap_parts(const InequalityKind& kind, const FractionalOperator& op,
                                     const SampledSignal& s, GridIndex k) {
    GapParts out;
    switch (kind.form) {
        case InequalityForm::EvenPower: {
            detail::check_scalar(s, "inequality_gap");
            if (kind.m < 1) throw std::domain_error("inequality_gap: m must be positive");
            const long m = kind.m;
            out.lhs = op.scalar(detail::powered(s, 2 * m, 1), k);
            out.rhs = 2.0 * int_power(s.at(k), m) * op.scalar(detail::powered(s, m, 1), k);
            break;
        }
        case InequalityForm::ConjugatePower: {
            detail::check_scalar(s, "inequality_gap");
            if (kind.m < 1 || kind.n < 1 || 2 * kind.m <= kind.n)
                throw std::domain_error("inequality_gap: conjugate power needs m,n >= 1 and 2m > n");
            const long m = kind.m, n = kind.n;
            out.lhs = op.scalar(detail::powered(s, 2 * m, n), k);
            out.rhs = (2.0 * m / (2.0 * m - n)) * s.at(k) * op.scalar(detail::powered(s, 2 * m - n, n), k);
            break;
        }
        case InequalityForm::PowerChain: {
            detail::check_scalar(s, "inequality_gap");
            if (kind.m < 1 || kind.n < 1 || 2 * kind.m < kind.n)
                throw std::domain_error("inequality_gap: power chain needs m,n >= 1 and 2m >= n");
            const long m = kind.m, n = kind.n;
            out.lhs = op.scalar(detail::powered(s, 2 * m, n), k);
            out.rhs = (2.0 * m / n) * rational_power(s.at(k), 2 * m - n, n) * op.scalar(s, k);
            break;
        }
        case InequalityForm::Dyadic: {
            detail::check_scalar(s, "inequality_gap");
            if (kind.m < 1 || kind.m > 30) throw std::domain_error("inequality_gap: dyadic m out of range");
            const long p = 1L << kind.m;
            out.lhs = op.scalar(detail::powered(s, p, 1), k);
            out.rhs = static_cast<double>(p) * int_power(s.at(k), p - 1) * op.scalar(s, k);
            break;
        }
        case InequalityForm::QuadraticForm: {
            if (s.dimension() != kind.kappa)
                throw std::invalid_argument("inequality_gap: quadratic form dimension mismatch");
            spd_factor(kind.P, kind.kappa);  // definiteness check
            const auto& P = kind.P;
            const std::size_t kap = kind.kappa;
            const auto quad = s.map_state([&](std::span<const double> y) {
                double v = 0.0;
                for (std::size_t i = 0; i < kap; ++i)
                    for (std::size_t j = 0; j < kap; ++j) v += y[i] * P[i * kap + j] * y[j];
                return v;
            });
            out.lhs = op.scalar(quad, k);
            const auto dy = op(s, k);
            double rhs = 0.0;
            for (std::size_t i = 0; i < kap; ++i)
                for (std::size_t j = 0; j < kap; ++j) rhs += s.at(k, i) * P[i * kap + j] * dy[j];
            out.rhs = 2.0 * rhs;
            break;
        }
    }
    out.gap = out.lhs - out.rhs;
    return out;
}

inline double inequality_gap(const InequalityKind& kind, const FractionalOperator& op,
                             const SampledSignal& s, GridIndex k) {
    return inequality_gap_parts(kind, op, s, k).gap;
}

inline double inequality_gap(const InequalityKind& kind, Definition def, const SampledSignal& s,
                             double alpha, GridIndex k) {
    return inequality_gap_parts(kind, FractionalOperator::standard(def, alpha), s, k).gap;
}

/// The three corollary collapses of the Caputo inequalities:
/// conjugate power at n = 1, power chain at n = 1, even power at m = 1.
enum class Corollary { ConjugateN1, ChainN1, SquareM1 };

inline const char* to_string(Corollary c) {
    switch (c) {
        case Corollary::ConjugateN1: return "conjugate_n1";
        case Corollary::ChainN1: return "chain_n1";
        case Corollary::SquareM1: return "square_m1";
    }
    return "?";
}

inline InequalityKind corollary_kind(Corollary v, int m = 1) {
    switch (v) {
        case Corollary::ConjugateN1: return InequalityKind::conjugate_power(m, 1);
        case Corollary::ChainN1: return InequalityKind::power_chain(m, 1);
        case Corollary::SquareM1: return InequalityKind::even_power(1);
    }
    throw std::invalid_argument("corollary_kind: unknown variant");
}

inline double corollary_gap(Corollary v, const SampledSignal& s, double alpha, GridIndex k, int m = 1) {
    return inequality_gap(corollary_kind(v, m), Definition::Caputo, s, alpha, k);
}

/// Per-instant gaps of one inequality over the whole sample range.
/// max_gap is the raw maximum; the violation count compares each gap
/// against tolerance * max(1, |LHS|, |RHS|), so equality cases do not
/// flag rounding noise.
struct GapReport {
    GridIndex base = 0;
    std::vector<double> gaps;  // k = base .. base+len-1
    double max_gap = 0.0;
    double tolerance = 1e-9;
    long violations = 0;
};

inline GapReport evaluate_gaps(const InequalityKind& kind, const FractionalOperator& op,
                               const SampledSignal& s, double tolerance = 1e-9) {
    GapReport rep;
    rep.base = s.base();
    rep.tolerance = tolerance;
    rep.max_gap = -std::numeric_limits<double>::infinity();
    for (GridIndex k = s.base(); k <= s.last(); ++k) {
        const auto parts = inequality_gap_parts(kind, op, s, k);
        rep.gaps.push_back(parts.gap);
        rep.max_gap = std::max(rep.max_gap, parts.gap);
        if (parts.gap > tolerance * parts.scale()) ++rep.violations;
    }
    if (rep.gaps.empty()) rep.max_gap = 0.0;
    return rep;
}

}  // namespace nablafc
