#pragma once

// Randomized property harness: draws signals (uniform plus adversarial
// families that probe the equality cases), inequality parameters and
// orders, and aggregates the gap of every (inequality, definition)
// pair at every instant. Deterministic for a fixed seed; the random
// doubles come straight from mt19937_64 bits so reports reproduce
// bit-identically.

#include <numeric>
#include <random>

#include "lyapunov.hpp"

namespace nablafc {

enum class OperatorFamily { Standard, FixedMemory, VariableOrder };

inline const char* to_string(OperatorFamily f) {
    switch (f) {
        case OperatorFamily::Standard: return "standard";
        case OperatorFamily::FixedMemory: return "fixed_memory";
        case OperatorFamily::VariableOrder: return "variable_order";
    }
    return "?";
}

struct SuiteConfig {
    long trials = 200;
    int max_len = 50;
    double value_min = -2.0;
    double value_max = 2.0;
    double alpha_min = 0.05;
    double alpha_max = 0.95;
    std::uint64_t seed = 42;
    double tolerance = 1e-9;
    OperatorFamily family = OperatorFamily::Standard;
    int memory = -1;  // FixedMemory window; -1 = always cover the full history
    double order_min = 0.1;
    double order_max = 0.9;  // VariableOrder range
};

struct PairReport {
    std::string kind;
    std::string definition;
    long trials = 0;
    double max_gap = 0.0;  // max normalized gap over all trials/instants
    long violations = 0;
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<PairReport> pairs;

    long total_violations() const {
        long n = 0;
        for (const auto& p : pairs) n += p.violations;
        return n;
    }
    double worst_gap() const {
        double g = -std::numeric_limits<double>::infinity();
        for (const auto& p : pairs) g = std::max(g, p.max_gap);
        return pairs.empty() ? 0.0 : g;
    }
};

namespace detail {

/// Deterministic RNG wrapper: doubles derived from raw engine bits
/// (std distributions are not pinned across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    long integer(long lo, long hi) {  // inclusive bounds
        return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 eng_;
};

// Signal families: 0 uniform, 1 constant, 2 alternating sign,
// 3 spike, 4 monotone ramp.
inline std::vector<double> draw_values(Rng& rng, std::size_t count, double lo, double hi) {
    std::vector<double> v(count);
    switch (rng.integer(0, 4)) {
        case 0:
            for (auto& x : v) x = rng.uniform(lo, hi);
            break;
        case 1: {
            const double c = rng.uniform(lo, hi);
            for (auto& x : v) x = c;
            break;
        }
        case 2: {
            const double c = std::fabs(rng.uniform(lo, hi));
            for (std::size_t i = 0; i < count; ++i) v[i] = (i % 2 == 0) ? c : -c;
            break;
        }
        case 3: {
            const double base = rng.uniform(lo, hi) * 0.05;
            for (auto& x : v) x = base;
            v[static_cast<std::size_t>(rng.integer(0, static_cast<long>(count) - 1))] = rng.uniform(lo, hi);
            break;
        }
        default: {
            const double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
            for (std::size_t i = 0; i < count; ++i)
                v[i] = a + (b - a) * (count > 1 ? static_cast<double>(i) / (count - 1) : 0.0);
            break;
        }
    }
    return v;
}

/// Negative bases are admissible for exponent 2m/n only when the
/// reduced numerator of 2m/n is even; otherwise fold nonnegative.
inline bool needs_nonnegative(int m, int n) {
    const long g = std::gcd(2L * m, static_cast<long>(n));
    return ((2L * m) / g) % 2 != 0;
}

struct PairSpec {
    std::string kind_label;
    Definition def;
    bool corollary = false;
    InequalityForm form = InequalityForm::EvenPower;
    Corollary variant = Corollary::SquareM1;
};

inline FractionalOperator make_operator(const SuiteConfig& cfg, Definition def, double alpha,
                                        const VariableOrder& orders) {
    switch (cfg.family) {
        case OperatorFamily::Standard: return FractionalOperator::standard(def, alpha);
        case OperatorFamily::FixedMemory: {
            const int mem = cfg.memory >= 0 ? cfg.memory : cfg.max_len + 2;
            return FractionalOperator::fixed_memory(def, alpha, mem);
        }
        case OperatorFamily::VariableOrder: return FractionalOperator::variable_order(def, orders);
    }
    throw std::invalid_argument("make_operator: unknown family");
}

}  // namespace detail

/// Run the full harness: 5 inequality forms x definitions plus the 3
/// corollary variants, `trials` random signals each, gaps at every
/// admissible instant. The variable-order RL pair is excluded (no
/// inequality guarantee exists for it), as is RL for the fixed-memory
/// family, where it coincides with Caputo.
inline SuiteReport run_property_suite(const SuiteConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_property_suite: trials must be >= 1");
    if (cfg.max_len < 1) throw std::invalid_argument("run_property_suite: max_len must be >= 1");
    if (!(cfg.alpha_min > 0.0 && cfg.alpha_max <= 1.0 && cfg.alpha_min < cfg.alpha_max))
        throw std::invalid_argument("run_property_suite: alpha range must sit inside (0,1]");

    const std::vector<Definition> defs =
        cfg.family == OperatorFamily::Standard
            ? std::vector<Definition>{Definition::GL, Definition::RL, Definition::Caputo}
            : std::vector<Definition>{Definition::GL, Definition::Caputo};

    std::vector<detail::PairSpec> specs;
    for (auto form : {InequalityForm::EvenPower, InequalityForm::ConjugatePower,
                      InequalityForm::PowerChain, InequalityForm::Dyadic, InequalityForm::QuadraticForm})
        for (auto def : defs) specs.push_back({to_string(form), def, false, form, {}});
    for (auto variant : {Corollary::ConjugateN1, Corollary::ChainN1, Corollary::SquareM1})
        specs.push_back({to_string(variant), Definition::Caputo, true, {}, variant});

    SuiteReport report;
    report.config = cfg;

    for (std::size_t pi = 0; pi < specs.size(); ++pi) {
        const auto& spec = specs[pi];
        detail::Rng rng(cfg.seed ^ (0x9E3779B97F4A7C15ull * (pi + 1)));
        PairReport pr;
        pr.kind = spec.kind_label;
        pr.definition = to_string(spec.def);
        pr.trials = cfg.trials;
        pr.max_gap = -std::numeric_limits<double>::infinity();

        for (long trial = 0; trial < cfg.trials; ++trial) {
            const int len = static_cast<int>(rng.integer(1, cfg.max_len));
            const GridIndex base = static_cast<GridIndex>(rng.integer(-3, 3));
            const double alpha = rng.uniform(cfg.alpha_min, cfg.alpha_max);
            VariableOrder orders;
            if (cfg.family == OperatorFamily::VariableOrder) {
                orders.base = base;
                orders.orders.resize(static_cast<std::size_t>(len));
                for (auto& o : orders.orders) o = rng.uniform(cfg.order_min, cfg.order_max);
            }
            const auto op = detail::make_operator(cfg, spec.def, alpha, orders);

            InequalityKind kind;
            bool fold_nonneg = false;
            std::size_t dim = 1;
            if (spec.corollary) {
                const int m = static_cast<int>(rng.integer(1, 3));
                kind = corollary_kind(spec.variant, m);
                fold_nonneg = kind.form == InequalityForm::ConjugatePower ||
                                      kind.form == InequalityForm::PowerChain
                                  ? detail::needs_nonnegative(kind.m, kind.n)
                                  : false;
            } else {
                switch (spec.form) {
                    case InequalityForm::EvenPower:
                        kind = InequalityKind::even_power(static_cast<int>(rng.integer(1, 3)));
                        break;
                    case InequalityForm::ConjugatePower: {
                        const int m = static_cast<int>(rng.integer(1, 3));
                        const int n = static_cast<int>(rng.integer(1, 2 * m - 1));
                        kind = InequalityKind::conjugate_power(m, n);
                        fold_nonneg = detail::needs_nonnegative(m, n);
                        break;
                    }
                    case InequalityForm::PowerChain: {
                        const int m = static_cast<int>(rng.integer(1, 3));
                        const int n = static_cast<int>(rng.integer(1, 2 * m));
                        kind = InequalityKind::power_chain(m, n);
                        fold_nonneg = detail::needs_nonnegative(m, n);
                        break;
                    }
                    case InequalityForm::Dyadic:
                        kind = InequalityKind::dyadic(static_cast<int>(rng.integer(1, 3)));
                        break;
                    case InequalityForm::QuadraticForm: {
                        dim = static_cast<std::size_t>(rng.integer(1, 3));
                        std::vector<double> A(dim * dim);
                        for (auto& v : A) v = rng.uniform(-1.0, 1.0);
                        std::vector<double> P(dim * dim, 0.0);
                        for (std::size_t i = 0; i < dim; ++i)
                            for (std::size_t j = 0; j < dim; ++j) {
                                for (std::size_t t = 0; t < dim; ++t)
                                    P[i * dim + j] += A[t * dim + i] * A[t * dim + j];
                                if (i == j) P[i * dim + j] += 0.25;
                            }
                        kind = InequalityKind::quadratic_form(std::move(P), dim);
                        break;
                    }
                }
            }

            SampledSignal sig(base, dim);
            {
                std::vector<std::vector<double>> rows(static_cast<std::size_t>(len) + 1,
                                                      std::vector<double>(dim));
                for (std::size_t c = 0; c < dim; ++c) {
                    auto vals =
                        detail::draw_values(rng, static_cast<std::size_t>(len) + 1, cfg.value_min, cfg.value_max);
                    if (fold_nonneg)
                        for (auto& v : vals) v = std::fabs(v);
                    for (std::size_t i = 0; i < vals.size(); ++i) rows[i][c] = vals[i];
                }
                sig.set_history({rows[0]});
                for (std::size_t i = 1; i < rows.size(); ++i) sig.append(rows[i]);
            }

            for (GridIndex k = sig.base(); k <= sig.last(); ++k) {
                const auto parts = inequality_gap_parts(kind, op, sig, k);
                const double normalized = parts.gap / parts.scale();
                pr.max_gap = std::max(pr.max_gap, normalized);
                if (normalized > cfg.tolerance) ++pr.violations;
            }
        }
        report.pairs.push_back(std::move(pr));
    }
    return report;
}

}  // namespace nablafc
