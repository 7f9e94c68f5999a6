#pragma once

// Simulation of nonlinear Caputo nabla fractional difference systems
//   C-nabla^alpha x(k) = f(x(k)),  x(a-1) given, alpha in (0,1].
//
// With w the order-alpha sum weights (w_0 = 1), the instant-k equation
// isolates as  x(k) = x(k-1) - H(k) + f(x(k)),  where H(k) collects
// the weighted history increments. Each step solves this implicit
// equation by damped fixed-point iteration, halving the damping on
// divergence; a damped Newton fallback with a finite-difference
// Jacobian covers stiff fields the fixed point cannot contract.

#include <cstdio>
#include <limits>

#include "operators.hpp"

namespace nablafc {

struct SolverConfig {
    double tolerance = 1e-12;  // infinity norm of the step defect
    int max_iterations = 100;  // per damping level / Newton phase
    double damping = 1.0;
};

using VectorField = std::function<std::vector<double>(const std::vector<double>&)>;

struct SystemSpec {
    std::size_t dimension = 1;
    double alpha = 0.8;
    GridIndex base = 0;
    std::vector<double> initial_state;  // x(a-1)
    VectorField field;
    SolverConfig solver{};
};

/// Hard per-step failure: carries the failing instant, the last defect
/// and the states computed so far (x(a-1) .. x(k-1)).
struct NonConvergence : std::runtime_error {
    NonConvergence(GridIndex k_, double defect_, std::string what)
        : std::runtime_error(std::move(what)), k(k_), defect(defect_) {}
    GridIndex k;
    double defect;
    std::vector<std::vector<double>> partial_states;
};

struct Trajectory {
    GridIndex base = 0;
    std::vector<std::vector<double>> states;  // index i holds x(base-1+i)
    std::vector<int> iterations;              // solver iterations; 0 for the x(a-1) row
    double max_residual = 0.0;                // defect through the operators module

    SampledSignal signal() const {
        if (states.empty()) throw std::invalid_argument("Trajectory: empty");
        SampledSignal s(base, states.front().size());
        s.set_history({states.front()});
        for (std::size_t i = 1; i < states.size(); ++i) s.append(states[i]);
        return s;
    }
};

namespace detail {

inline double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Gaussian elimination with partial pivoting; false on a (near)
// singular matrix. A is row-major dim x dim, b overwritten in place.
inline bool solve_dense(std::vector<double> A, std::vector<double>& b, std::size_t dim) {
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r)
            if (std::fabs(A[r * dim + col]) > std::fabs(A[piv * dim + col])) piv = r;
        if (std::fabs(A[piv * dim + col]) < 1e-300) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < dim; ++c) std::swap(A[piv * dim + c], A[col * dim + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < dim; ++r) {
            const double factor = A[r * dim + col] / A[col * dim + col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < dim; ++c) A[r * dim + c] -= factor * A[col * dim + c];
            b[r] -= factor * b[col];
        }
    }
    for (std::size_t ri = dim; ri-- > 0;) {
        double sum = b[ri];
        for (std::size_t c = ri + 1; c < dim; ++c) sum -= A[ri * dim + c] * b[c];
        b[ri] = sum / A[ri * dim + ri];
    }
    return all_finite(b);
}

// Solve x = c + f(x), starting from `start`. Returns the solution and
// accumulates iteration counts; throws NonConvergence on failure.
inline std::vector<double> solve_implicit(const std::vector<double>& c, const std::vector<double>& start,
                                          const VectorField& field, std::size_t dim,
                                          const SolverConfig& cfg, GridIndex k, int& iterations) {
    const double tol = cfg.tolerance;
    auto defect_of = [&](const std::vector<double>& x) {
        auto F = field(x);
        if (F.size() != dim) throw std::invalid_argument("field: wrong output dimension");
        for (std::size_t i = 0; i < dim; ++i) F[i] += c[i] - x[i];
        return F;  // F = c + f(x) - x
    };

    std::vector<double> best_x = start;
    double best_norm = std::numeric_limits<double>::infinity();
    auto consider = [&](const std::vector<double>& x, double norm) {
        if (norm < best_norm) {
            best_norm = norm;
            best_x = x;
        }
    };

    // Damped fixed point, halving the damping after a diverging attempt.
    // An attempt that merely runs out of iterations falls through to
    // Newton; smaller damping would only slow it further.
    const double theta0 = std::min(1.0, std::max(cfg.damping, 1.0 / 64.0));
    for (double theta = theta0; theta >= theta0 / 64.0 - 1e-15; theta *= 0.5) {
        std::vector<double> x = start;
        double initial = -1.0;
        bool diverged = false;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            ++iterations;
            auto d = defect_of(x);
            if (!all_finite(d) || !all_finite(x)) {
                diverged = true;
                break;
            }
            double norm = 0.0;
            for (double v : d) norm = std::max(norm, std::fabs(v));
            consider(x, norm);
            if (norm <= tol) return x;
            if (initial < 0.0) initial = norm;
            if (norm > 10.0 * initial + 1.0) {
                diverged = true;
                break;
            }
            for (std::size_t i = 0; i < dim; ++i) x[i] += theta * d[i];
        }
        if (!diverged) break;
    }

    // Newton on G(x) = x - c - f(x) from the best iterate seen.
    // Finite-difference Jacobian with a step proportional to |x_j| and
    // taken away from zero, so power-law kinks at the origin (odd
    // roots in the field) do not wreck the column. Backtracking line
    // search on the defect norm.
    {
        std::vector<double> x = best_x;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            ++iterations;
            auto d = defect_of(x);  // d = -G
            double norm = 0.0;
            for (double v : d) norm = std::max(norm, std::fabs(v));
            if (!all_finite(d)) break;
            consider(x, norm);
            if (norm <= tol) return x;

            std::vector<double> J(dim * dim, 0.0);  // J = I - df/dx
            auto fx = field(x);
            for (std::size_t j = 0; j < dim; ++j) {
                const double h = (x[j] < 0.0 ? -1.0 : 1.0) * (1e-7 * std::fabs(x[j]) + 1e-14);
                auto xp = x;
                xp[j] += h;
                auto fp = field(xp);
                for (std::size_t i = 0; i < dim; ++i)
                    J[i * dim + j] = (i == j ? 1.0 : 0.0) - (fp[i] - fx[i]) / h;
            }
            std::vector<double> step = d;  // solve J step = d  (= -G)
            if (!solve_dense(J, step, dim)) break;

            bool accepted = false;
            double t = 1.0;
            for (int ls = 0; ls < 45; ++ls, t *= 0.5) {
                auto xt = x;
                for (std::size_t i = 0; i < dim; ++i) xt[i] += t * step[i];
                auto dt = defect_of(xt);
                if (!all_finite(dt)) continue;
                double nt = 0.0;
                for (double v : dt) nt = std::max(nt, std::fabs(v));
                if (nt < norm) {
                    x = xt;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
    }

    char defect_text[32];
    std::snprintf(defect_text, sizeof(defect_text), "%.3e", best_norm);
    throw NonConvergence(k, best_norm, "implicit step did not converge at k=" + std::to_string(k) +
                                           " (defect " + defect_text + ")");
}

}  // namespace detail

/// Solve one implicit step: returns x(k) given samples a-1..k-1.
inline std::vector<double> step(const SampledSignal& history, const SystemSpec& spec, GridIndex k,
                                int* iterations = nullptr) {
    if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
        throw std::domain_error("step: order must lie in (0,1]");
    if (k < spec.base) throw std::out_of_range("step: k below base");
    detail::require_cover(history, spec.base - 1, k - 1, "step");
    const std::size_t dim = spec.dimension;

    const auto w = gl_sum_weights(spec.alpha, static_cast<std::size_t>(k - spec.base) + 1);
    std::vector<double> c(dim);
    for (std::size_t d = 0; d < dim; ++d) c[d] = history.at(k - 1, d);
    for (GridIndex j = spec.base; j <= k - 1; ++j) {
        const double wj = w.values[static_cast<std::size_t>(k - j)];
        for (std::size_t d = 0; d < dim; ++d) c[d] -= wj * (history.at(j, d) - history.at(j - 1, d));
    }

    int iters = 0;
    auto x = detail::solve_implicit(c, history.state(k - 1), spec.field, dim, spec.solver, k, iters);
    if (iterations) *iterations = iters;
    return x;
}

/// Max over k of || C-nabla^alpha x(k) - f(x(k)) ||_inf, recomputed
/// from the stored trajectory through the operators module, i.e. a
/// pathway independent of the stepper's incremental history sums.
inline double residual(const Trajectory& traj, const SystemSpec& spec) {
    const auto sig = traj.signal();
    double worst = 0.0;
    for (GridIndex k = sig.base(); k <= sig.last(); ++k) {
        const auto lhs = caputo_difference(sig, spec.alpha, k);
        const auto f = spec.field(sig.state(k));
        for (std::size_t d = 0; d < spec.dimension; ++d)
            worst = std::max(worst, std::fabs(lhs[d] - f[d]));
    }
    return worst;
}

/// Sequential application of step(); the returned trajectory carries
/// per-step iteration counts and the max defect residual.
inline Trajectory simulate(const SystemSpec& spec, int steps) {
    if (steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    if (spec.initial_state.size() != spec.dimension)
        throw std::invalid_argument("simulate: initial state dimension mismatch");
    if (!spec.field) throw std::invalid_argument("simulate: missing vector field");

    Trajectory traj;
    traj.base = spec.base;
    traj.states.push_back(spec.initial_state);
    traj.iterations.push_back(0);

    SampledSignal sig(spec.base, spec.dimension);
    sig.set_history({spec.initial_state});

    for (int i = 0; i < steps; ++i) {
        const GridIndex k = spec.base + i;
        int iters = 0;
        try {
            auto x = step(sig, spec, k, &iters);
            sig.append(x);
            traj.states.push_back(std::move(x));
            traj.iterations.push_back(iters);
        } catch (NonConvergence& e) {
            e.partial_states = traj.states;
            throw;
        }
    }
    traj.max_residual = residual(traj, spec);
    return traj;
}

enum class BuiltinSystem { Example1, Example2 };

/// Bundled demo systems (the CLI's example1/example2): planar Caputo
/// dynamics with defaults alpha = 0.8, a = 0, x(-1) = (2,-1).
inline SystemSpec builtin_system(BuiltinSystem which) {
    SystemSpec spec;
    spec.dimension = 2;
    spec.alpha = 0.8;
    spec.base = 0;
    spec.initial_state = {2.0, -1.0};
    if (which == BuiltinSystem::Example1) {
        spec.field = [](const std::vector<double>& x) {
            return std::vector<double>{-x[0] + x[1] * x[1] * x[1], -x[0] - x[1]};
        };
    } else {
        spec.field = [](const std::vector<double>& x) {
            return std::vector<double>{-x[0] + signed_power(x[1], 1.0 / 3.0),
                                       -signed_power(x[0], 1.0 / 5.0) - x[1]};
        };
    }
    return spec;
}

/// Linear field f(x) = A x, A row-major kappa x kappa.
inline SystemSpec linear_system(const std::vector<double>& A, std::size_t kappa) {
    if (A.size() != kappa * kappa) throw std::invalid_argument("linear_system: matrix size mismatch");
    SystemSpec spec;
    spec.dimension = kappa;
    spec.alpha = 0.8;
    spec.base = 0;
    spec.initial_state.assign(kappa, 0.0);
    spec.field = [A, kappa](const std::vector<double>& x) {
        std::vector<double> y(kappa, 0.0);
        for (std::size_t i = 0; i < kappa; ++i)
            for (std::size_t j = 0; j < kappa; ++j) y[i] += A[i * kappa + j] * x[j];
        return y;
    };
    return spec;
}

}  // namespace nablafc
