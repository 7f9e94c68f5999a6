#pragma once

// Fractional-order gradient descent: the Caputo dynamics
//   C-nabla^alpha x(k) = -rho grad f(x(k))
// run through the simulator's implicit stepper (the gradient field is
// just another vector field), plus the Lyapunov certificate checks for
// the bundled quartic objective.

#include <optional>

#include "lyapunov.hpp"
#include "simulator.hpp"

namespace nablafc {

struct Objective {
    std::function<double(const std::vector<double>&)> evaluate;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
    std::size_t dimension = 1;
    std::optional<std::vector<double>> optimum;  // known minimizer, used by certificates
};

struct OptimizerRun {
    double alpha = 0.8;
    double rho = 1.0;
    GridIndex base = 0;
    std::vector<double> initial_point;
    Trajectory trajectory;
    std::vector<double> objective_values;  // one per trajectory row, k = a-1 ..
    std::optional<std::vector<double>> optimum;
};

/// The bundled quartic objective (x1-1)^2 + 2 (x1^2 - x2)^2 with
/// global minimum at (1,1) and analytic gradient.
inline Objective quartic_objective() {
    Objective obj;
    obj.dimension = 2;
    obj.optimum = std::vector<double>{1.0, 1.0};
    obj.evaluate = [](const std::vector<double>& x) {
        const double u = x[0] - 1.0;
        const double v = x[0] * x[0] - x[1];
        return u * u + 2.0 * v * v;
    };
    obj.gradient = [](const std::vector<double>& x) {
        const double v = x[0] * x[0] - x[1];
        return std::vector<double>{2.0 * (x[0] - 1.0) + 8.0 * x[0] * v, -4.0 * v};
    };
    return obj;
}

inline OptimizerRun fractional_gradient_descent(const Objective& obj, double alpha, double rho,
                                                const std::vector<double>& initial_point, int steps,
                                                GridIndex base = 0, SolverConfig solver = {}) {
    if (!(rho > 0.0)) throw std::domain_error("fractional_gradient_descent: rho must be positive");
    if (initial_point.size() != obj.dimension)
        throw std::invalid_argument("fractional_gradient_descent: initial point dimension mismatch");

    SystemSpec spec;
    spec.dimension = obj.dimension;
    spec.alpha = alpha;
    spec.base = base;
    spec.initial_state = initial_point;
    spec.solver = solver;
    spec.field = [gradient = obj.gradient, rho](const std::vector<double>& x) {
        auto g = gradient(x);
        for (auto& v : g) v *= -rho;
        return g;
    };

    OptimizerRun run;
    run.alpha = alpha;
    run.rho = rho;
    run.base = base;
    run.initial_point = initial_point;
    run.optimum = obj.optimum;
    run.trajectory = simulate(spec, steps);
    run.objective_values.reserve(run.trajectory.states.size());
    for (const auto& x : run.trajectory.states) run.objective_values.push_back(obj.evaluate(x));
    return run;
}

/// Certificate along a quartic-objective run: with y = x - optimum and
/// V(k) = y1^2/4 + y2^2/2, checks at every k that
///   C-nabla^alpha V(k) <= y1/2 * C-nabla^alpha y1 + y2 * C-nabla^alpha y2
/// (the square-rule inequality applied to both coordinates).
inline GapReport certificate_check(const OptimizerRun& run, double tolerance = 1e-9) {
    if (run.initial_point.size() != 2)
        throw std::invalid_argument("certificate_check: run must be 2-dimensional");
    if (!run.optimum) throw std::invalid_argument("certificate_check: run lacks a declared optimum");
    const auto& opt = *run.optimum;

    const auto x = run.trajectory.signal();
    SampledSignal y(x.base(), 2);
    y.set_history({{x.at(x.base() - 1, 0) - opt[0], x.at(x.base() - 1, 1) - opt[1]}});
    for (GridIndex k = x.base(); k <= x.last(); ++k)
        y.append({x.at(k, 0) - opt[0], x.at(k, 1) - opt[1]});

    const auto v = y.map_state([](std::span<const double> s) {
        return 0.25 * s[0] * s[0] + 0.5 * s[1] * s[1];
    });

    GapReport rep;
    rep.base = y.base();
    rep.tolerance = tolerance;
    rep.max_gap = -std::numeric_limits<double>::infinity();
    for (GridIndex k = y.base(); k <= y.last(); ++k) {
        const double lhs = caputo_difference(v, run.alpha, k)[0];
        const auto dy = caputo_difference(y, run.alpha, k);
        const double rhs = 0.5 * y.at(k, 0) * dy[0] + y.at(k, 1) * dy[1];
        const double gap = lhs - rhs;
        rep.gaps.push_back(gap);
        rep.max_gap = std::max(rep.max_gap, gap);
        if (gap > tolerance * std::max({1.0, std::fabs(lhs), std::fabs(rhs)})) ++rep.violations;
    }
    if (rep.gaps.empty()) rep.max_gap = 0.0;
    return rep;
}

/// The closed-form bound the certificate chain lands on for the
/// quartic objective: -rho (2 y1^2 + 3 y1 - 2 y2)^2 at each k >= a.
/// A negated square, so every value is <= 0.
inline std::vector<double> descent_bound_values(const OptimizerRun& run) {
    if (run.initial_point.size() != 2)
        throw std::invalid_argument("descent_bound_values: run must be 2-dimensional");
    if (!run.optimum) throw std::invalid_argument("descent_bound_values: run lacks a declared optimum");
    const auto& opt = *run.optimum;
    std::vector<double> out;
    for (std::size_t i = 1; i < run.trajectory.states.size(); ++i) {
        const double y1 = run.trajectory.states[i][0] - opt[0];
        const double y2 = run.trajectory.states[i][1] - opt[1];
        const double s = 2.0 * y1 * y1 + 3.0 * y1 - 2.0 * y2;
        out.push_back(-run.rho * s * s);
    }
    return out;
}

}  // namespace nablafc
