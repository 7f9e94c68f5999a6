// nablafc command line front end.
//
// Subcommands: weights, diff, verify, simulate, optimize, example.
// Exit codes: 0 success, 1 verification violation, 2 usage error,
// 3 data error, 4 solver non-convergence.
//
// Every command that writes outputs also drops a run manifest
// (<out>.manifest.json) recording the command, its parameters, the
// seed and the produced files; re-running the same invocation
// reproduces every output byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nablafc/nablafc.hpp"
#include "nablafc/report_json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace nablafc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string cell;
    std::istringstream ss(text);
    while (std::getline(ss, cell, ',')) out.push_back(csv::parse_double(cell));
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open output file: " + path);
    return f;
}

/// Overrides the manifest identity when one command runs on behalf of
/// another (the example command delegates to simulate/optimize).
struct ManifestOverride {
    std::string command;
    ordered_json extra_params;
};

void write_manifest(const std::string& command, ordered_json parameters, std::uint64_t seed,
                    const std::vector<std::string>& outputs, const std::string& manifest_path,
                    const ManifestOverride* override_spec = nullptr) {
    ordered_json j;
    j["toolVersion"] = kToolVersion;
    if (override_spec) {
        j["command"] = override_spec->command;
        for (auto it = override_spec->extra_params.begin(); it != override_spec->extra_params.end(); ++it)
            parameters[it.key()] = it.value();
    } else {
        j["command"] = command;
    }
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["outputs"] = outputs;
    auto f = open_output(manifest_path);
    f << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- weights

struct WeightsArgs {
    double alpha = 0.5;
    long count = 8;
    std::string kind = "diff";
    std::string out;
};

int run_weights(const WeightsArgs& a) {
    const auto table = a.kind == "sum" ? gl_sum_weights(a.alpha, static_cast<std::size_t>(a.count))
                                       : gl_diff_weights(a.alpha, static_cast<std::size_t>(a.count));
    auto f = open_output(a.out);
    csv::write_weights_csv(f, table);
    write_manifest("weights",
                   {{"alpha", a.alpha}, {"count", a.count}, {"kind", a.kind}, {"out", a.out}}, 0,
                   {a.out}, a.out + ".manifest.json");
    return kExitOk;
}

// ------------------------------------------------------------------- diff

struct DiffArgs {
    std::string input;
    double alpha = 0.5;
    std::string def = "gl";
    int memory = -1;
    int base = 0;
    std::string out;
};

SampledSignal signal_from_table(const csv::Table& t, GridIndex base) {
    if (t.header.size() < 2) throw csv::ParseError("need a k column and at least one value column");
    if (t.rows.size() < 2) throw DataError("need at least the rows k = a-1 and k = a");
    const std::size_t dim = t.header.size() - 1;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double kv = t.rows[i][0];
        if (kv != std::floor(kv)) throw DataError("k column must be integer");
        if (static_cast<GridIndex>(kv) != base - 1 + static_cast<GridIndex>(i))
            throw DataError("k must be contiguous starting at a-1 = " + std::to_string(base - 1));
    }
    SampledSignal s(base, dim);
    std::vector<double> row(dim);
    for (std::size_t c = 0; c < dim; ++c) row[c] = t.rows[0][c + 1];
    s.set_history({row});
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        for (std::size_t c = 0; c < dim; ++c) row[c] = t.rows[i][c + 1];
        s.append(row);
    }
    return s;
}

int run_diff(const DiffArgs& a) {
    if (a.memory >= 0 && a.def == "gl-mod")
        throw CLI::ValidationError("--memory does not combine with --def gl-mod");
    std::ifstream in(a.input, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot open input file: " + a.input);
    const auto table = csv::read_table(in);
    const auto sig = signal_from_table(table, a.base);

    auto eval = [&](GridIndex k) -> std::vector<double> {
        if (a.memory >= 0) {
            const auto kind = a.def == "gl" ? Definition::GL
                              : a.def == "rl" ? Definition::RL
                                              : Definition::Caputo;
            return fixed_memory_difference(sig, a.alpha, a.memory, k, kind);
        }
        if (a.def == "gl") return gl_difference(sig, a.alpha, k);
        if (a.def == "rl") return rl_difference(sig, a.alpha, k);
        if (a.def == "caputo") return caputo_difference(sig, a.alpha, k);
        return gl_modified_difference(sig, a.alpha, k);
    };

    // evaluate everything before touching the output file
    const GridIndex k_first = a.def == "gl-mod" ? sig.base() + 1 : sig.base();
    std::vector<std::vector<double>> values;
    for (GridIndex k = k_first; k <= sig.last(); ++k) values.push_back(eval(k));

    auto f = open_output(a.out);
    f << 'k';
    if (sig.dimension() == 1)
        f << ",value";
    else
        for (std::size_t c = 0; c < sig.dimension(); ++c) f << ",value" << (c + 1);
    f << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        f << (k_first + static_cast<GridIndex>(i));
        for (double x : values[i]) f << ',' << csv::format_double(x);
        f << '\n';
    }
    ordered_json params = {{"input", a.input}, {"alpha", a.alpha}, {"def", a.def},
                           {"base", a.base},   {"out", a.out}};
    if (a.memory >= 0) params["memory"] = a.memory;
    write_manifest("diff", params, 0, {a.out}, a.out + ".manifest.json");
    return kExitOk;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
    long trials = 200;
    int max_len = 50;
    double alpha_min = 0.05;
    double alpha_max = 0.95;
    std::uint64_t seed = 42;
    double tolerance = 1e-9;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    SuiteConfig cfg;
    cfg.trials = a.trials;
    cfg.max_len = a.max_len;
    cfg.alpha_min = a.alpha_min;
    cfg.alpha_max = a.alpha_max;
    cfg.seed = a.seed;
    cfg.tolerance = a.tolerance;
    if (const char* env = std::getenv("NABLA_FC_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);

    const auto report = run_property_suite(cfg);
    {
        auto f = open_output(a.out);
        f << to_json(report).dump(2) << '\n';
    }
    write_manifest("verify",
                   {{"trials", a.trials},
                    {"max_len", a.max_len},
                    {"alpha_min", a.alpha_min},
                    {"alpha_max", a.alpha_max},
                    {"tolerance", a.tolerance},
                    {"out", a.out}},
                   cfg.seed, {a.out}, a.out + ".manifest.json");
    const long violations = report.total_violations();
    std::cout << "pairs: " << report.pairs.size() << ", violations: " << violations
              << ", worst normalized gap: " << csv::format_double(report.worst_gap()) << '\n';
    return violations == 0 ? kExitOk : kExitViolation;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string system;
    std::string matrix;
    double alpha = 0.8;
    std::string x0;
    int steps = 200;
    std::string out;
    std::string plot;
};

void write_states_svg(const std::string& path, const Trajectory& traj) {
    std::vector<svg::Series> series;
    const std::size_t dim = traj.states.front().size();
    for (std::size_t d = 0; d < dim; ++d) {
        svg::Series s;
        s.name = "x" + std::to_string(d + 1);
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            s.x.push_back(traj.base - 1 + static_cast<GridIndex>(i));
            s.y.push_back(traj.states[i][d]);
        }
        series.push_back(std::move(s));
    }
    auto f = open_output(path);
    f << svg::line_plot(series, "k", "state");
}

int run_simulate(const SimulateArgs& a, const ManifestOverride* manifest_override = nullptr) {
    const auto x0 = parse_list(a.x0);
    SystemSpec spec;
    if (a.system == "example1" || a.system == "example2") {
        if (x0.size() != 2) throw CLI::ValidationError("builtin systems are 2-dimensional");
        spec = builtin_system(a.system == "example1" ? BuiltinSystem::Example1 : BuiltinSystem::Example2);
    } else if (a.system == "linear") {
        if (a.matrix.empty()) throw CLI::ValidationError("--system linear requires --matrix");
        const auto A = parse_list(a.matrix);
        if (A.size() != x0.size() * x0.size())
            throw CLI::ValidationError("--matrix needs kappa^2 entries for a kappa-dim --x0");
        spec = linear_system(A, x0.size());
    } else {
        throw CLI::ValidationError("unknown system '" + a.system + "'");
    }
    spec.alpha = a.alpha;
    spec.initial_state = x0;

    ordered_json params = {{"system", a.system}, {"alpha", a.alpha}, {"x0", a.x0},
                           {"steps", a.steps},   {"out", a.out}};
    if (!a.matrix.empty()) params["matrix"] = a.matrix;
    if (!a.plot.empty()) params["plot"] = a.plot;

    try {
        const auto traj = simulate(spec, a.steps);
        {
            auto f = open_output(a.out);
            csv::write_trajectory_csv(f, traj);
        }
        std::vector<std::string> outputs = {a.out};
        if (!a.plot.empty()) {
            write_states_svg(a.plot, traj);
            outputs.push_back(a.plot);
        }
        write_manifest("simulate", params, 0, outputs, a.out + ".manifest.json", manifest_override);
        std::cout << "simulated " << a.steps << " steps, max residual "
                  << csv::format_double(traj.max_residual) << '\n';
        return kExitOk;
    } catch (const NonConvergence& e) {
        Trajectory partial;
        partial.base = spec.base;
        partial.states = e.partial_states;
        partial.iterations.assign(e.partial_states.size(), 0);
        auto f = open_output(a.out);
        csv::write_trajectory_csv(f, partial);
        f << "# FAILED at k=" << e.k << '\n';
        std::cerr << "solver failed: " << e.what() << '\n';
        return kExitSolver;
    }
}

// --------------------------------------------------------------- optimize

struct OptimizeArgs {
    double alpha = 0.8;
    double rho = 2.0;
    std::string x0;
    int steps = 500;
    std::string out;  // prefix
    bool plot = false;
};

void write_optimizer_outputs(const OptimizerRun& run, const std::string& prefix, bool plot,
                             std::vector<std::string>& outputs) {
    {
        auto f = open_output(prefix + "_trajectory.csv");
        csv::write_trajectory_csv(f, run.trajectory);
        outputs.push_back(prefix + "_trajectory.csv");
    }
    {
        auto f = open_output(prefix + "_objective.csv");
        csv::write_objective_csv(f, run.base, run.objective_values);
        outputs.push_back(prefix + "_objective.csv");
    }
    if (plot) {
        svg::Series path;
        path.name = "iterates";
        for (const auto& s : run.trajectory.states) {
            path.x.push_back(s[0]);
            path.y.push_back(s[1]);
        }
        {
            auto f = open_output(prefix + "_path.svg");
            f << svg::line_plot({path}, "x1", "x2");
            outputs.push_back(prefix + "_path.svg");
        }
        svg::Series fk;
        fk.name = "f";
        for (std::size_t i = 0; i < run.objective_values.size(); ++i) {
            fk.x.push_back(run.base - 1 + static_cast<GridIndex>(i));
            fk.y.push_back(run.objective_values[i]);
        }
        auto f = open_output(prefix + "_objective.svg");
        f << svg::line_plot({fk}, "k", "objective");
        outputs.push_back(prefix + "_objective.svg");
    }
}

int run_optimize(const OptimizeArgs& a, const ManifestOverride* manifest_override = nullptr) {
    if (!(a.rho > 0.0)) throw CLI::ValidationError("--rho must be positive");
    const auto x0 = parse_list(a.x0);
    if (x0.size() != 2) throw CLI::ValidationError("the bundled objective is 2-dimensional");
    try {
        const auto run = fractional_gradient_descent(quartic_objective(), a.alpha, a.rho, x0, a.steps);
        std::vector<std::string> outputs;
        write_optimizer_outputs(run, a.out, a.plot, outputs);
        write_manifest("optimize",
                       {{"alpha", a.alpha},
                        {"rho", a.rho},
                        {"x0", a.x0},
                        {"steps", a.steps},
                        {"out", a.out},
                        {"plot", a.plot}},
                       0, outputs, a.out + ".manifest.json", manifest_override);
        std::cout << "final point (" << csv::format_double(run.trajectory.states.back()[0]) << ", "
                  << csv::format_double(run.trajectory.states.back()[1]) << "), objective "
                  << csv::format_double(run.objective_values.back()) << '\n';
        return kExitOk;
    } catch (const NonConvergence& e) {
        std::cerr << "solver failed: " << e.what() << '\n';
        return kExitSolver;
    }
}

// ---------------------------------------------------------------- example

int run_example(int n, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::string stem = (fs::path(out_dir) / ("example" + std::to_string(n))).string();
    const ManifestOverride override_spec{"example", {{"n", n}, {"out_dir", out_dir}}};
    if (n == 1 || n == 2) {
        SimulateArgs a;
        a.system = n == 1 ? "example1" : "example2";
        a.alpha = 0.8;
        a.x0 = "2,-1";
        a.steps = 200;
        a.out = stem + "_trajectory.csv";
        a.plot = stem + "_states.svg";
        return run_simulate(a, &override_spec);
    }
    OptimizeArgs a;
    a.alpha = 0.8;
    a.rho = 2.0;
    a.x0 = "2,-1";
    a.steps = 500;
    a.out = stem;
    a.plot = true;
    return run_optimize(a, &override_spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nabla discrete fractional calculus toolkit"};
    app.require_subcommand(1);

    WeightsArgs wa;
    auto* weights = app.add_subcommand("weights", "emit fractional weight sequences as CSV");
    weights->add_option("--alpha", wa.alpha, "order")->required();
    weights->add_option("--count", wa.count, "number of weights")->required()->check(CLI::PositiveNumber);
    weights->add_option("--kind", wa.kind, "diff or sum")->check(CLI::IsMember({"diff", "sum"}));
    weights->add_option("--out", wa.out, "output CSV")->required();

    DiffArgs da;
    auto* diff = app.add_subcommand("diff", "fractional difference of a CSV signal");
    diff->add_option("--input", da.input, "input CSV (k,x... contiguous from a-1)")->required();
    diff->add_option("--alpha", da.alpha, "order")->required();
    diff->add_option("--def", da.def, "gl, rl, caputo or gl-mod")
        ->check(CLI::IsMember({"gl", "rl", "caputo", "gl-mod"}));
    diff->add_option("--memory", da.memory, "fixed memory window K")->check(CLI::NonNegativeNumber);
    diff->add_option("--base", da.base, "base instant a");
    diff->add_option("--out", da.out, "output CSV")->required();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the Lyapunov inequality property suite");
    verify->add_option("--trials", va.trials)->check(CLI::PositiveNumber);
    verify->add_option("--max-len", va.max_len)->check(CLI::PositiveNumber);
    verify->add_option("--alpha-min", va.alpha_min);
    verify->add_option("--alpha-max", va.alpha_max);
    verify->add_option("--seed", va.seed, "RNG seed (NABLA_FC_SEED overrides)");
    verify->add_option("--tolerance", va.tolerance, "normalized violation tolerance");
    verify->add_option("--out", va.out, "report JSON")->required();

    SimulateArgs sa;
    auto* simulate_cmd = app.add_subcommand("simulate", "simulate a Caputo fractional system");
    simulate_cmd->add_option("--system", sa.system, "example1, example2 or linear")->required();
    simulate_cmd->add_option("--matrix", sa.matrix, "row-major matrix for --system linear");
    simulate_cmd->add_option("--alpha", sa.alpha, "order in (0,1]");
    simulate_cmd->add_option("--x0", sa.x0, "initial state x(a-1), comma separated")->required();
    simulate_cmd->add_option("--steps", sa.steps)->required()->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--out", sa.out, "trajectory CSV")->required();
    simulate_cmd->add_option("--plot", sa.plot, "optional SVG of the states");

    OptimizeArgs oa;
    auto* optimize = app.add_subcommand("optimize", "fractional gradient descent on the bundled objective");
    optimize->add_option("--alpha", oa.alpha, "order in (0,1]");
    optimize->add_option("--rho", oa.rho, "gain (positive)")->required();
    optimize->add_option("--x0", oa.x0, "initial point x(a-1)")->required();
    optimize->add_option("--steps", oa.steps)->required()->check(CLI::PositiveNumber);
    optimize->add_option("--out", oa.out, "output prefix")->required();
    optimize->add_flag("--plot", oa.plot, "also write SVG plots");

    int example_n = 1;
    std::string example_dir = ".";
    auto* example = app.add_subcommand("example", "reproduce one of the bundled examples");
    example->add_option("n", example_n, "example number")->required()->check(CLI::Range(1, 3));
    example->add_option("--out-dir", example_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(weights)) return run_weights(wa);
        if (app.got_subcommand(diff)) return run_diff(da);
        if (app.got_subcommand(verify)) return run_verify(va);
        if (app.got_subcommand(simulate_cmd)) return run_simulate(sa);
        if (app.got_subcommand(optimize)) return run_optimize(oa);
        if (app.got_subcommand(example)) return run_example(example_n, example_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const csv::ParseError& e) {
        std::cerr << "malformed CSV: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::out_of_range& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
