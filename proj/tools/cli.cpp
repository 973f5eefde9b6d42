#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmdp/bounds.hpp"
#include "rmdp/csv.hpp"
#include "rmdp/envs.hpp"
#include "rmdp/generative.hpp"
#include "rmdp/harness.hpp"
#include "rmdp/mdp_io.hpp"
#include "rmdp/parallel.hpp"
#include "rmdp/report_io.hpp"
#include "rmdp/robust_dp.hpp"

namespace rmdp::cli {

namespace {

const std::vector<std::string> kSetNames{"none", "tv", "chi2", "kl"};

/// A flag combination that parsed but makes no sense; reported as a usage error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<std::size_t> workers;
};

struct SolveArgs {
    std::string mdp;
    std::string set = "none";
    double radius = 0.0;
    double tol = 1e-8;
    std::size_t max_iters = 100000;
    std::string out;
};

struct ReviArgs {
    std::string mdp;
    std::string set = "none";
    double radius = 0.0;
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> seed;
    std::size_t iters = 0;
    std::string out;
    std::string counts_out;
};

struct BoundsArgs {
    std::string set;
    double gamma = 0.0;
    double eps = 0.0;
    double delta = 0.0;
    std::size_t states = 0;
    std::size_t actions = 0;
    std::optional<double> radius;
    std::optional<double> lambda_kl;
};

struct ExperimentArgs {
    std::string env;
    std::string mode;
    std::optional<std::string> set;
    std::optional<double> radius;
    std::optional<double> gamma;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::vector<std::uint64_t> seeds;
    std::vector<std::uint64_t> n_grid{100, 500, 3000, 5000};
    std::optional<std::size_t> iters;
    std::size_t trials = 1000;
    std::size_t horizon = kDefaultHorizon;
    std::vector<double> sweep;
    std::optional<std::string> parameter;
    std::optional<double> p_h;
    std::optional<double> p_intended;
    std::optional<double> test_p_intended;
    std::string map;
    std::string out;
};

std::size_t resolve_workers(const Common& common) {
    if (common.workers) {
        if (*common.workers == 0) throw UsageError("--workers must be at least 1");
        return *common.workers;
    }
    if (const char* env = std::getenv("RMDP_WORKERS"); env && *env) {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (*end != '\0' || value == 0) throw UsageError("RMDP_WORKERS must be a positive integer");
        return static_cast<std::size_t>(value);
    }
    return default_workers();
}

AmbiguitySpec make_set(const std::string& name, double radius) {
    AmbiguitySpec set;
    set.kind = parse_set_kind(name);
    set.radius = radius;
    return set;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    write_text_file(path, doc.dump(1) + "\n");
}

int do_solve(const SolveArgs& args, std::size_t workers, std::ostream& out) {
    const TabularMDP mdp = load_mdp(args.mdp);
    SolveOptions options;
    options.tol = args.tol;
    options.max_iters = args.max_iters;
    options.workers = workers;
    options.record_history = true;
    const SolveReport report = robust_value_iteration(mdp, make_set(args.set, args.radius), options);
    write_json(args.out, solve_report_to_json(mdp, report));
    out << "iterations: " << report.iterations << "\n"
        << "residual: " << format_double(report.residual) << "\n"
        << "converged: " << (report.converged ? "true" : "false") << "\n";
    return report.converged ? kExitOk : kExitError;
}

int do_revi(const ReviArgs& args, std::size_t workers, std::ostream& out) {
    const TabularMDP mdp = load_mdp(args.mdp);
    const AmbiguitySpec set = make_set(args.set, args.radius);
    auto issues = validate_ambiguity(set, mdp);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    const TransitionCounts counts = sample_counts(mdp, args.samples, *args.seed, workers);
    const TabularMDP hat = mle_model(mdp, counts);
    ReviOptions options;
    options.workers = workers;
    const SolveReport report = revi(hat, set, args.iters, options);
    write_json(args.out, solve_report_to_json(mdp, report));
    if (!args.counts_out.empty()) write_json(args.counts_out, counts_to_json(counts));
    out << "iterations: " << report.iterations << "\n"
        << "residual: " << format_double(report.residual) << "\n";
    return kExitOk;
}

int do_bounds(const BoundsArgs& args, std::ostream& out) {
    const SetKind kind = parse_set_kind(args.set);
    ComplexityInputs in;
    in.gamma = args.gamma;
    in.eps = args.eps;
    in.delta = args.delta;
    in.num_states = args.states;
    in.num_actions = args.actions;
    if (kind == SetKind::Chi2 || kind == SetKind::KL) {
        if (!args.radius) throw UsageError("--radius is required for the " + args.set + " set");
        in.radius = *args.radius;
    }
    if (kind == SetKind::KL) {
        if (!args.lambda_kl) throw UsageError("--lambda-kl is required for the kl set");
        in.lambda_kl = *args.lambda_kl;
    }
    const double n = sample_threshold(kind, in);
    const double k = k0(in.gamma, in.eps);
    out << "set: " << to_string(kind) << "\n"
        << "k0: " << format_double(k) << "\n"
        << "k0_ceil: " << format_double(std::max(0.0, std::ceil(k))) << "\n"
        << "n: " << format_double(n) << "\n"
        << "n_ceil: " << format_double(std::ceil(n)) << "\n";
    return kExitOk;
}

int do_gap(double gamma, std::ostream& out) {
    const GapValues g = gap_values(gamma);
    out << "gamma: " << format_double(gamma) << "\n"
        << "v_robust_opt: " << format_double(g.v_robust_opt) << "\n"
        << "v_nonrobust_worst: " << format_double(g.v_nonrobust_worst) << "\n"
        << "gap: " << format_double(g.gap) << "\n"
        << "gap_lower_bound: " << format_double(gamma / (198.0 * (1.0 - gamma))) << "\n"
        << "numeric_v_robust_opt: " << format_double(g.numeric_robust_opt) << "\n"
        << "numeric_v_nonrobust_worst: " << format_double(g.numeric_nonrobust_worst) << "\n"
        << "numeric_gap: " << format_double(g.numeric_gap) << "\n"
        << "max_discrepancy: " << format_double(g.discrepancy) << "\n"
        << "check: PASS (tolerance " << format_double(kGapAgreementTolerance) << ")\n";
    return kExitOk;
}

struct EnvDefaults {
    double gamma;
    SetKind set;
    double radius;
    std::string parameter;
    std::vector<double> sweep;
};

EnvDefaults defaults_for(EnvName name) {
    switch (name) {
    case EnvName::Gamblers: return {0.95, SetKind::TV, 0.4, "p_h", {0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6}};
    case EnvName::FrozenLake: return {0.9, SetKind::TV, 0.7, "rho", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}};
    case EnvName::Chain: return {0.9, SetKind::TV, 0.4, "gamma", {}};
    }
    throw std::logic_error("unreachable");
}

int do_experiment(const ExperimentArgs& args, std::size_t workers, std::ostream& out) {
    const EnvName name = parse_env_name(args.env);
    const EnvDefaults defaults = defaults_for(name);
    const double gamma = args.gamma.value_or(defaults.gamma);
    AmbiguitySpec set;
    set.kind = args.set ? parse_set_kind(*args.set) : defaults.set;
    set.radius = args.radius.value_or(args.set ? 0.0 : defaults.radius);

    if ((args.mode == "iters" || args.mode == "robustness") && !args.seed) {
        throw UsageError("--seed is required for --mode " + args.mode);
    }
    if (args.mode == "samples" && args.seeds.empty()) {
        throw UsageError("--seeds is required for --mode samples");
    }
    if (args.mode == "robustness" && name == EnvName::Chain) {
        throw std::invalid_argument("robustness experiments need an environment with goal states");
    }

    EnvFamily env;
    switch (name) {
    case EnvName::Gamblers: env = EnvFamily::gamblers_family(gamma, args.p_h.value_or(0.6)); break;
    case EnvName::FrozenLake: {
        GridMap map = args.map.empty() ? parse_frozenlake_map(kFrozenLake8x8)
                                       : parse_frozenlake_map(read_text_file(args.map));
        env = EnvFamily::frozenlake_family(gamma, args.p_intended.value_or(0.4),
                                           args.test_p_intended.value_or(0.2), std::move(map));
        break;
    }
    case EnvName::Chain: env = EnvFamily::chain_family(gamma); break;
    }
    {
        auto issues = validate_ambiguity(set, env.nominal());
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }

    std::vector<ExperimentRecord> records;
    if (args.mode == "iters") {
        records = convergence_vs_iterations(env, set, args.samples.value_or(5000), *args.seed,
                                            args.iters.value_or(50), workers);
    } else if (args.mode == "samples") {
        records = convergence_vs_samples(env, set, args.n_grid, args.seeds, args.iters.value_or(300),
                                         workers);
    } else {
        const auto policies = train_policies(env, set, args.samples.value_or(3000), *args.seed,
                                             args.iters.value_or(300), workers);
        const std::vector<double> sweep = args.sweep.empty() ? defaults.sweep : args.sweep;
        records = robustness_eval(policies, env, args.parameter.value_or(defaults.parameter), sweep,
                                  args.trials, args.horizon, *args.seed, workers);
    }
    write_text_file(args.out, to_csv(records));
    out << "records: " << records.size() << "\n";
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust MDP solvers, REVI, sample-complexity bounds and experiments", "rmdp"};
    app.require_subcommand(1);
    Common common;

    auto add_workers = [&](CLI::App* sub) {
        sub->add_option("--workers", common.workers,
                        "Worker threads (default: $RMDP_WORKERS, else hardware concurrency)");
    };

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Robust value iteration on a model file");
    solve_cmd->add_option("--mdp", solve.mdp, "Model JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--set", solve.set, "Ambiguity set")->check(CLI::IsMember(kSetNames));
    solve_cmd->add_option("--radius", solve.radius, "Ambiguity radius");
    solve_cmd->add_option("--tol", solve.tol, "Distance to the fixed point")->capture_default_str();
    solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration cap")->capture_default_str();
    solve_cmd->add_option("--out", solve.out, "Report JSON")->required();
    add_workers(solve_cmd);

    ReviArgs rv;
    auto* revi_cmd = app.add_subcommand("revi", "Sample, estimate and run K robust iterations");
    revi_cmd->add_option("--mdp", rv.mdp, "Model JSON")->required()->check(CLI::ExistingFile);
    revi_cmd->add_option("--set", rv.set, "Ambiguity set")->check(CLI::IsMember(kSetNames));
    revi_cmd->add_option("--radius", rv.radius, "Ambiguity radius");
    revi_cmd->add_option("--samples", rv.samples, "Samples per (s,a)")->required()->check(CLI::PositiveNumber);
    revi_cmd->add_option("--seed", rv.seed, "Sampling seed")->required();
    revi_cmd->add_option("--iters", rv.iters, "Iterations K")->required()->check(CLI::PositiveNumber);
    revi_cmd->add_option("--out", rv.out, "Report JSON")->required();
    revi_cmd->add_option("--counts-out", rv.counts_out, "Also write the sample counts");
    add_workers(revi_cmd);

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "Iteration and sample thresholds");
    bounds_cmd->add_option("--set", bounds.set, "tv, chi2 or kl")->required()->check(CLI::IsMember({"tv", "chi2", "kl"}));
    bounds_cmd->add_option("--gamma", bounds.gamma)->required();
    bounds_cmd->add_option("--eps", bounds.eps)->required();
    bounds_cmd->add_option("--delta", bounds.delta)->required();
    bounds_cmd->add_option("--states", bounds.states)->required();
    bounds_cmd->add_option("--actions", bounds.actions)->required();
    bounds_cmd->add_option("--radius", bounds.radius, "c_r (chi2, kl)");
    bounds_cmd->add_option("--lambda-kl", bounds.lambda_kl, "lambda_kl (kl)");

    double gap_gamma = 0.0;
    auto* gap_cmd = app.add_subcommand("gap", "Robustness gap of the two-state chain");
    gap_cmd->add_option("--gamma", gap_gamma)->required();

    ExperimentArgs ex;
    auto* ex_cmd = app.add_subcommand("experiment", "Write experiment records as CSV");
    ex_cmd->add_option("env", ex.env, "gamblers, frozenlake or chain")->required()
        ->check(CLI::IsMember({"gamblers", "frozenlake", "chain"}));
    ex_cmd->add_option("--mode", ex.mode, "iters, samples or robustness")->required()
        ->check(CLI::IsMember({"iters", "samples", "robustness"}));
    ex_cmd->add_option("--set", ex.set, "Ambiguity set (default tv)")->check(CLI::IsMember(kSetNames));
    ex_cmd->add_option("--radius", ex.radius, "Radius (default: 0.4 gamblers, 0.7 frozenlake)");
    ex_cmd->add_option("--gamma", ex.gamma, "Discount (default: 0.95 gamblers, 0.9 otherwise)");
    ex_cmd->add_option("--samples", ex.samples, "N for iters (5000) and robustness (3000)")
        ->check(CLI::PositiveNumber);
    ex_cmd->add_option("--seed", ex.seed, "Seed (iters, robustness)");
    ex_cmd->add_option("--seeds", ex.seeds, "Comma-separated seeds (samples)")->delimiter(',');
    ex_cmd->add_option("--n-grid", ex.n_grid, "Comma-separated N values (samples)")->delimiter(',');
    ex_cmd->add_option("--iters", ex.iters, "REVI iterations (iters: 50, otherwise 300)")
        ->check(CLI::PositiveNumber);
    ex_cmd->add_option("--trials", ex.trials, "Rollouts per cell")->capture_default_str()
        ->check(CLI::PositiveNumber);
    ex_cmd->add_option("--horizon", ex.horizon, "Rollout step cap")->capture_default_str()
        ->check(CLI::PositiveNumber);
    ex_cmd->add_option("--sweep", ex.sweep, "Comma-separated test parameter values")->delimiter(',');
    ex_cmd->add_option("--parameter", ex.parameter, "Swept parameter (p_h, rho, p_intended)");
    ex_cmd->add_option("--p-h", ex.p_h, "Gambler's nominal heads probability (0.6)");
    ex_cmd->add_option("--p-intended", ex.p_intended, "FrozenLake nominal p_intended (0.4)");
    ex_cmd->add_option("--test-p-intended", ex.test_p_intended, "FrozenLake test p_intended (0.2)");
    ex_cmd->add_option("--map", ex.map, "FrozenLake map file")->check(CLI::ExistingFile);
    ex_cmd->add_option("--out", ex.out, "CSV path")->required();
    add_workers(ex_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (*solve_cmd) return do_solve(solve, resolve_workers(common), out);
        if (*revi_cmd) return do_revi(rv, resolve_workers(common), out);
        if (*bounds_cmd) return do_bounds(bounds, out);
        if (*gap_cmd) return do_gap(gap_gamma, out);
        if (*ex_cmd) return do_experiment(ex, resolve_workers(common), out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const rmdp::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const ValidationError& e) {
        err << "error: invalid input\n";
        for (const auto& v : e.violations()) err << "  " << to_string(v) << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}

} // namespace rmdp::cli
