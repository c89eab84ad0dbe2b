// hessdamp: command-line front end for the inertial solvers and their certificates.
//
//   hessdamp solve   [flags]   one run (certificates only if certify = true)
//   hessdamp certify [flags]   one run with every certificate enforced
//   hessdamp ode     [flags]   continuous-time run, certified
//   hessdamp sweep   [flags]   omega x gamma grid, per-run artifacts + rate table
//   hessdamp rates   [flags]   omega x gamma grid, rate table only
//
// Exit status: 0 success, 1 certificate failure or solver abort, 2 invalid input.

#include "hessdamp/harness.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <map>

using namespace hessdamp;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

struct Flags {
    std::string config;
    std::vector<std::string> sets;
    std::map<std::string, std::string> values;  // config key -> raw flag value
    std::vector<std::pair<std::string, CLI::Option*>> bound;
    bool quiet = false;
    std::vector<double> omegas;
    std::vector<double> gammas;
    unsigned threads = 0;
    std::string table_csv;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "flat key = value config file");
    app->add_option("--set", f.sets, "override any config key (key=value), repeatable");
    struct Spec {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const Spec specs[] = {
        {"--problem", "problem", "quadratic | pl_sine | lasso"},
        {"--solver", "solver", "agm | pgm | ode"},
        {"--regime", "regime", "sc | qg | pl"},
        {"--gamma", "gamma", "gradient coefficient gamma"},
        {"--omega", "omega", "energy interpolation omega in [0,1]"},
        {"--alpha", "alpha", "damping override (re-validated)"},
        {"--beta", "beta", "Hessian damping (ode), default 1/sqrt(L)"},
        {"--theta", "theta", "energy weight (ode)"},
        {"-k,--iters", "iterations", "iterations K"},
        {"-T,--horizon", "horizon", "time horizon (ode)"},
        {"--dt", "dt", "integration step (ode)"},
        {"--seed", "seed", "problem seed"},
        {"--dim", "dim", "dimension of generated problems"},
        {"--q", "q", "condition ratio mu/L"},
        {"--L", "L", "smoothness constant"},
        {"--lambda", "lambda", "lasso weight"},
        {"--x0", "x0", "comma-separated start point"},
        {"--out", "out_dir", "output directory (default $HESSDAMP_OUT_DIR or .)"},
        {"--csv", "csv", "trace CSV path"},
        {"--json", "json", "summary JSON path"},
    };
    for (const auto& s : specs) f.bound.emplace_back(s.key, app->add_option(s.flag, f.values[s.key], s.help));
    app->add_flag("--quiet", f.quiet, "suppress the textual summary");
}

ExperimentConfig resolve(const Flags& f, ExperimentConfig base) {
    ExperimentConfig cfg = f.config.empty() ? base : load_config_file(f.config, base);
    for (const auto& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(fmt::format("--set expects key=value, got '{}'", kv));
        set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, opt] : f.bound)
        if (opt->count() > 0) set_config_key(cfg, key, f.values.at(key));
    return cfg;
}

void print_summary(const ExperimentResult& r) {
    const TraceSummary& s = r.trace.summary;
    std::cout << fmt::format("{} on {} ({} regime): {} records, rate_theory = {:.6g}", s.solver, s.problem, s.regime,
                             r.trace.records.size(), s.rate_theory);
    if (s.rate_empirical) std::cout << fmt::format(", rate_empirical = {:.6g}", *s.rate_empirical);
    std::cout << '\n';
    for (const auto& [name, c] : s.checks)
        std::cout << fmt::format("  {:<16} {:>7}/{:<7} passed\n", name, c.checked - c.failed, c.checked);
    if (s.aborted) std::cout << "  aborted: " << s.abort_reason << '\n';
    if (!r.csv_path.empty()) std::cout << "  trace:   " << r.csv_path << "\n  summary: " << r.json_path << '\n';
}

int run_single(const ExperimentConfig& cfg, bool quiet) {
    const ExperimentResult r = run_experiment(cfg);
    if (!quiet) print_summary(r);
    return r.trace.summary.ok() ? 0 : kExitFailure;
}

int run_grid(const ExperimentConfig& base, const Flags& f, bool artifacts) {
    ExperimentConfig cfg = base;
    cfg.write_files = artifacts;
    const auto configs = sweep_configs(cfg, f.omegas, f.gammas);
    const auto rows = rate_table(configs, f.threads);
    if (!f.quiet) write_rate_table_text(std::cout, rows);
    std::string table_path = f.table_csv;
    if (table_path.empty() && artifacts) table_path = output_directory(cfg) + "/rates.csv";
    if (!table_path.empty()) {
        std::ofstream out(table_path);
        write_rate_table_csv(out, rows);
        if (!out) throw std::runtime_error("cannot write " + table_path);
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.error.empty() && (!cfg.certify || r.certified);
    return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inertial gradient solvers with runtime energy certificates"};
    app.require_subcommand(1);

    Flags solve_f, certify_f, ode_f, sweep_f, rates_f;
    auto* solve = app.add_subcommand("solve", "single run");
    add_common(solve, solve_f);
    auto* certify = app.add_subcommand("certify", "single run with certificates enforced");
    add_common(certify, certify_f);
    auto* ode = app.add_subcommand("ode", "continuous-time run, certified");
    add_common(ode, ode_f);
    auto* sweep = app.add_subcommand("sweep", "omega x gamma grid with per-run artifacts");
    add_common(sweep, sweep_f);
    auto* rates = app.add_subcommand("rates", "omega x gamma grid, rate table only");
    add_common(rates, rates_f);

    sweep_f.omegas = {0.0, 0.25, 0.5, 0.75, 1.0};
    sweep_f.gammas = {1.0, 1.5, 2.0};
    rates_f.omegas = {0.0, 0.5, 1.0};
    rates_f.gammas = {1.0, 1.5, 2.0};
    for (auto [sub, f] : {std::pair{sweep, &sweep_f}, std::pair{rates, &rates_f}}) {
        sub->add_option("--omegas", f->omegas, "omega grid")->delimiter(',');
        sub->add_option("--gammas", f->gammas, "gamma grid")->delimiter(',');
        sub->add_option("--threads", f->threads, "worker threads (0 = hardware)");
        sub->add_option("--table", f->table_csv, "rate table CSV path");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            ExperimentConfig base;
            base.certify = false;
            return run_single(resolve(solve_f, base), solve_f.quiet);
        }
        if (certify->parsed()) {
            ExperimentConfig cfg = resolve(certify_f, {});
            cfg.certify = true;
            return run_single(cfg, certify_f.quiet);
        }
        if (ode->parsed()) {
            ExperimentConfig base;
            base.solver = "ode";
            ExperimentConfig cfg = resolve(ode_f, base);
            cfg.solver = "ode";
            return run_single(cfg, ode_f.quiet);
        }
        if (sweep->parsed()) return run_grid(resolve(sweep_f, {}), sweep_f, true);
        if (rates->parsed()) return run_grid(resolve(rates_f, {}), rates_f, false);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInvalid;
}
