#pragma once

// Experiment plumbing: flat key=value configs, problem/parameter resolution,
// single runs with on-disk artifacts, rate fitting and parallel sweeps.

#include "hessdamp/oracle.hpp"
#include "hessdamp/params.hpp"
#include "hessdamp/trace.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hessdamp {

struct ExperimentConfig {
    // problem
    std::string problem = "quadratic";  // quadratic | pl_sine | lasso
    std::size_t dim = 10;
    double q = 1e-2;
    double L = 1.0;
    double b_scale = 0.0;  // quadratic: b drawn uniformly from [-b_scale, b_scale]^d
    std::size_t rows = 0;  // lasso: 0 means 2 * dim
    std::optional<double> lambda;  // lasso: default tuned to `sparsity`
    double sparsity = 0.25;
    std::uint64_t seed = 1;
    std::vector<double> x0;  // empty: seeded default
    double x0_scale = 1.0;

    // solver and parameters
    std::string solver = "agm";  // agm | pgm | ode
    Regime regime = Regime::StronglyConvex;
    std::optional<double> gamma;  // 1 when unset; the PL bundle rejects any value
    double omega = 0.0;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> theta;

    // run
    std::size_t iterations = 1000;
    std::optional<double> horizon;
    std::optional<double> dt;
    bool certify = true;

    // outputs; empty paths are derived from out_dir and label()
    std::string out_dir;
    std::string csv_path;
    std::string json_path;
    bool write_files = true;

    std::string label() const;
};

// Sets one documented key; throws std::invalid_argument on unknown keys or bad values.
void set_config_key(ExperimentConfig& cfg, std::string_view key, std::string_view value);
// Lines of `key = value`; '#' starts a comment.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
std::vector<std::string> config_keys();

struct Problem {
    std::variant<SmoothObjective, CompositeObjective> objective;
    Vector x0;

    const SmoothObjective& smooth() const;
    bool composite() const { return objective.index() == 1; }
};

Problem build_problem(const ExperimentConfig& cfg);

using Bundle = std::variant<AgmParams, PgmParams, OdeParams>;
// Validates every hypothesis; throws std::invalid_argument before any iteration.
Bundle resolve_params(const ExperimentConfig& cfg, const Problem& problem);

struct ExperimentResult {
    Trace trace;
    std::string csv_path;
    std::string json_path;
};

// Default output directory: cfg.out_dir, else $HESSDAMP_OUT_DIR, else ".".
std::string output_directory(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Least-squares slope of log(gap) against the index over the fitting window:
// the last `window` fraction of samples before the gap first drops to 1e-13
// of its initial value, never reaching into the first 10%. Returns rho with
// 1 + rho = exp(-slope); nullopt when fewer than 20 usable points remain.
std::optional<double> fit_linear_rate(const std::vector<double>& gaps, double window = 0.5);
std::optional<double> fit_linear_rate(const Trace& trace, double window = 0.5);
// Continuous traces: decay rate r with gap ~ exp(-r t).
std::optional<double> fit_decay_rate(const Trace& trace, double window = 0.5);

struct RateRow {
    double gamma = 0.0;
    double omega = 0.0;
    double rho_theory = 0.0;
    std::optional<double> rho_empirical;
    std::optional<std::size_t> iterations_to_threshold;
    std::size_t checks_passed = 0;
    std::size_t checks_total = 0;
    bool certified = false;  // every requested certificate passed
    std::string error;       // non-empty when the configuration was rejected
};

// Runs every config (concurrently when threads > 1); rows are sorted by
// (gamma, omega) regardless of completion order.
std::vector<RateRow> rate_table(const std::vector<ExperimentConfig>& configs, unsigned threads = 0);

// Cartesian grid over omegas x gammas on top of a base config.
std::vector<ExperimentConfig> sweep_configs(const ExperimentConfig& base, const std::vector<double>& omegas,
                                            const std::vector<double>& gammas);

void write_rate_table_text(std::ostream& os, const std::vector<RateRow>& rows);
void write_rate_table_csv(std::ostream& os, const std::vector<RateRow>& rows);

}  // namespace hessdamp
