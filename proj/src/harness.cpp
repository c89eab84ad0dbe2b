#include "hessdamp/harness.hpp"

#include "hessdamp/agm.hpp"
#include "hessdamp/ode.hpp"
#include "hessdamp/pgm.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hessdamp {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view value) {
    const std::string v(trim(value));
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size() || !std::isfinite(out))
        throw std::invalid_argument(fmt::format("config key '{}': '{}' is not a finite number", key, v));
    return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
    const std::string v(trim(value));
    std::size_t used = 0;
    unsigned long long out = 0;
    try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        out = std::stoull(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size())
        throw std::invalid_argument(fmt::format("config key '{}': '{}' is not a non-negative integer", key, v));
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(fmt::format("config key '{}': '{}' is not a boolean", key, v));
}

std::vector<double> to_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    std::string_view rest = trim(value);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(to_double(key, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

std::string compact(double v) { return fmt::format("{}", v); }

}  // namespace

std::vector<std::string> config_keys() {
    return {"problem", "dim",   "q",     "L",         "b_scale",  "rows",  "lambda",     "sparsity",
            "seed",    "x0",    "x0_scale", "solver", "regime",   "gamma", "omega",      "alpha",
            "beta",    "theta", "iterations", "horizon", "dt",    "certify", "out_dir",  "csv",
            "json",    "write_files"};
}

void set_config_key(ExperimentConfig& c, std::string_view key_raw, std::string_view value) {
    const std::string_view key = trim(key_raw);
    const std::string v(trim(value));
    if (key == "problem") {
        if (v != "quadratic" && v != "pl_sine" && v != "lasso")
            throw std::invalid_argument(fmt::format("unknown problem '{}' (quadratic, pl_sine, lasso)", v));
        c.problem = v;
    } else if (key == "dim") {
        c.dim = to_uint(key, v);
    } else if (key == "q") {
        c.q = to_double(key, v);
    } else if (key == "L") {
        c.L = to_double(key, v);
    } else if (key == "b_scale") {
        c.b_scale = to_double(key, v);
    } else if (key == "rows") {
        c.rows = to_uint(key, v);
    } else if (key == "lambda") {
        c.lambda = to_double(key, v);
    } else if (key == "sparsity") {
        c.sparsity = to_double(key, v);
    } else if (key == "seed") {
        c.seed = to_uint(key, v);
    } else if (key == "x0") {
        c.x0 = to_list(key, v);
    } else if (key == "x0_scale") {
        c.x0_scale = to_double(key, v);
    } else if (key == "solver") {
        if (v != "agm" && v != "pgm" && v != "ode")
            throw std::invalid_argument(fmt::format("unknown solver '{}' (agm, pgm, ode)", v));
        c.solver = v;
    } else if (key == "regime") {
        c.regime = parse_regime(v);
    } else if (key == "gamma") {
        c.gamma = to_double(key, v);
    } else if (key == "omega") {
        c.omega = to_double(key, v);
    } else if (key == "alpha") {
        c.alpha = to_double(key, v);
    } else if (key == "beta") {
        c.beta = to_double(key, v);
    } else if (key == "theta") {
        c.theta = to_double(key, v);
    } else if (key == "iterations") {
        c.iterations = to_uint(key, v);
    } else if (key == "horizon") {
        c.horizon = to_double(key, v);
    } else if (key == "dt") {
        c.dt = to_double(key, v);
    } else if (key == "certify") {
        c.certify = to_bool(key, v);
    } else if (key == "out_dir") {
        c.out_dir = v;
    } else if (key == "csv") {
        c.csv_path = v;
    } else if (key == "json") {
        c.json_path = v;
    } else if (key == "write_files") {
        c.write_files = to_bool(key, v);
    } else {
        throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
    }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(fmt::format("config line {}: expected key = value", line_no));
        set_config_key(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(fmt::format("cannot read config file '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string ExperimentConfig::label() const {
    std::string s = fmt::format("{}_{}_{}", solver, problem, to_string(regime));
    if (solver == "agm") s += fmt::format("_g{}", compact(gamma.value_or(1.0)));
    s += fmt::format("_w{}_s{}", compact(omega), seed);
    return s;
}

// ---------------------------------------------------------------------------

const SmoothObjective& Problem::smooth() const {
    if (const auto* s = std::get_if<SmoothObjective>(&objective)) return *s;
    return std::get<CompositeObjective>(objective).smooth();
}

Problem build_problem(const ExperimentConfig& c) {
    std::mt19937_64 rng(c.seed ^ 0x5bd1e995u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    auto make_x0 = [&](std::size_t d, Vector fallback) {
        if (!c.x0.empty()) {
            if (c.x0.size() != d)
                throw std::invalid_argument(fmt::format("x0 has {} entries, problem dimension is {}", c.x0.size(), d));
            return c.x0;
        }
        return fallback;
    };
    auto seeded_point = [&](std::size_t d) {
        Vector x(d);
        for (auto& v : x) v = c.x0_scale * unit(rng);
        return x;
    };

    if (c.problem == "pl_sine") {
        Problem p{pl_sine_problem(), {}};
        p.x0 = make_x0(1, Vector{2.0});
        return p;
    }
    if (c.dim < 2) throw std::invalid_argument("dim must be at least 2 for generated problems");
    if (!(c.q > 0.0 && c.q < 1.0)) throw std::invalid_argument(fmt::format("q must lie in (0, 1), got {}", c.q));
    if (!(c.L > 0.0)) throw std::invalid_argument("L must be positive");
    const Vector spectrum = geometric_spectrum(c.dim, c.q, c.L);

    if (c.problem == "quadratic") {
        Vector b(c.dim, 0.0);
        for (auto& v : b) v = c.b_scale * unit(rng);
        SmoothObjective f = quadratic_problem(spectrum, b, c.seed);
        Problem p{std::move(f), {}};
        p.x0 = make_x0(c.dim, seeded_point(c.dim));
        return p;
    }
    if (c.problem == "lasso") {
        const std::size_t rows = c.rows == 0 ? 2 * c.dim : c.rows;
        const DenseMatrix a = design_matrix(rows, spectrum, c.seed);
        Vector b(rows);
        for (auto& v : b) v = unit(rng);
        const double lambda = c.lambda ? *c.lambda : lasso_lambda_for_sparsity(a, b, c.sparsity);
        CompositeObjective F = lasso_problem(a, b, lambda);
        Problem p{std::move(F), {}};
        p.x0 = make_x0(c.dim, seeded_point(c.dim));
        return p;
    }
    throw std::invalid_argument(fmt::format("unknown problem '{}'", c.problem));
}

namespace {

double regime_constant(const ExperimentConfig& c, const Problem& prob) {
    const SmoothObjective& f = prob.smooth();
    std::optional<double> mu;
    switch (c.regime) {
        case Regime::StronglyConvex: mu = f.strong_convexity(); break;
        case Regime::QuadraticGrowth:
            mu = prob.composite() ? std::get<CompositeObjective>(prob.objective).qg_constant() : f.qg_constant();
            break;
        case Regime::PolyakLojasiewicz: mu = f.pl_constant(); break;
    }
    if (!mu)
        throw std::invalid_argument(
            fmt::format("problem '{}' has no constant for the {} regime", c.problem, to_string(c.regime)));
    return *mu;
}

}  // namespace

Bundle resolve_params(const ExperimentConfig& c, const Problem& prob) {
    const double mu = regime_constant(c, prob);
    const double L = prob.smooth().lipschitz();
    if (c.solver == "agm") {
        if (prob.composite() && !std::get<CompositeObjective>(prob.objective).prox_term().is_zero())
            throw std::invalid_argument("agm needs a smooth problem; use solver = pgm for lasso");
        if (c.regime == Regime::PolyakLojasiewicz && (c.gamma || c.omega != 0.0))
            throw std::invalid_argument(
                "the PL bundle fixes gamma and omega = 0; gamma/omega overrides are rejected");
        return agm_params(c.regime, mu, L, c.gamma.value_or(1.0), c.omega, c.alpha);
    }
    if (c.solver == "pgm") return pgm_params(c.regime, mu, L, c.omega, c.alpha);

    const double beta = c.beta.value_or(1.0 / std::sqrt(L));
    if (c.regime == Regime::PolyakLojasiewicz) {
        OdeParams p = ode_params_pl(mu, beta, c.theta.value_or(1.0));
        if (c.alpha) {
            p.alpha = *c.alpha;
            p.gamma = p.theta + p.alpha * p.beta;
            require_valid(check_constraints(p), "ode pl bundle");
        }
        return p;
    }
    double alpha = 0.0;
    std::optional<double> theta = c.theta;
    if (c.alpha) {
        alpha = *c.alpha;
    } else {
        const double th = c.theta.value_or(std::max(1.0, c.omega / 2.0));
        alpha = ode_alpha_max(c.regime, mu, beta, c.omega, th);
        theta = th;
    }
    return c.regime == Regime::StronglyConvex ? ode_params_sc(mu, alpha, beta, c.omega, theta)
                                              : ode_params_qg(mu, alpha, beta, c.omega, theta);
}

std::string output_directory(const ExperimentConfig& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("HESSDAMP_OUT_DIR"); env && *env) return env;
    return ".";
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
    if (c.iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    const Problem prob = build_problem(c);
    const Bundle bundle = resolve_params(c, prob);

    ExperimentResult res;
    if (const auto* p = std::get_if<AgmParams>(&bundle)) {
        RunOptions opt;
        opt.iterations = c.iterations;
        opt.certify = c.certify;
        res.trace = agm_run(prob.smooth(), *p, prob.x0, opt);
        res.trace.summary.rate_empirical = fit_linear_rate(res.trace);
    } else if (const auto* p = std::get_if<PgmParams>(&bundle)) {
        RunOptions opt;
        opt.iterations = c.iterations;
        opt.certify = c.certify;
        const CompositeObjective F = prob.composite() ? std::get<CompositeObjective>(prob.objective)
                                                      : CompositeObjective(prob.smooth(), ProxTerm::zero());
        res.trace = pgm_run(F, *p, prob.x0, opt);
        res.trace.summary.rate_empirical = fit_linear_rate(res.trace);
    } else {
        const auto& op = std::get<OdeParams>(bundle);
        if (prob.composite()) throw std::invalid_argument("the ode solver needs a smooth problem");
        OdeOptions opt;
        opt.horizon = c.horizon.value_or(20.0 / op.decay_rate);
        opt.dt = c.dt.value_or(0.0);
        opt.certify = c.certify;
        res.trace = ode_run(prob.smooth(), op, prob.x0, opt);
        res.trace.summary.rate_empirical = fit_decay_rate(res.trace);
    }
    if (c.certify && !res.trace.summary.certified)
        throw std::invalid_argument("certification requested but the problem has no known minimizer");

    if (c.write_files) {
        const std::filesystem::path dir = output_directory(c);
        std::filesystem::create_directories(dir);
        res.csv_path = c.csv_path.empty() ? (dir / (c.label() + ".csv")).string() : c.csv_path;
        res.json_path = c.json_path.empty() ? (dir / (c.label() + ".json")).string() : c.json_path;
        std::ofstream csv(res.csv_path);
        write_csv(csv, res.trace);
        std::ofstream json(res.json_path);
        write_json_summary(json, res.trace);
        if (!csv || !json) throw std::runtime_error("failed to write trace artifacts");
    }
    return res;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<double> fit_log_slope(const std::vector<double>& idx, const std::vector<double>& gaps, double window) {
    const std::size_t n = gaps.size();
    if (n == 0 || idx.size() != n) return std::nullopt;
    if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("fit window must be in (0, 1]");
    const double g0 = gaps.front();
    std::size_t cut = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(gaps[i] > 1e-13 * g0)) {
            cut = i;
            break;
        }
    }
    const std::size_t skip = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(cut)));
    const std::size_t start =
        std::max(skip, cut - static_cast<std::size_t>(std::floor(window * static_cast<double>(cut))));

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = start; i < cut; ++i) {
        if (!(gaps[i] > 0.0) || !std::isfinite(gaps[i])) continue;
        const double x = idx[i], y = std::log(gaps[i]);
        sx += x;
        sy += y;
        ++m;
    }
    if (m < 20) return std::nullopt;
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    for (std::size_t i = start; i < cut; ++i) {
        if (!(gaps[i] > 0.0) || !std::isfinite(gaps[i])) continue;
        const double dx = idx[i] - mx, dy = std::log(gaps[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

}  // namespace

std::optional<double> fit_linear_rate(const std::vector<double>& gaps, double window) {
    std::vector<double> idx(gaps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    const auto slope = fit_log_slope(idx, gaps, window);
    if (!slope) return std::nullopt;
    return std::expm1(-*slope);
}

std::optional<double> fit_linear_rate(const Trace& trace, double window) {
    std::vector<double> gaps;
    gaps.reserve(trace.records.size());
    for (const auto& r : trace.records) gaps.push_back(r.f_gap_y);
    return fit_linear_rate(gaps, window);
}

std::optional<double> fit_decay_rate(const Trace& trace, double window) {
    std::vector<double> idx, gaps;
    for (const auto& r : trace.records) {
        idx.push_back(r.index);
        gaps.push_back(r.f_gap_y);
    }
    const auto slope = fit_log_slope(idx, gaps, window);
    if (!slope) return std::nullopt;
    return -*slope;
}

std::vector<ExperimentConfig> sweep_configs(const ExperimentConfig& base, const std::vector<double>& omegas,
                                            const std::vector<double>& gammas) {
    std::vector<ExperimentConfig> out;
    for (double g : gammas)
        for (double w : omegas) {
            ExperimentConfig c = base;
            c.gamma = g;
            c.omega = w;
            out.push_back(std::move(c));
        }
    return out;
}

std::vector<RateRow> rate_table(const std::vector<ExperimentConfig>& configs, unsigned threads) {
    std::vector<RateRow> rows(configs.size());
    auto run_one = [&](std::size_t i) {
        const ExperimentConfig& c = configs[i];
        RateRow& row = rows[i];
        row.gamma = c.gamma.value_or(1.0);
        row.omega = c.omega;
        try {
            const ExperimentResult r = run_experiment(c);
            const TraceSummary& s = r.trace.summary;
            row.rho_theory = s.rate_theory;
            row.rho_empirical = s.rate_empirical;
            row.iterations_to_threshold = s.iterations_to_threshold;
            row.checks_total = s.total_checked();
            row.checks_passed = s.total_checked() - s.total_failed();
            row.certified = s.certified && s.ok();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, configs.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    std::stable_sort(rows.begin(), rows.end(), [](const RateRow& a, const RateRow& b) {
        return a.gamma != b.gamma ? a.gamma < b.gamma : a.omega < b.omega;
    });
    return rows;
}

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? fmt::format("{:.6g}", *v) : "n/a"; }
std::string opt_iters(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "n/a"; }

}  // namespace

void write_rate_table_text(std::ostream& os, const std::vector<RateRow>& rows) {
    os << fmt::format("{:>6} {:>6} {:>12} {:>12} {:>10} {:>14} {}\n", "gamma", "omega", "rho_theory", "rho_emp",
                      "iters_1e-9", "checks", "status");
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            os << fmt::format("{:>6} {:>6} {:>12} {:>12} {:>10} {:>14} rejected: {}\n", fmt::format("{:g}", r.gamma),
                              fmt::format("{:g}", r.omega), "-", "-", "-", "-", r.error);
            continue;
        }
        os << fmt::format("{:>6} {:>6} {:>12.6g} {:>12} {:>10} {:>14} {}\n", fmt::format("{:g}", r.gamma),
                          fmt::format("{:g}", r.omega), r.rho_theory, opt_num(r.rho_empirical),
                          opt_iters(r.iterations_to_threshold), fmt::format("{}/{}", r.checks_passed, r.checks_total),
                          r.certified ? "certified" : "FAILED");
    }
}

void write_rate_table_csv(std::ostream& os, const std::vector<RateRow>& rows) {
    os << "gamma,omega,rho_theory,rho_empirical,iterations_to_1e-9,checks_passed,checks_total,certified,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), '\n', ' ');
        std::replace(err.begin(), err.end(), ',', ';');
        os << fmt::format("{},{},{},{},{},{},{},{},{}\n", format_number(r.gamma), format_number(r.omega),
                          r.error.empty() ? format_number(r.rho_theory) : "",
                          r.rho_empirical ? format_number(*r.rho_empirical) : "",
                          r.iterations_to_threshold ? std::to_string(*r.iterations_to_threshold) : "",
                          r.checks_passed, r.checks_total, r.certified ? "true" : "false", err);
    }
}

}  // namespace hessdamp
