#include "hessdamp/agm.hpp"

#include "hessdamp/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hessdamp {

namespace {

bool all_finite(ConstPoint x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

AgmState agm_init(const SmoothObjective& obj, const AgmParams& p, ConstPoint x0) {
    const std::size_t d = obj.dimension();
    if (x0.size() != d) throw std::invalid_argument("x0 dimension mismatch");
    const double h = p.h, ah = p.alpha * p.h;
    AgmState s;
    s.x.assign(x0.begin(), x0.end());
    s.grad_x = obj.gradient(x0);
    s.v.resize(d);
    s.y.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double g = s.grad_x[i];
        s.v[i] = -p.v0_coeff * h * g;
        const double x1 = x0[i] + h * s.v[i];
        const double y1 = x0[i] - h * h * g;
        s.y[i] = y1 + (1.0 + ah) * (y1 - x1) + (p.gamma - (1.0 + ah)) * (y1 - x0[i]);
    }
    if (!all_finite(s.grad_x)) throw SolverAbort(0, "non-finite gradient at x0");
    return s;
}

void agm_step(AgmState& s, const SmoothObjective& obj, const AgmParams& p) {
    const std::size_t d = s.x.size();
    const double h = p.h, ah = p.alpha * p.h;
    const double c_mom = 1.0 / (1.0 + ah);
    const double c_grad = p.gamma / (1.0 + ah) - 1.0;

    Vector y_next(d), x_next(d);
    for (std::size_t i = 0; i < d; ++i) {
        y_next[i] = s.x[i] - h * h * s.grad_x[i];
        x_next[i] = y_next[i] + c_mom * (y_next[i] - s.y[i]) + c_grad * (y_next[i] - s.x[i]);
    }
    if (!all_finite(x_next)) throw SolverAbort(s.k + 1, fmt::format("non-finite iterate at k = {}", s.k + 1));

    double drift = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = x_next[i] - (s.x[i] + h * s.v[i]);
        drift += diff * diff;
    }
    s.form_gap = std::sqrt(drift) / std::max(1.0, kernels::norm(s.x));

    Vector g_next = obj.gradient(x_next);
    if (!all_finite(g_next)) throw SolverAbort(s.k + 1, fmt::format("non-finite gradient at k = {}", s.k + 1));
    for (std::size_t i = 0; i < d; ++i)
        s.v[i] = (s.v[i] - h * (g_next[i] - s.grad_x[i]) - p.gamma * h * g_next[i]) * c_mom;

    s.x = std::move(x_next);
    s.y = std::move(y_next);
    s.grad_x = std::move(g_next);
    ++s.k;
}

EnergyTerms agm_energy(const AgmState& s, const SmoothObjective& obj, const AgmParams& p, ConstPoint xstar,
                       double fstar) {
    const std::size_t d = s.x.size();
    if (xstar.size() != d) throw std::invalid_argument("x* dimension mismatch");
    const double h = p.h;
    EnergyTerms e;
    e.phi.resize(d);
    e.sigma.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double dx = s.x[i] - xstar[i];
        e.phi[i] = (1.0 + p.xi * h) * s.v[i] + h * s.grad_x[i] + p.xi * dx;
        e.sigma[i] = dx - h * h * s.grad_x[i];
    }
    const bool exact = obj.min_value() && *obj.min_value() == fstar;
    const double gap = exact ? obj.gap(s.x) : obj.value(s.x) - fstar;
    e.psi = gap - 0.5 * h * h * kernels::norm_sq(s.grad_x);
    e.E = 0.5 * kernels::norm_sq(e.phi) - 0.5 * p.eta * kernels::norm_sq(e.sigma) + p.theta * e.psi;
    return e;
}

CertificateResult agm_certify_step(std::size_t k, double Ek, double Ek1, const AgmParams& p, double tol_rel,
                                   double tol_abs) {
    return certify_contraction(k, Ek, Ek1, 1.0 + p.A * p.h, tol_rel, tol_abs);
}

Trace agm_run(const SmoothObjective& obj, const AgmParams& p, ConstPoint x0, const RunOptions& opt) {
    if (opt.iterations < 1) throw std::invalid_argument("iteration count must be at least 1");
    const auto started = std::chrono::steady_clock::now();

    Trace trace;
    trace.kind = TraceKind::Discrete;
    TraceSummary& sum = trace.summary;
    sum.solver = "agm";
    sum.problem = obj.name();
    sum.regime = std::string(to_string(p.regime));
    sum.params = {{"alpha", p.alpha}, {"gamma", p.gamma},     {"omega", p.omega},   {"h", p.h},
                  {"xi", p.xi},       {"eta", p.eta},         {"theta", p.theta},   {"A", p.A},
                  {"rho", p.rho},     {"R_omega", p.R_omega}, {"v0_coeff", p.v0_coeff},
                  {"mu", p.mu},       {"L", p.L},             {"q", p.q}};
    sum.rate_theory = p.rho;
    sum.gap_is_exact = obj.has_solution();
    const bool certify = opt.certify && obj.has_solution() && p.R_omega > 0.0;
    sum.certified = certify;

    const Vector* xstar = obj.minimizer() ? &*obj.minimizer() : nullptr;
    const double fstar = obj.min_value().value_or(0.0);
    double best = obj.value(x0);
    auto gap_of = [&](ConstPoint x) {
        if (sum.gap_is_exact) return obj.gap(x);
        const double f = obj.value(x);
        best = std::min(best, f);
        return f - best;
    };

    AgmState s;
    try {
        s = agm_init(obj, p, x0);
    } catch (const SolverAbort& e) {
        sum.aborted = true;
        sum.abort_reason = e.what();
        return trace;
    }
    const double gap0 = gap_of(x0);
    double E_curr = certify ? agm_energy(s, obj, p, *xstar, fstar).E : kNaN;
    const double tol_abs = opt.tol_abs_scale * (1.0 + std::abs(E_curr));
    const double log_rate = std::log1p(p.rho);

    trace.records.reserve(opt.iterations);
    for (std::size_t k = 0; k < opt.iterations; ++k) {
        TraceRecord r;
        r.index = static_cast<double>(k);
        r.f_gap_x = gap_of(s.x);
        r.grad_norm = kernels::norm(s.grad_x);
        r.energy = E_curr;
        try {
            agm_step(s, obj, p);
        } catch (const SolverAbort& e) {
            sum.aborted = true;
            sum.abort_reason = e.what();
            break;
        }
        sum.checks["form_agreement"].add(s.form_gap <= 1e-12, 1e-12 - s.form_gap);
        r.f_gap_y = gap_of(s.y);
        if (certify) {
            const double E_next = agm_energy(s, obj, p, *xstar, fstar).E;
            const CertificateResult c = agm_certify_step(k, E_curr, E_next, p, opt.tol_rel, tol_abs);
            r.certificate_slack = c.slack;
            sum.checks["energy"].add(c.passed, c.slack);
            E_curr = E_next;
            r.theorem_bound = p.bound_prefactor * gap0 * std::exp(-static_cast<double>(k) * log_rate);
            const double margin = r.theorem_bound - r.f_gap_y;
            sum.checks["bound"].add(margin >= -bound_tolerance(r.theorem_bound, gap0), margin);
        }
        trace.records.push_back(r);
        if (!sum.iterations_to_threshold && r.f_gap_y <= 1e-9 * gap0) sum.iterations_to_threshold = k;
        if (gap0 > 0.0 && r.f_gap_x > opt.divergence_factor * gap0) {
            sum.aborted = true;
            sum.abort_reason = fmt::format("divergence guard tripped at k = {}", k);
            break;
        }
    }
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

std::pair<Vector, Vector> nesterov_reference_step(ConstPoint y_prev, ConstPoint y_curr, double tau, double h,
                                                  const SmoothObjective& obj) {
    const std::size_t d = y_curr.size();
    Vector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = y_curr[i] + tau * (y_curr[i] - y_prev[i]);
    const Vector g = obj.gradient(x);
    Vector y_next(d);
    for (std::size_t i = 0; i < d; ++i) y_next[i] = x[i] - h * h * g[i];
    return {std::move(x), std::move(y_next)};
}

}  // namespace hessdamp
