#include "hessdamp/pgm.hpp"

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

PgmState pgm_init(const CompositeObjective& obj, const PgmParams& p, ConstPoint x0) {
    const std::size_t d = obj.dimension();
    if (x0.size() != d) throw std::invalid_argument("x0 dimension mismatch");
    PgmState s;
    s.x_prev.assign(x0.begin(), x0.end());
    s.x_curr = s.x_prev;
    s.y = s.x_prev;
    s.v.assign(d, 0.0);
    s.grad_map = grad_mapping(obj, x0, p.h * p.h);
    return s;
}

void pgm_step(PgmState& s, const CompositeObjective& obj, const PgmParams& p) {
    const std::size_t d = s.x_curr.size();
    const double h = p.h, step = h * h;
    const double c_mom = 1.0 / (1.0 + p.alpha * h);

    for (std::size_t i = 0; i < d; ++i) s.y[i] = s.x_curr[i] + c_mom * (s.x_curr[i] - s.x_prev[i]);
    const Vector g = obj.smooth().gradient(s.y);
    Vector z(d), x_next(d);
    kernels::axpby(1.0, s.y, -step, g, z);
    obj.prox_term().prox(z, step, x_next);
    if (!all_finite(x_next)) throw SolverAbort(s.k + 1, fmt::format("non-finite iterate at k = {}", s.k + 1));

    for (std::size_t i = 0; i < d; ++i) {
        s.grad_map[i] = (s.y[i] - x_next[i]) / step;
        s.v[i] = (x_next[i] - s.x_curr[i]) / h;
    }
    s.x_prev.swap(s.x_curr);
    s.x_curr = std::move(x_next);
    ++s.k;
}

PgmEnergyTerms pgm_energy(const PgmState& s, const CompositeObjective& obj, const PgmParams& p, ConstPoint xstar,
                          double Fstar) {
    const std::size_t d = s.x_curr.size();
    if (xstar.size() != d) throw std::invalid_argument("x* dimension mismatch");
    PgmEnergyTerms e;
    e.phi.resize(d);
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double dx = s.x_curr[i] - xstar[i];
        e.phi[i] = s.v[i] + p.xi * dx;
        dist_sq += dx * dx;
    }
    const bool exact = obj.min_value() && *obj.min_value() == Fstar;
    const double gap = exact ? obj.gap(s.x_curr) : obj.value(s.x_curr) - Fstar;
    e.E = 0.5 * kernels::norm_sq(e.phi) - 0.5 * p.eta * dist_sq + p.theta * gap;
    return e;
}

CertificateResult pgm_certify_step(std::size_t k, double Ek, double Ek1, const PgmParams& p, double tol_rel,
                                   double tol_abs) {
    return certify_contraction(k, Ek, Ek1, 1.0 + p.A * p.h, tol_rel, tol_abs);
}

ProxDescentResult prox_descent_eval(const CompositeObjective& obj, ConstPoint y, ConstPoint x_ref, double s,
                                    double mu) {
    const std::size_t d = y.size();
    const Vector G = grad_mapping(obj, y, s);
    Vector moved(d), diff(d);
    for (std::size_t i = 0; i < d; ++i) {
        moved[i] = y[i] - s * G[i];
        diff[i] = y[i] - x_ref[i];
    }
    ProxDescentResult r;
    const double Fx = obj.value(x_ref);
    r.lhs = obj.value(moved);
    r.rhs = Fx + kernels::dot(G, diff) - 0.5 * s * kernels::norm_sq(G) - 0.5 * mu * kernels::norm_sq(diff);
    r.passed = r.lhs <= r.rhs + 1e-10 * std::max(1.0, std::abs(Fx));
    return r;
}

bool prox_descent_check(const CompositeObjective& obj, ConstPoint y, ConstPoint x_ref, double s, double mu) {
    return prox_descent_eval(obj, y, x_ref, s, mu).passed;
}

Trace pgm_run(const CompositeObjective& obj, const PgmParams& p, ConstPoint x0, const RunOptions& opt) {
    if (opt.iterations < 1) throw std::invalid_argument("iteration count must be at least 1");
    const auto started = std::chrono::steady_clock::now();

    Trace trace;
    trace.kind = TraceKind::Discrete;
    TraceSummary& sum = trace.summary;
    sum.solver = "pgm";
    sum.problem = obj.smooth().name();
    sum.regime = std::string(to_string(p.regime));
    sum.params = {{"alpha", p.alpha}, {"omega", p.omega}, {"h", p.h},   {"xi", p.xi},
                  {"eta", p.eta},     {"theta", p.theta}, {"A", p.A},   {"rho", p.rho},
                  {"R_omega", p.R_omega}, {"mu", p.mu},   {"L", p.L},   {"q", p.q}};
    sum.rate_theory = p.rho;
    sum.gap_is_exact = obj.has_solution();
    const bool certify = opt.certify && obj.has_solution() && p.R_omega > 0.0;
    sum.certified = certify;

    const Vector* xstar = obj.minimizer() ? &*obj.minimizer() : nullptr;
    const double Fstar = obj.min_value().value_or(0.0);
    double best = obj.value(x0);
    auto gap_of = [&](ConstPoint x) {
        if (sum.gap_is_exact) return obj.gap(x);
        const double f = obj.value(x);
        best = std::min(best, f);
        return f - best;
    };

    const double step = p.h * p.h;
    const double mu = p.mu;
    const bool corollary = certify && p.regime == Regime::StronglyConvex;

    PgmState s = pgm_init(obj, p, x0);
    const double gap0 = gap_of(x0);
    double E_curr = certify ? pgm_energy(s, obj, p, *xstar, Fstar).E : kNaN;
    const double tol_abs = opt.tol_abs_scale * (1.0 + std::abs(E_curr));
    const double log_rate = std::log1p(p.rho);

    trace.records.reserve(opt.iterations);
    for (std::size_t k = 0; k < opt.iterations; ++k) {
        TraceRecord r;
        r.index = static_cast<double>(k);
        r.f_gap_x = gap_of(s.x_prev);
        r.f_gap_y = gap_of(s.x_curr);
        r.grad_norm = kernels::norm(s.grad_map);
        r.energy = E_curr;
        try {
            pgm_step(s, obj, p);
        } catch (const SolverAbort& e) {
            sum.aborted = true;
            sum.abort_reason = e.what();
            break;
        }
        if (certify) {
            const double E_next = pgm_energy(s, obj, p, *xstar, Fstar).E;
            const CertificateResult c = pgm_certify_step(k, E_curr, E_next, p, opt.tol_rel, tol_abs);
            r.certificate_slack = c.slack;
            sum.checks["energy"].add(c.passed, c.slack);
            E_curr = E_next;
            r.theorem_bound = p.bound_prefactor * gap0 * std::exp(-static_cast<double>(k) * log_rate);
            const double margin = r.theorem_bound - r.f_gap_y;
            sum.checks["bound"].add(margin >= -bound_tolerance(r.theorem_bound, gap0), margin);
        }
        if (corollary) {
            // Inner-product lower bound at the new iterate x_{k+2} produced from y_{k+1}.
            const std::size_t d = s.x_curr.size();
            Vector e(d);
            for (std::size_t i = 0; i < d; ++i) e[i] = s.x_curr[i] - (*xstar)[i];
            const double lhs = kernels::dot(s.grad_map, e);
            const double t1 = gap_of(s.x_curr) / (1.0 - mu * step);
            const double t2 = 0.5 * step * kernels::norm_sq(s.grad_map);
            const double t3 = mu / (2.0 * (1.0 - mu * step)) * kernels::norm_sq(e);
            const double rhs = t1 - t2 + t3;
            const double tol = opt.tol_rel * (std::abs(lhs) + t1 + t2 + t3) + tol_abs;
            sum.checks["prox_corollary"].add(lhs >= rhs - tol, lhs - rhs);
        }
        trace.records.push_back(r);
        if (!sum.iterations_to_threshold && r.f_gap_y <= 1e-9 * gap0) sum.iterations_to_threshold = k;
        if (gap0 > 0.0 && r.f_gap_y > opt.divergence_factor * gap0) {
            sum.aborted = true;
            sum.abort_reason = fmt::format("divergence guard tripped at k = {}", k);
            break;
        }
    }
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

}  // namespace hessdamp
