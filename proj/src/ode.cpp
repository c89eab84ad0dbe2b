#include "hessdamp/ode.hpp"

#include "hessdamp/agm.hpp"
#include "hessdamp/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace hessdamp {

OdeState ode_initial_state(ConstPoint x0) {
    OdeState s;
    s.x.assign(x0.begin(), x0.end());
    s.z.assign(x0.size(), 0.0);
    return s;
}

OdeField hbfh_vector_field(const OdeState& s, const SmoothObjective& obj, const OdeParams& p) {
    const std::size_t d = s.x.size();
    const Vector g = obj.gradient(s.x);
    OdeField f;
    f.dx.resize(d);
    f.dz.resize(d);
    kernels::axpby(1.0, s.z, -p.beta, g, f.dx);
    kernels::axpby(-p.alpha, s.z, p.alpha * p.beta - p.gamma, g, f.dz);
    return f;
}

OdeState rk4_step(const OdeState& s, double dt, const SmoothObjective& obj, const OdeParams& p) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4 step size must be positive");
    const std::size_t d = s.x.size();
    auto shifted = [&](const OdeField& k, double w) {
        OdeState out;
        out.t = s.t + w;
        out.x.resize(d);
        out.z.resize(d);
        kernels::axpby(1.0, s.x, w, k.dx, out.x);
        kernels::axpby(1.0, s.z, w, k.dz, out.z);
        return out;
    };
    const OdeField k1 = hbfh_vector_field(s, obj, p);
    const OdeField k2 = hbfh_vector_field(shifted(k1, 0.5 * dt), obj, p);
    const OdeField k3 = hbfh_vector_field(shifted(k2, 0.5 * dt), obj, p);
    const OdeField k4 = hbfh_vector_field(shifted(k3, dt), obj, p);

    OdeState out;
    out.t = s.t + dt;
    out.x.resize(d);
    out.z.resize(d);
    const double w = dt / 6.0;
    bool finite = true;
    for (std::size_t i = 0; i < d; ++i) {
        out.x[i] = s.x[i] + w * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
        out.z[i] = s.z[i] + w * (k1.dz[i] + 2.0 * k2.dz[i] + 2.0 * k3.dz[i] + k4.dz[i]);
        finite = finite && std::isfinite(out.x[i]) && std::isfinite(out.z[i]);
    }
    if (!finite) throw SolverAbort(0, fmt::format("non-finite state at t = {}", out.t));
    return out;
}

OdeEnergy ode_energy(const OdeState& s, const SmoothObjective& obj, const OdeParams& p, ConstPoint xstar,
                     double fstar) {
    const std::size_t d = s.x.size();
    if (xstar.size() != d) throw std::invalid_argument("x* dimension mismatch");
    double shifted_sq = 0.0, dist_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double e = s.x[i] - xstar[i];
        const double w = s.z[i] + p.xi * e;
        shifted_sq += w * w;
        dist_sq += e * e;
    }
    OdeEnergy out;
    const bool exact = obj.min_value() && *obj.min_value() == fstar;
    out.f_gap = exact ? obj.gap(s.x) : obj.value(s.x) - fstar;
    out.eps = 0.5 * shifted_sq - 0.5 * p.eta * dist_sq + p.theta * out.f_gap;
    return out;
}

double ode_stiffness_scale(const OdeParams& p, double L) {
    return p.alpha + p.beta * L + std::sqrt(std::max(0.0, p.gamma) * L);
}

double ode_default_dt(const OdeParams& p, double L) { return 0.1 / std::sqrt(L * (1.0 + p.alpha * p.beta)); }

// Relative round-off floor for the step comparison.
constexpr double kStepRoundoff = 16.0 * std::numeric_limits<double>::epsilon();

static bool step_holds(const CertificateResult& c) {
    return std::isfinite(c.slack) && c.slack >= -kStepRoundoff * std::abs(c.rhs);
}

std::vector<CertificateResult> ode_certify(const Trace& trace, double rate, const OdeCertifyTolerance& tol) {
    std::vector<CertificateResult> out;
    const auto& rec = trace.records;
    if (rec.empty()) return out;
    const double eps0 = rec.front().energy;
    for (std::size_t j = 0; j + 1 < rec.size(); ++j) {
        const double t0 = rec[j].index, t1 = rec[j + 1].index;
        const double e0 = rec[j].energy, e1 = rec[j + 1].energy;
        // Compare in eps units at t1: eps(t0) e^{-rate (t1 - t0)} (1 + allowance) against eps(t1).
        const double decayed = e0 * std::exp(-rate * (t1 - t0)) * (1.0 + tol.step_rate * (t1 - t0));
        CertificateResult c;
        c.k = j;
        c.lhs = e1;
        c.rhs = decayed;
        c.slack = decayed - e1;
        const double envelope = eps0 * std::exp(-rate * t1) * (1.0 + tol.global);
        c.passed = step_holds(c) && e1 <= envelope;
        out.push_back(c);
    }
    return out;
}

Trace ode_run(const SmoothObjective& obj, const OdeParams& p, ConstPoint x0, const OdeOptions& opt) {
    if (!(opt.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (opt.dt < 0.0) throw std::invalid_argument("dt must be positive");
    if (x0.size() != obj.dimension()) throw std::invalid_argument("x0 dimension mismatch");
    const auto started = std::chrono::steady_clock::now();

    const double L = obj.lipschitz();
    const double dt_req = opt.dt > 0.0 ? opt.dt : ode_default_dt(p, L);
    const auto steps = static_cast<std::size_t>(std::ceil(opt.horizon / dt_req - 1e-9));
    const double dt = opt.horizon / static_cast<double>(steps);
    const std::size_t every = std::max<std::size_t>(1, (steps + opt.max_samples - 1) / std::max<std::size_t>(1, opt.max_samples));

    Trace trace;
    trace.kind = TraceKind::Continuous;
    TraceSummary& sum = trace.summary;
    sum.solver = "ode";
    sum.problem = obj.name();
    sum.regime = std::string(to_string(p.regime));
    sum.params = {{"alpha", p.alpha}, {"beta", p.beta},   {"gamma", p.gamma},          {"theta", p.theta},
                  {"omega", p.omega}, {"xi", p.xi},       {"eta", p.eta},              {"mu", p.mu},
                  {"dt", dt},         {"horizon", opt.horizon}, {"decay_rate", p.decay_rate},
                  {"prefactor", p.prefactor}, {"theta_min", p.theta_min}};
    sum.rate_theory = p.decay_rate;
    sum.gap_is_exact = obj.has_solution();
    const bool certify = opt.certify && obj.has_solution();
    sum.certified = certify;

    const Vector xstar = obj.minimizer().value_or(Vector(obj.dimension(), 0.0));
    const double fstar = obj.min_value().value_or(obj.value(x0));

    OdeState s = ode_initial_state(x0);
    auto record = [&](const OdeState& st) {
        const OdeEnergy e = ode_energy(st, obj, p, xstar, fstar);
        TraceRecord r;
        r.index = st.t;
        r.f_gap_y = e.f_gap;
        r.energy = e.eps;
        trace.records.push_back(r);
    };
    record(s);
    const double gap0 = trace.records.front().f_gap_y;
    for (std::size_t n = 1; n <= steps; ++n) {
        try {
            s = rk4_step(s, dt, obj, p);
        } catch (const SolverAbort& e) {
            sum.aborted = true;
            sum.abort_reason = e.what();
            break;
        }
        s.t = dt * static_cast<double>(n);
        if (n % every == 0 || n == steps) record(s);
    }

    for (auto& r : trace.records) r.theorem_bound = p.prefactor * gap0 * std::exp(-p.decay_rate * r.index);
    if (certify) {
        const double lam = ode_stiffness_scale(p, L);
        OdeCertifyTolerance tol;
        tol.step_rate = opt.step_constant * std::pow(lam * dt, 4) * lam;
        tol.global = opt.tol_global;
        const auto certs = ode_certify(trace, p.decay_rate, tol);
        const double eps0 = trace.records.front().energy;
        trace.records.front().certificate_slack = 0.0;
        for (const auto& c : certs) {
            TraceRecord& r = trace.records[c.k + 1];
            r.certificate_slack = c.slack;
            sum.checks["energy_step"].add(step_holds(c), c.slack);
            const double glob = eps0 * std::exp(-p.decay_rate * r.index) * (1.0 + opt.tol_global) - r.energy;
            sum.checks["energy_global"].add(glob >= 0.0, glob);
        }
        for (const auto& r : trace.records) {
            const double margin = r.theorem_bound * (1.0 + opt.tol_global) - r.f_gap_y;
            sum.checks["envelope"].add(margin >= 0.0, margin);
        }
    }
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

}  // namespace hessdamp
