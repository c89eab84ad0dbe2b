#pragma once

// Inertial dynamics with Hessian-driven damping
//   x'' + alpha x' + beta Hess f(x) x' + gamma grad f(x) = 0
// integrated through the gradient-only first-order system in (x, z),
// z = x' + beta grad f(x):
//   x' = z - beta grad f(x)
//   z' = -alpha z + (alpha beta - gamma) grad f(x)

#include "hessdamp/oracle.hpp"
#include "hessdamp/params.hpp"
#include "hessdamp/trace.hpp"

#include <vector>

namespace hessdamp {

struct OdeState {
    double t = 0.0;
    Vector x;
    Vector z;
};

struct OdeField {
    Vector dx;
    Vector dz;
};

struct OdeEnergy {
    double eps = 0.0;
    double f_gap = 0.0;
};

// Initial state for x'(0) = -beta grad f(x0), i.e. z(0) = 0.
OdeState ode_initial_state(ConstPoint x0);

OdeField hbfh_vector_field(const OdeState& s, const SmoothObjective& obj, const OdeParams& p);

// Classical RK4; throws std::invalid_argument for dt <= 0 and SolverAbort on
// non-finite output.
OdeState rk4_step(const OdeState& s, double dt, const SmoothObjective& obj, const OdeParams& p);

OdeEnergy ode_energy(const OdeState& s, const SmoothObjective& obj, const OdeParams& p, ConstPoint xstar,
                     double fstar);

// alpha + beta L + sqrt(gamma L): bounds the field's Jacobian on L-smooth f.
double ode_stiffness_scale(const OdeParams& p, double L);
// 0.1 / sqrt(L (1 + alpha beta)).
double ode_default_dt(const OdeParams& p, double L);

struct OdeOptions {
    double horizon = 0.0;
    double dt = 0.0;               // 0 selects ode_default_dt
    std::size_t max_samples = 10000;  // records are thinned to at most this many (+1)
    bool certify = true;
    double tol_global = 1e-6;
    double step_constant = 1.0;  // c in the per-sample allowance c (lambda dt)^4 (lambda dt_sample)
};

Trace ode_run(const SmoothObjective& obj, const OdeParams& p, ConstPoint x0, const OdeOptions& opt);

struct OdeCertifyTolerance {
    double step_rate = 0.0;  // allowance per unit time for m(t) = eps(t) e^{rate t}
    double global = 1e-6;
};

// Certificates over consecutive samples: m(t_{j+1}) <= m(t_j)(1 + step_rate (t_{j+1} - t_j))
// and eps(t_j) <= eps(0) e^{-rate t_j} (1 + global). Result j compares samples j and j+1.
std::vector<CertificateResult> ode_certify(const Trace& trace, double rate, const OdeCertifyTolerance& tol);

}  // namespace hessdamp
