#pragma once

// Inertial proximal gradient method for F = f + g:
//   y_k     = x_k + (x_k - x_{k-1}) / (1 + alpha h)
//   x_{k+1} = prox_{h^2 g}(y_k - h^2 grad f(y_k))

#include "hessdamp/agm.hpp"
#include "hessdamp/oracle.hpp"
#include "hessdamp/params.hpp"
#include "hessdamp/trace.hpp"

namespace hessdamp {

struct PgmState {
    std::size_t k = 0;
    Vector x_prev;    // x_k
    Vector x_curr;    // x_{k+1}
    Vector y;         // y_k (x_0 before the first step)
    Vector v;         // (x_{k+1} - x_k) / h
    Vector grad_map;  // G_s(y_k)
};

struct PgmEnergyTerms {
    Vector phi;
    double E = 0.0;
};

// v_0 = 0, so x_1 = x_0.
PgmState pgm_init(const CompositeObjective& obj, const PgmParams& p, ConstPoint x0);

void pgm_step(PgmState& s, const CompositeObjective& obj, const PgmParams& p);

PgmEnergyTerms pgm_energy(const PgmState& s, const CompositeObjective& obj, const PgmParams& p, ConstPoint xstar,
                          double Fstar);

CertificateResult pgm_certify_step(std::size_t k, double Ek, double Ek1, const PgmParams& p,
                                   double tol_rel = kDefaultTolRel, double tol_abs = kDefaultTolAbsScale);

Trace pgm_run(const CompositeObjective& obj, const PgmParams& p, ConstPoint x0, const RunOptions& opt = {});

struct ProxDescentResult {
    double lhs = 0.0;  // F(y - s G_s(y))
    double rhs = 0.0;  // F(x) + <G, y - x> - s/2 |G|^2 - mu/2 |y - x|^2
    bool passed = false;
};

// Sufficient-decrease inequality of the prox-gradient step; mu = 0 gives the
// convex version. Tolerance 1e-10 max(1, |F(x)|).
ProxDescentResult prox_descent_eval(const CompositeObjective& obj, ConstPoint y, ConstPoint x_ref, double s,
                                    double mu);
bool prox_descent_check(const CompositeObjective& obj, ConstPoint y, ConstPoint x_ref, double s, double mu);

}  // namespace hessdamp
