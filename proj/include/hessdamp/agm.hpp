#pragma once

// The inertial accelerated gradient method in its two-sequence form
//   y_{k+1} = x_k - h^2 grad f(x_k)
//   x_{k+1} = y_{k+1} + (y_{k+1} - y_k)/(1 + alpha h) + (gamma/(1 + alpha h) - 1)(y_{k+1} - x_k)
// with the position/velocity recursion tracked alongside for the energy.

#include "hessdamp/oracle.hpp"
#include "hessdamp/params.hpp"
#include "hessdamp/trace.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace hessdamp {

class SolverAbort : public std::runtime_error {
public:
    SolverAbort(std::size_t iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

struct AgmState {
    std::size_t k = 0;
    Vector x;       // x_k
    Vector y;       // y_k
    Vector v;       // v_k = (x_{k+1} - x_k) / h, from the recursion
    Vector grad_x;  // grad f(x_k)
    // |x_k - (x_{k-1} + h v_{k-1})| / max(1, |x_{k-1}|) at the last step.
    double form_gap = 0.0;
};

struct EnergyTerms {
    Vector phi;
    Vector sigma;
    double psi = 0.0;
    double E = 0.0;
};

AgmState agm_init(const SmoothObjective& obj, const AgmParams& p, ConstPoint x0);

// Advances k -> k+1. Throws SolverAbort on non-finite iterates.
void agm_step(AgmState& s, const SmoothObjective& obj, const AgmParams& p);

EnergyTerms agm_energy(const AgmState& s, const SmoothObjective& obj, const AgmParams& p, ConstPoint xstar,
                       double fstar);

CertificateResult agm_certify_step(std::size_t k, double Ek, double Ek1, const AgmParams& p,
                                   double tol_rel = kDefaultTolRel, double tol_abs = kDefaultTolAbsScale);

struct RunOptions {
    std::size_t iterations = 1000;
    bool certify = true;
    double tol_rel = kDefaultTolRel;
    // Absolute certificate floor is tol_abs_scale * (1 + |E_0|).
    double tol_abs_scale = kDefaultTolAbsScale;
    // Divergence guard: abort once the gap exceeds this multiple of the initial gap.
    double divergence_factor = 1e6;
};

Trace agm_run(const SmoothObjective& obj, const AgmParams& p, ConstPoint x0, const RunOptions& opt = {});

// One step of Nesterov's scheme: x = y_curr + tau (y_curr - y_prev), y_next = x - h^2 grad f(x).
std::pair<Vector, Vector> nesterov_reference_step(ConstPoint y_prev, ConstPoint y_curr, double tau, double h,
                                                  const SmoothObjective& obj);

// Bound-check tolerance used by every discrete run.
inline double bound_tolerance(double bound, double gap0) {
    return kDefaultTolRel * bound + kDefaultTolAbsScale * (1.0 + gap0);
}

}  // namespace hessdamp
