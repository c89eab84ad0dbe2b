#pragma once

// Closed-form parameter bundles for the discrete solvers and the continuous
// dynamics, one constructor per convergence regime, plus the constraint
// checker that re-validates any bundle against its theorem's hypotheses.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hessdamp {

enum class Regime { StronglyConvex, QuadraticGrowth, PolyakLojasiewicz };

std::string_view to_string(Regime r) noexcept;
// Accepts "sc", "qg", "pl" and the long names; throws std::invalid_argument.
Regime parse_regime(std::string_view s);

struct Violation {
    std::string inequality;  // e.g. "gamma in [1,2]"
    double lhs = 0.0;
    double rhs = 0.0;
    std::string describe() const;
};

struct AgmParams {
    Regime regime = Regime::StronglyConvex;
    double mu = 0.0;
    double L = 0.0;
    double q = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    double h = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    double theta = 0.0;
    double A = 0.0;
    double rho = 0.0;
    double R_omega = 0.0;
    double v0_coeff = 0.0;
    // f(y_{k+1}) - f* <= bound_prefactor / (1+rho)^k * (f(x0) - f*).
    double bound_prefactor = 0.0;
};

struct PgmParams {
    Regime regime = Regime::StronglyConvex;
    double mu = 0.0;
    double L = 0.0;
    double q = 0.0;
    double alpha = 0.0;
    double omega = 0.0;
    double h = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    double theta = 0.0;
    double A = 0.0;
    double rho = 0.0;
    double R_omega = 0.0;
    double bound_prefactor = 0.0;
};

struct OdeParams {
    Regime regime = Regime::StronglyConvex;
    double mu = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
    double theta_min = 0.0;  // smallest theta the theorem admits for (alpha, beta, omega)
    double omega = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    double decay_rate = 0.0;
    double prefactor = 0.0;
};

// --- discrete, smooth -------------------------------------------------------

// Largest admissible alpha.
double agm_alpha_max(Regime regime, double mu, double gamma, double omega);

AgmParams agm_params_sc(double mu, double L, double gamma, double omega);
AgmParams agm_params_qg(double mu, double L, double gamma, double omega);
AgmParams agm_params_pl(double mu, double L);

// Regime constructor honoring an optional alpha override (re-validated).
AgmParams agm_params(Regime regime, double mu, double L, double gamma, double omega,
                     std::optional<double> alpha = std::nullopt);

// Bundle for arbitrary (alpha, gamma, omega, xi) with every derived quantity
// recomputed from the energy definitions. rho = A h; R_omega and the bound
// prefactor follow the given regime's formulas. Not validated.
AgmParams agm_params_custom(Regime regime, double mu, double L, double alpha, double gamma,
                            double omega, double xi, double v0_coeff);

// Nesterov's scheme expressed in AGM parameters: alpha h = 2 sqrt(q)/(1 - sqrt(q)),
// gamma = 1 + alpha h. Sits slightly outside the SC admissible set.
AgmParams agm_params_nesterov(double mu, double L);
double nesterov_tau(double q);

// --- discrete, composite ----------------------------------------------------

double pgm_alpha_max(Regime regime, double mu, double omega);

PgmParams pgm_params_sc(double mu, double L, double omega);
PgmParams pgm_params_qg(double mu, double L, double omega);
PgmParams pgm_params(Regime regime, double mu, double L, double omega,
                     std::optional<double> alpha = std::nullopt);

// Derived quantities for arbitrary (alpha, omega, xi); not validated.
PgmParams pgm_params_custom(Regime regime, double mu, double L, double alpha, double omega, double xi);

// --- continuous --------------------------------------------------------------

double ode_theta_min(Regime regime, double mu, double alpha, double beta, double omega);
// Largest alpha whose theta lower bound does not exceed theta.
double ode_alpha_max(Regime regime, double mu, double beta, double omega, double theta);

OdeParams ode_params_sc(double mu, double alpha, double beta, double omega,
                        std::optional<double> theta = std::nullopt);
OdeParams ode_params_qg(double mu, double alpha, double beta, double omega,
                        std::optional<double> theta = std::nullopt);
OdeParams ode_params_pl(double mu, double beta, double theta);

// --- validation --------------------------------------------------------------

std::vector<Violation> check_constraints(const AgmParams& p);
std::vector<Violation> check_constraints(const PgmParams& p);
std::vector<Violation> check_constraints(const OdeParams& p);

// Throws std::invalid_argument listing every violation.
void require_valid(const std::vector<Violation>& violations, std::string_view context);

}  // namespace hessdamp
