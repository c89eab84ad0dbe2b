#include "hessdamp/params.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace hessdamp {

namespace {

constexpr double kRelTol = 1e-12;

bool close(double a, double b, double rel = kRelTol) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// a <= b up to rounding.
bool at_most(double a, double b) { return a <= b + kRelTol * std::max(1.0, std::abs(b)); }

void require_mu_L(double mu, double L) {
    if (!(mu > 0.0) || !(L > mu) || !std::isfinite(L))
        throw std::invalid_argument(fmt::format("violated: 0 < mu < L (mu = {}, L = {})", mu, L));
}

void require_omega(double omega) {
    if (!(omega >= 0.0 && omega <= 1.0))
        throw std::invalid_argument(fmt::format("violated: omega in [0,1] (omega = {})", omega));
}

void require_gamma(double gamma) {
    if (!(gamma >= 1.0 && gamma <= 2.0))
        throw std::invalid_argument(fmt::format("violated: gamma in [1,2] (gamma = {})", gamma));
}

double agm_R(Regime regime, double alpha_h, double omega) {
    switch (regime) {
        case Regime::StronglyConvex:
            return 1.0 - (2.0 * omega / ((1.0 + omega) * (2.0 + omega))) * ((2.0 + omega) + alpha_h) /
                             (1.0 + alpha_h);
        case Regime::QuadraticGrowth: {
            const double r = std::sqrt(1.0 + omega);
            return 1.0 - omega / (1.0 + omega + r);
        }
        case Regime::PolyakLojasiewicz:
            return 1.0;
    }
    return 0.0;
}

double agm_prefactor(Regime regime, double R, double omega) {
    switch (regime) {
        case Regime::StronglyConvex: return (2.0 + omega) / R;
        case Regime::QuadraticGrowth: return 2.0 / R;
        case Regime::PolyakLojasiewicz: return 1.0;
    }
    return 0.0;
}

double agm_v0_coeff(Regime regime, double alpha_h, double omega) {
    switch (regime) {
        case Regime::StronglyConvex:
            return (2.0 + omega) / (2.0 + omega + (1.0 + omega) * alpha_h);
        case Regime::QuadraticGrowth: {
            const double r = std::sqrt(1.0 + omega);
            return (2.0 + omega + r) / (2.0 + omega + r + (1.0 + omega + r) * alpha_h);
        }
        case Regime::PolyakLojasiewicz:
            return 1.0;
    }
    return 0.0;
}

// Energy shift xi as a fraction of alpha.
double xi_fraction(Regime regime, double omega) {
    switch (regime) {
        case Regime::StronglyConvex: return (1.0 + omega) / (2.0 + omega);
        case Regime::QuadraticGrowth: {
            const double r = std::sqrt(1.0 + omega);
            return (1.0 + omega + r) / (2.0 + omega + r);
        }
        case Regime::PolyakLojasiewicz: return 0.0;
    }
    return 0.0;
}

double pl_gamma(double q) { return (std::sqrt(2.0 * q - q * q) - q) / (1.0 - q); }
double pl_alpha_h(double q) { return 2.0 * q / (1.0 + std::sqrt(2.0 * q - q * q)); }

double agm_eta(double alpha, double omega, double xi, double h) {
    return omega * (alpha - xi) * xi / ((1.0 + alpha * h) * (1.0 + (1.0 + omega) * xi * h));
}

double agm_theta(double alpha, double gamma, double omega, double xi, double h) {
    return gamma - omega * (alpha - xi) * h * (1.0 + (gamma + 1.0) * xi * h) /
                       ((1.0 + alpha * h) * (1.0 + (1.0 + omega) * xi * h));
}

double pgm_eta(double alpha, double omega, double xi, double h) {
    return omega * xi * (alpha - xi) / (1.0 + (1.0 + omega) * xi * h);
}

double pgm_theta(double alpha, double omega, double xi, double h) {
    return (1.0 + (alpha - xi) * h) * (1.0 + xi * h + omega * (alpha - xi) * h);
}

void push(std::vector<Violation>& out, bool ok, std::string ineq, double lhs, double rhs) {
    if (!ok) out.push_back({std::move(ineq), lhs, rhs});
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::StronglyConvex: return "sc";
        case Regime::QuadraticGrowth: return "qg";
        case Regime::PolyakLojasiewicz: return "pl";
    }
    return "?";
}

Regime parse_regime(std::string_view s) {
    std::string lower;
    for (char c : s)
        if (c != '_' && c != '-') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "sc" || lower == "stronglyconvex") return Regime::StronglyConvex;
    if (lower == "qg" || lower == "quadraticgrowth") return Regime::QuadraticGrowth;
    if (lower == "pl" || lower == "polyaklojasiewicz") return Regime::PolyakLojasiewicz;
    throw std::invalid_argument(fmt::format("unknown regime '{}' (expected sc, qg or pl)", s));
}

std::string Violation::describe() const {
    return fmt::format("violated: {} (lhs = {:.17g}, rhs = {:.17g})", inequality, lhs, rhs);
}

void require_valid(const std::vector<Violation>& violations, std::string_view context) {
    if (violations.empty()) return;
    std::string msg = fmt::format("{}: {} hypothesis violation(s)", context, violations.size());
    for (const auto& v : violations) msg += "\n  " + v.describe();
    throw std::invalid_argument(msg);
}

// ---------------------------------------------------------------------------

double agm_alpha_max(Regime regime, double mu, double gamma, double omega) {
    switch (regime) {
        case Regime::StronglyConvex:
            return (2.0 + omega) * std::sqrt(mu * gamma / (1.0 + omega));
        case Regime::QuadraticGrowth: {
            const double r = std::sqrt(1.0 + omega);
            return (2.0 + omega + r) / (1.0 + omega + r) * std::sqrt(mu * gamma);
        }
        case Regime::PolyakLojasiewicz:
            throw std::invalid_argument("PL regime fixes alpha h; use agm_params_pl");
    }
    return 0.0;
}

AgmParams agm_params_custom(Regime regime, double mu, double L, double alpha, double gamma, double omega,
                            double xi, double v0_coeff) {
    AgmParams p;
    p.regime = regime;
    p.mu = mu;
    p.L = L;
    p.q = mu / L;
    p.alpha = alpha;
    p.gamma = gamma;
    p.omega = omega;
    p.h = 1.0 / std::sqrt(L);
    p.xi = xi;
    p.eta = agm_eta(alpha, omega, xi, p.h);
    p.theta = agm_theta(alpha, gamma, omega, xi, p.h);
    p.A = (1.0 + omega) * (alpha - xi) / (1.0 + (1.0 + omega) * xi * p.h);
    p.rho = p.A * p.h;
    p.R_omega = agm_R(regime, alpha * p.h, omega);
    p.v0_coeff = v0_coeff;
    p.bound_prefactor = agm_prefactor(regime, p.R_omega, omega);
    return p;
}

AgmParams agm_params(Regime regime, double mu, double L, double gamma, double omega, std::optional<double> alpha) {
    require_mu_L(mu, L);
    if (regime == Regime::PolyakLojasiewicz) {
        AgmParams p = agm_params_pl(mu, L);
        if (alpha) {
            p = agm_params_custom(Regime::PolyakLojasiewicz, mu, L, *alpha, p.gamma, 0.0, 0.0, 1.0);
            require_valid(check_constraints(p), "agm pl bundle");
        }
        return p;
    }
    require_gamma(gamma);
    require_omega(omega);
    const double a = alpha.value_or(agm_alpha_max(regime, mu, gamma, omega));
    const double h = 1.0 / std::sqrt(L);
    AgmParams p = agm_params_custom(regime, mu, L, a, gamma, omega, xi_fraction(regime, omega) * a,
                                    agm_v0_coeff(regime, a * h, omega));
    // The theorem's closed form for rho; equals A h at the prescribed xi.
    const double ah = a * h;
    if (regime == Regime::StronglyConvex) {
        p.rho = (1.0 + omega) * ah / ((2.0 + omega) + (1.0 + omega) * (1.0 + omega) * ah);
    } else {
        const double r = std::sqrt(1.0 + omega);
        p.rho = (1.0 + omega) * ah / ((2.0 + omega + r) + (1.0 + omega + r) * (1.0 + omega) * ah);
    }
    require_valid(check_constraints(p), fmt::format("agm {} bundle", to_string(regime)));
    return p;
}

AgmParams agm_params_sc(double mu, double L, double gamma, double omega) {
    return agm_params(Regime::StronglyConvex, mu, L, gamma, omega);
}

AgmParams agm_params_qg(double mu, double L, double gamma, double omega) {
    return agm_params(Regime::QuadraticGrowth, mu, L, gamma, omega);
}

AgmParams agm_params_pl(double mu, double L) {
    require_mu_L(mu, L);
    const double q = mu / L;
    const double ah = pl_alpha_h(q);
    AgmParams p = agm_params_custom(Regime::PolyakLojasiewicz, mu, L, ah * std::sqrt(L), pl_gamma(q), 0.0, 0.0, 1.0);
    p.rho = ah;
    return p;
}

double nesterov_tau(double q) { return (1.0 - std::sqrt(q)) / (1.0 + std::sqrt(q)); }

AgmParams agm_params_nesterov(double mu, double L) {
    require_mu_L(mu, L);
    const double sq = std::sqrt(mu / L);
    const double ah = 2.0 * sq / (1.0 - sq);
    const double alpha = ah * std::sqrt(L);
    const double xi = xi_fraction(Regime::StronglyConvex, 0.0) * alpha;
    return agm_params_custom(Regime::StronglyConvex, mu, L, alpha, 1.0 + ah, 0.0, xi,
                             agm_v0_coeff(Regime::StronglyConvex, ah, 0.0));
}

// ---------------------------------------------------------------------------

double pgm_alpha_max(Regime regime, double mu, double omega) {
    switch (regime) {
        case Regime::StronglyConvex: return (2.0 + omega) * std::sqrt(mu / (1.0 + omega));
        case Regime::QuadraticGrowth: {
            const double r = std::sqrt(1.0 + omega);
            return (2.0 + omega + r) / (1.0 + omega + r) * std::sqrt(mu);
        }
        case Regime::PolyakLojasiewicz:
            throw std::invalid_argument("no proximal theorem covers the PL regime");
    }
    return 0.0;
}

PgmParams pgm_params_custom(Regime regime, double mu, double L, double alpha, double omega, double xi) {
    PgmParams p;
    p.regime = regime;
    p.mu = mu;
    p.L = L;
    p.q = mu / L;
    p.alpha = alpha;
    p.omega = omega;
    p.h = 1.0 / std::sqrt(L);
    p.xi = xi;
    p.eta = pgm_eta(alpha, omega, xi, p.h);
    p.theta = pgm_theta(alpha, omega, xi, p.h);
    const double xh = xi * p.h;
    p.A = (1.0 + omega) * (alpha - xi) * (1.0 - omega * xh / (1.0 + (1.0 + omega) * xh));
    const double ah = alpha * p.h;
    if (regime == Regime::QuadraticGrowth) {
        const double r = std::sqrt(1.0 + omega);
        p.rho = (1.0 + omega) * ah / ((2.0 + omega + r) + omega * (1.0 + omega + r) * ah);
        p.R_omega = 1.0 / r;
        p.bound_prefactor = 2.0 * r;
    } else {
        p.rho = (1.0 + omega) * ah / ((2.0 + omega) + omega * (1.0 + omega) * ah);
        p.R_omega = ((1.0 - omega) + (1.0 + omega) * ah) / (1.0 + (1.0 + omega) * ah);
        p.bound_prefactor = (2.0 + omega) / p.R_omega;
    }
    return p;
}

PgmParams pgm_params(Regime regime, double mu, double L, double omega, std::optional<double> alpha) {
    require_mu_L(mu, L);
    require_omega(omega);
    if (regime == Regime::PolyakLojasiewicz)
        throw std::invalid_argument("no proximal theorem covers the PL regime");
    const double a = alpha.value_or(pgm_alpha_max(regime, mu, omega));
    PgmParams p = pgm_params_custom(regime, mu, L, a, omega, xi_fraction(regime, omega) * a);
    require_valid(check_constraints(p), fmt::format("pgm {} bundle", to_string(regime)));
    return p;
}

PgmParams pgm_params_sc(double mu, double L, double omega) {
    return pgm_params(Regime::StronglyConvex, mu, L, omega);
}

PgmParams pgm_params_qg(double mu, double L, double omega) {
    return pgm_params(Regime::QuadraticGrowth, mu, L, omega);
}

// ---------------------------------------------------------------------------

double ode_theta_min(Regime regime, double mu, double alpha, double beta, double omega) {
    switch (regime) {
        case Regime::StronglyConvex:
            return (1.0 + omega) / ((2.0 + omega) * (2.0 + omega)) * (alpha * alpha / mu) *
                   (1.0 + omega * alpha * beta / (2.0 + omega));
        case Regime::QuadraticGrowth: {
            const double r = std::sqrt(1.0 + omega);
            const double ratio = (1.0 + omega + r) / (2.0 + omega + r);
            return ratio * ratio * (alpha * alpha / mu) * (1.0 + omega * alpha * beta / (r * (2.0 + omega + r)));
        }
        case Regime::PolyakLojasiewicz:
            return 0.0;
    }
    return 0.0;
}

double ode_alpha_max(Regime regime, double mu, double beta, double omega, double theta) {
    if (regime == Regime::PolyakLojasiewicz)
        throw std::invalid_argument("PL dynamics fix alpha = mu beta; no maximum applies");
    if (!(mu > 0.0) || !(beta > 0.0) || !(theta > 0.0))
        throw std::invalid_argument("ode_alpha_max needs mu, beta, theta > 0");
    double lo = 0.0, hi = std::sqrt(mu * theta);
    while (ode_theta_min(regime, mu, hi, beta, omega) <= theta) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ode_theta_min(regime, mu, mid, beta, omega) <= theta ? lo : hi) = mid;
    }
    return lo;
}

namespace {

OdeParams ode_params_common(Regime regime, double mu, double alpha, double beta, double omega,
                            std::optional<double> theta) {
    if (!(mu > 0.0)) throw std::invalid_argument(fmt::format("violated: mu > 0 (mu = {})", mu));
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument(fmt::format("violated: alpha > 0 and beta > 0 (alpha = {}, beta = {})", alpha, beta));
    require_omega(omega);
    OdeParams p;
    p.regime = regime;
    p.mu = mu;
    p.alpha = alpha;
    p.beta = beta;
    p.omega = omega;
    p.theta_min = ode_theta_min(regime, mu, alpha, beta, omega);
    p.theta = theta.value_or(std::max(p.theta_min, omega / 2.0));
    p.xi = xi_fraction(regime, omega) * alpha;
    p.eta = omega * p.xi * (alpha - p.xi);
    p.gamma = p.theta + (alpha - p.xi) * beta;
    const double r = std::sqrt(1.0 + omega);
    if (regime == Regime::StronglyConvex) {
        const double w = omega * alpha * beta / (2.0 + omega);
        p.decay_rate = p.xi;
        p.prefactor = (2.0 + w) / ((1.0 - omega) + w);
    } else {
        p.decay_rate = (1.0 + omega) * alpha / (2.0 + omega + r);
        p.prefactor = 1.0 + r;
    }
    require_valid(check_constraints(p), fmt::format("ode {} bundle", to_string(regime)));
    return p;
}

}  // namespace

OdeParams ode_params_sc(double mu, double alpha, double beta, double omega, std::optional<double> theta) {
    return ode_params_common(Regime::StronglyConvex, mu, alpha, beta, omega, theta);
}

OdeParams ode_params_qg(double mu, double alpha, double beta, double omega, std::optional<double> theta) {
    return ode_params_common(Regime::QuadraticGrowth, mu, alpha, beta, omega, theta);
}

OdeParams ode_params_pl(double mu, double beta, double theta) {
    if (!(mu > 0.0) || !(beta > 0.0) || !(theta > 0.0))
        throw std::invalid_argument(
            fmt::format("violated: mu, beta, theta > 0 (mu = {}, beta = {}, theta = {})", mu, beta, theta));
    OdeParams p;
    p.regime = Regime::PolyakLojasiewicz;
    p.mu = mu;
    p.alpha = mu * beta;
    p.beta = beta;
    p.theta = theta;
    p.theta_min = 0.0;
    p.gamma = theta + p.alpha * beta;
    p.decay_rate = 2.0 * mu * beta;
    p.prefactor = 1.0;
    return p;
}

// ---------------------------------------------------------------------------

std::vector<Violation> check_constraints(const AgmParams& p) {
    std::vector<Violation> v;
    push(v, p.mu > 0.0, "mu > 0", p.mu, 0.0);
    push(v, p.L > p.mu, "mu < L", p.mu, p.L);
    push(v, close(p.h, 1.0 / std::sqrt(p.L)), "h = 1/sqrt(L)", p.h, 1.0 / std::sqrt(p.L));
    push(v, p.omega >= 0.0 && p.omega <= 1.0, "omega in [0,1]", p.omega, p.omega < 0.0 ? 0.0 : 1.0);
    push(v, p.xi >= 0.0 && at_most(p.xi, p.alpha), "0 <= xi <= alpha", p.xi, p.alpha);
    push(v, close(p.eta, agm_eta(p.alpha, p.omega, p.xi, p.h)), "eta definition", p.eta,
         agm_eta(p.alpha, p.omega, p.xi, p.h));
    push(v, close(p.theta, agm_theta(p.alpha, p.gamma, p.omega, p.xi, p.h)), "theta definition", p.theta,
         agm_theta(p.alpha, p.gamma, p.omega, p.xi, p.h));

    if (p.regime == Regime::PolyakLojasiewicz) {
        const double q = p.mu / p.L;
        push(v, p.omega == 0.0, "omega = 0", p.omega, 0.0);
        push(v, p.xi == 0.0, "xi = 0", p.xi, 0.0);
        push(v, close(p.gamma, pl_gamma(q)), "gamma = (sqrt(2q-q^2)-q)/(1-q)", p.gamma, pl_gamma(q));
        push(v, p.alpha > 0.0, "alpha > 0", p.alpha, 0.0);
        push(v, at_most(p.alpha * p.h, pl_alpha_h(q)), "alpha h <= 2q/(1+sqrt(2q-q^2))", p.alpha * p.h,
             pl_alpha_h(q));
        push(v, p.v0_coeff == 1.0, "v0 = -h grad f(x0)", p.v0_coeff, 1.0);
    } else {
        push(v, p.gamma >= 1.0 && p.gamma <= 2.0, "gamma in [1,2]", p.gamma, p.gamma < 1.0 ? 1.0 : 2.0);
        if (p.mu > 0.0 && p.gamma > 0.0 && p.omega >= 0.0) {
            const double amax = agm_alpha_max(p.regime, p.mu, p.gamma, p.omega);
            push(v, at_most(p.alpha, amax), "alpha <= alpha_max", p.alpha, amax);
        }
        push(v, p.alpha >= 0.0, "alpha >= 0", p.alpha, 0.0);
        const double lo = (1.0 + p.omega) / (2.0 + p.omega) * p.alpha;
        push(v, at_most(lo, p.xi), "xi >= (1+omega)/(2+omega) alpha", p.xi, lo);
        push(v, p.R_omega > 0.0, "R_omega > 0", p.R_omega, 0.0);
    }
    push(v, p.rho > 0.0, "rho > 0", p.rho, 0.0);
    return v;
}

std::vector<Violation> check_constraints(const PgmParams& p) {
    std::vector<Violation> v;
    push(v, p.regime != Regime::PolyakLojasiewicz, "regime in {sc, qg}", 0.0, 0.0);
    push(v, p.mu > 0.0, "mu > 0", p.mu, 0.0);
    push(v, p.L > p.mu, "mu < L", p.mu, p.L);
    push(v, close(p.h, 1.0 / std::sqrt(p.L)), "h = 1/sqrt(L)", p.h, 1.0 / std::sqrt(p.L));
    push(v, p.omega >= 0.0 && p.omega <= 1.0, "omega in [0,1]", p.omega, p.omega < 0.0 ? 0.0 : 1.0);
    push(v, p.alpha > 0.0, "alpha > 0", p.alpha, 0.0);
    if (p.regime != Regime::PolyakLojasiewicz && p.mu > 0.0 && p.omega >= 0.0) {
        const double amax = pgm_alpha_max(p.regime, p.mu, p.omega);
        push(v, at_most(p.alpha, amax), "alpha <= alpha_max", p.alpha, amax);
    }
    push(v, p.xi >= 0.0 && at_most(p.xi, p.alpha), "0 <= xi <= alpha", p.xi, p.alpha);
    push(v, close(p.eta, pgm_eta(p.alpha, p.omega, p.xi, p.h)), "eta definition", p.eta,
         pgm_eta(p.alpha, p.omega, p.xi, p.h));
    push(v, close(p.theta, pgm_theta(p.alpha, p.omega, p.xi, p.h)), "theta definition", p.theta,
         pgm_theta(p.alpha, p.omega, p.xi, p.h));
    push(v, p.rho > 0.0, "rho > 0", p.rho, 0.0);
    push(v, p.R_omega > 0.0, "R_omega > 0", p.R_omega, 0.0);
    return v;
}

std::vector<Violation> check_constraints(const OdeParams& p) {
    std::vector<Violation> v;
    push(v, p.mu > 0.0, "mu > 0", p.mu, 0.0);
    push(v, p.alpha > 0.0, "alpha > 0", p.alpha, 0.0);
    push(v, p.beta > 0.0, "beta > 0", p.beta, 0.0);
    push(v, p.theta > 0.0, "theta > 0", p.theta, 0.0);
    push(v, p.omega >= 0.0 && p.omega <= 1.0, "omega in [0,1]", p.omega, p.omega < 0.0 ? 0.0 : 1.0);
    push(v, p.xi >= 0.0 && at_most(p.xi, p.alpha), "0 <= xi <= alpha", p.xi, p.alpha);
    push(v, close(p.gamma, p.theta + (p.alpha - p.xi) * p.beta), "gamma = theta + (alpha - xi) beta", p.gamma,
         p.theta + (p.alpha - p.xi) * p.beta);
    push(v, close(p.eta, p.omega * p.xi * (p.alpha - p.xi)), "eta = omega xi (alpha - xi)", p.eta,
         p.omega * p.xi * (p.alpha - p.xi));
    if (p.regime == Regime::PolyakLojasiewicz) {
        push(v, at_most(p.mu * p.beta, p.alpha), "alpha >= mu beta", p.alpha, p.mu * p.beta);
        push(v, p.omega == 0.0 && p.xi == 0.0, "xi = omega = 0", p.xi, 0.0);
    } else {
        push(v, at_most(p.omega / 2.0, p.theta), "theta >= omega/2", p.theta, p.omega / 2.0);
        const double tmin = ode_theta_min(p.regime, p.mu, p.alpha, p.beta, p.omega);
        push(v, at_most(tmin, p.theta), "theta >= theta lower bound", p.theta, tmin);
    }
    return v;
}

}  // namespace hessdamp
