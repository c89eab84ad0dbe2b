#include "hessdamp/oracle.hpp"

#include "hessdamp/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace hessdamp {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const DenseMatrix& m) {
    return {m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols)};
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    return out;
}

void check_mu(const std::optional<double>& mu, double L, const char* what) {
    if (!mu) return;
    if (!(*mu > 0.0) || *mu > L)
        throw std::invalid_argument(std::string(what) + " must lie in (0, L]; got " +
                                    std::to_string(*mu) + " with L = " + std::to_string(L));
}

// e^T G e / 2 + c^T e for a symmetric row-major G.
double quadratic_form_gap(const DenseMatrix& g, std::span<const double> c, ConstPoint x,
                          std::span<const double> xstar) {
    const std::size_t d = x.size();
    Vector e(d), ge(d);
    for (std::size_t i = 0; i < d; ++i) e[i] = x[i] - xstar[i];
    kernels::gemv(g.data, d, d, e, ge);
    return kernels::dot(c, e) + 0.5 * kernels::dot(e, ge);
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

// ---------------------------------------------------------------------------

SmoothObjective::SmoothObjective(Definition def) : def_(std::move(def)) {
    if (def_.dimension == 0) throw std::invalid_argument("objective dimension must be positive");
    if (!def_.eval || !def_.grad) throw std::invalid_argument("objective needs eval and grad");
    if (!(def_.lipschitz > 0.0) || !std::isfinite(def_.lipschitz))
        throw std::invalid_argument("Lipschitz constant must be positive and finite");
    check_mu(def_.strong_convexity, def_.lipschitz, "strong_convexity");
    check_mu(def_.pl_constant, def_.lipschitz, "pl_constant");
    check_mu(def_.qg_constant, def_.lipschitz, "qg_constant");
    if (def_.minimizer && def_.minimizer->size() != def_.dimension)
        throw std::invalid_argument("minimizer dimension mismatch");
}

Vector SmoothObjective::gradient(ConstPoint x) const {
    Vector g(def_.dimension);
    def_.grad(x, g);
    return g;
}

double SmoothObjective::gap(ConstPoint x) const {
    if (!def_.min_value) throw std::logic_error("objective '" + def_.name + "' has no known minimum");
    if (def_.gap) return def_.gap(x);
    return def_.eval(x) - *def_.min_value;
}

// ---------------------------------------------------------------------------

ProxTerm::ProxTerm(std::string name, EvalFn eval, ProxFn prox)
    : name_(std::move(name)), eval_(std::move(eval)), prox_(std::move(prox)) {
    if (!eval_ || !prox_) throw std::invalid_argument("prox term needs eval and prox");
}

ProxTerm ProxTerm::zero() {
    ProxTerm t("zero", [](ConstPoint) { return 0.0; },
               [](ConstPoint z, double, std::span<double> out) { std::copy(z.begin(), z.end(), out.begin()); });
    t.is_zero_ = true;
    return t;
}

ProxTerm ProxTerm::l1(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("l1 weight must be non-negative");
    ProxTerm t(
        "l1", [lambda](ConstPoint x) { return lambda * kernels::abs_sum(x); },
        [lambda](ConstPoint z, double s, std::span<double> out) { kernels::soft_threshold(z, s * lambda, out); });
    t.weight_ = lambda;
    t.is_zero_ = lambda == 0.0;
    return t;
}

void ProxTerm::prox(ConstPoint z, double s, std::span<double> out) const {
    if (!(s > 0.0)) throw std::invalid_argument("prox step must be positive");
    prox_(z, s, out);
}

Vector ProxTerm::prox(ConstPoint z, double s) const {
    Vector out(z.size());
    prox(z, s, out);
    return out;
}

// ---------------------------------------------------------------------------

CompositeObjective::CompositeObjective(SmoothObjective smooth, ProxTerm prox_term)
    : smooth_(std::move(smooth)), prox_term_(std::move(prox_term)) {
    if (prox_term_.is_zero() && smooth_.has_solution()) {
        minimizer_ = smooth_.minimizer();
        min_value_ = smooth_.min_value();
        if (smooth_.qg_constant()) qg_constant_ = smooth_.qg_constant();
        gap_ = [s = smooth_](ConstPoint x) { return s.gap(x); };
    }
}

double CompositeObjective::gap(ConstPoint x) const {
    if (!min_value_) throw std::logic_error("composite objective has no known minimum");
    if (gap_) return gap_(x);
    return value(x) - *min_value_;
}

CompositeObjective CompositeObjective::with_solution(Vector xstar, double fstar, GapFn gap_fn) const {
    if (xstar.size() != dimension()) throw std::invalid_argument("minimizer dimension mismatch");
    CompositeObjective out = *this;
    out.minimizer_ = std::move(xstar);
    out.min_value_ = fstar;
    out.gap_ = std::move(gap_fn);
    return out;
}

CompositeObjective CompositeObjective::with_qg_constant(double mu) const {
    check_mu(mu, lipschitz(), "qg_constant");
    CompositeObjective out = *this;
    out.qg_constant_ = mu;
    return out;
}

// ---------------------------------------------------------------------------

DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed) {
    if (seed == 0) return DenseMatrix::identity(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) g(r, c) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (Eigen::Index c = 0; c < q.cols(); ++c)
        if (r(c, c) < 0.0) q.col(c) *= -1.0;
    return from_eigen(q);
}

Vector geometric_spectrum(std::size_t d, double q, double L) {
    if (d < 2) throw std::invalid_argument("geometric spectrum needs d >= 2");
    if (!(q > 0.0 && q <= 1.0) || !(L > 0.0)) throw std::invalid_argument("need 0 < q <= 1 and L > 0");
    Vector s(d);
    for (std::size_t i = 0; i < d; ++i)
        s[i] = L * std::pow(q, 1.0 - static_cast<double>(i) / static_cast<double>(d - 1));
    s.front() = q * L;
    s.back() = L;
    return s;
}

SmoothObjective quadratic_problem(std::span<const double> spectrum, std::span<const double> b,
                                  std::uint64_t seed) {
    const std::size_t d = spectrum.size();
    if (d == 0) throw std::invalid_argument("empty spectrum");
    if (b.size() != d)
        throw std::invalid_argument("dimension mismatch: spectrum has " + std::to_string(d) +
                                    " entries, b has " + std::to_string(b.size()));
    for (double s : spectrum)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("spectrum entries must be positive, got " + std::to_string(s));

    const DenseMatrix u = random_orthogonal(d, seed);
    const auto ue = as_eigen(u);
    Eigen::VectorXd diag(d);
    for (std::size_t i = 0; i < d; ++i) diag[static_cast<Eigen::Index>(i)] = spectrum[i];
    Eigen::MatrixXd qe = ue.transpose() * diag.asDiagonal() * ue;
    qe = 0.5 * (qe + qe.transpose()).eval();

    Eigen::VectorXd be(d);
    for (std::size_t i = 0; i < d; ++i) be[static_cast<Eigen::Index>(i)] = b[i];
    Eigen::LDLT<Eigen::MatrixXd> ldlt(qe);
    Eigen::VectorXd xe = ldlt.solve(be);
    for (int sweep = 0; sweep < 4; ++sweep) xe += ldlt.solve(be - qe * xe);
    const double residual = (qe * xe - be).norm();
    if (residual > 1e-12 * std::max(1.0, be.norm()))
        throw std::runtime_error("quadratic minimizer solve did not reach residual 1e-12");

    auto q = std::make_shared<const DenseMatrix>(from_eigen(qe));
    auto bv = std::make_shared<const Vector>(b.begin(), b.end());
    Vector xstar(xe.data(), xe.data() + d);
    auto xs = std::make_shared<const Vector>(xstar);
    // Gradient residual at x*, kept so the gap stays exact for an inexact x*.
    auto gstar = std::make_shared<Vector>(d);
    kernels::gemv(q->data, d, d, *xs, *gstar);
    for (std::size_t i = 0; i < d; ++i) (*gstar)[i] -= (*bv)[i];

    const double mu = *std::min_element(spectrum.begin(), spectrum.end());
    const double L = *std::max_element(spectrum.begin(), spectrum.end());

    SmoothObjective::Definition def;
    def.name = "quadratic";
    def.dimension = d;
    def.eval = [q, bv, d](ConstPoint x) {
        Vector qx(d);
        kernels::gemv(q->data, d, d, x, qx);
        return 0.5 * kernels::dot(x, qx) - kernels::dot(*bv, x);
    };
    def.grad = [q, bv, d](ConstPoint x, std::span<double> out) {
        kernels::gemv(q->data, d, d, x, out);
        kernels::axpy(-1.0, *bv, out);
    };
    def.lipschitz = L;
    def.strong_convexity = mu;
    def.pl_constant = mu;
    def.qg_constant = mu;
    def.minimizer = xstar;
    def.min_value = -0.5 * kernels::dot(*bv, xstar);
    def.gap = [q, gstar, xs](ConstPoint x) { return quadratic_form_gap(*q, *gstar, x, *xs); };
    return SmoothObjective(std::move(def));
}

namespace {

SmoothObjective pl_sine_with(std::optional<double> pl) {
    SmoothObjective::Definition def;
    def.name = "pl_sine";
    def.dimension = 1;
    def.eval = [](ConstPoint x) {
        const double s = std::sin(x[0]);
        return x[0] * x[0] + 3.0 * s * s;
    };
    def.grad = [](ConstPoint x, std::span<double> out) { out[0] = 2.0 * x[0] + 3.0 * std::sin(2.0 * x[0]); };
    def.lipschitz = 8.0;
    def.pl_constant = pl;
    def.minimizer = Vector{0.0};
    def.min_value = 0.0;
    return SmoothObjective(std::move(def));
}

}  // namespace

SmoothObjective pl_sine_problem() {
    static const double mu = estimate_pl_constant(pl_sine_with(std::nullopt), -20.0, 20.0, 20001);
    return pl_sine_with(mu);
}

DenseMatrix design_matrix(std::size_t rows, std::span<const double> spectrum, std::uint64_t seed) {
    const std::size_t d = spectrum.size();
    if (d == 0 || rows < d) throw std::invalid_argument("design matrix needs rows >= d >= 1");
    for (double s : spectrum)
        if (!(s > 0.0)) throw std::invalid_argument("spectrum entries must be positive");
    const DenseMatrix u = random_orthogonal(rows, seed);
    const DenseMatrix v = random_orthogonal(d, seed == 0 ? 0 : seed + 0x9e3779b97f4a7c15ULL);
    DenseMatrix a(rows, d);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += u(r, j) * std::sqrt(spectrum[j]) * v(c, j);
            a(r, c) = acc;
        }
    return a;
}

CompositeObjective lasso_problem(const DenseMatrix& a, std::span<const double> b, double lambda) {
    const std::size_t m = a.rows, d = a.cols;
    if (d == 0 || a.data.size() != m * d) throw std::invalid_argument("malformed design matrix");
    if (b.size() != m)
        throw std::invalid_argument("dimension mismatch: A has " + std::to_string(m) + " rows, b has " +
                                    std::to_string(b.size()));
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");

    const auto ae = as_eigen(a);
    Eigen::MatrixXd gram = ae.transpose() * ae;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double L = eig.eigenvalues().maxCoeff();
    const double mu = eig.eigenvalues().minCoeff();
    if (!(L > 0.0) || mu <= 1e-12 * L)
        throw std::invalid_argument("lasso design matrix is rank deficient: lambda_min(A^T A) = " +
                                    std::to_string(mu) + ", lambda_max = " + std::to_string(L));

    auto am = std::make_shared<const DenseMatrix>(a);
    auto bv = std::make_shared<const Vector>(b.begin(), b.end());
    auto g = std::make_shared<const DenseMatrix>(from_eigen(gram));

    SmoothObjective::Definition def;
    def.name = "lasso";
    def.dimension = d;
    def.eval = [am, bv](ConstPoint x) {
        Vector r(am->rows);
        kernels::gemv(am->data, am->rows, am->cols, x, r);
        kernels::axpy(-1.0, *bv, r);
        return 0.5 * kernels::norm_sq(r);
    };
    def.grad = [am, bv](ConstPoint x, std::span<double> out) {
        Vector r(am->rows);
        kernels::gemv(am->data, am->rows, am->cols, x, r);
        kernels::axpy(-1.0, *bv, r);
        kernels::gemv_t(am->data, am->rows, am->cols, r, out);
    };
    def.lipschitz = L;
    def.strong_convexity = mu;
    def.pl_constant = mu;
    def.qg_constant = mu;

    CompositeObjective base(SmoothObjective(std::move(def)), ProxTerm::l1(lambda));
    const ReferenceSolution ref = reference_minimizer(base);
    if (!ref.converged) return base.with_qg_constant(mu);

    auto xs = std::make_shared<const Vector>(ref.x);
    auto gstar = std::make_shared<const Vector>(base.smooth().gradient(ref.x));
    const double l1star = lambda * kernels::abs_sum(ref.x);
    auto gap = [g, xs, gstar, lambda, l1star](ConstPoint x) {
        return quadratic_form_gap(*g, *gstar, x, *xs) + (lambda * kernels::abs_sum(x) - l1star);
    };
    return base.with_solution(ref.x, ref.value, gap).with_qg_constant(mu);
}

double lasso_lambda_for_sparsity(const DenseMatrix& a, std::span<const double> b, double zero_fraction) {
    if (!(zero_fraction > 0.0 && zero_fraction <= 1.0))
        throw std::invalid_argument("zero fraction must be in (0, 1]");
    Vector atb(a.cols);
    kernels::gemv_t(a.data, a.rows, a.cols, b, atb);
    double lambda_max = 0.0;
    for (double v : atb) lambda_max = std::max(lambda_max, std::abs(v));
    if (lambda_max == 0.0) return 1.0;

    auto zeros_at = [&](double lambda) {
        const CompositeObjective obj = lasso_problem(a, b, lambda);
        if (!obj.minimizer()) throw std::runtime_error("reference oracle did not converge while tuning lambda");
        const auto& x = *obj.minimizer();
        const auto z = std::count(x.begin(), x.end(), 0.0);
        return static_cast<double>(z) / static_cast<double>(x.size());
    };

    double accepted = lambda_max;
    for (double lambda = 0.8 * lambda_max; lambda > 1e-8 * lambda_max; lambda *= 0.8) {
        if (zeros_at(lambda) < zero_fraction) break;
        accepted = lambda;
    }
    return accepted;
}

// ---------------------------------------------------------------------------

Vector grad_mapping(const CompositeObjective& obj, ConstPoint y, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("gradient mapping step must be positive");
    const std::size_t d = obj.dimension();
    Vector g = obj.smooth().gradient(y);
    if (obj.prox_term().is_zero()) return g;
    Vector z(d), p(d);
    kernels::axpby(1.0, y, -s, g, z);
    obj.prox_term().prox(z, s, p);
    for (std::size_t i = 0; i < d; ++i) g[i] = (y[i] - p[i]) / s;
    return g;
}

ReferenceSolution reference_minimizer(const CompositeObjective& obj, double tol, std::size_t max_iterations) {
    if (!(tol > 0.0)) throw std::invalid_argument("reference tolerance must be positive");
    const std::size_t d = obj.dimension();
    const double s = 1.0 / obj.lipschitz();
    ReferenceSolution out;
    out.x.assign(d, 0.0);
    Vector grad(d), z(d), next(d);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        obj.smooth().gradient(out.x, grad);
        kernels::axpby(1.0, out.x, -s, grad, z);
        obj.prox_term().prox(z, s, next);
        double step_sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = out.x[i] - next[i];
            step_sq += diff * diff;
        }
        out.residual = std::sqrt(step_sq) / s;
        out.iterations = it;
        if (out.residual <= tol) {
            out.converged = true;
            break;
        }
        out.x.swap(next);
    }
    if (!out.converged) {
        out.iterations = max_iterations;
        out.residual = kernels::norm(grad_mapping(obj, out.x, s));
    }
    out.value = obj.value(out.x);
    return out;
}

double finite_diff_gradient_check(const SmoothObjective& obj, std::span<const Vector> points, double eps) {
    if (!(eps >= 1e-8 && eps <= 1e-4)) throw std::invalid_argument("eps must lie in [1e-8, 1e-4]");
    const std::size_t d = obj.dimension();
    double worst = 0.0;
    Vector probe(d), fd(d);
    for (const Vector& p : points) {
        if (p.size() != d) throw std::invalid_argument("sample point dimension mismatch");
        const Vector g = obj.gradient(p);
        probe = p;
        for (std::size_t i = 0; i < d; ++i) {
            const double step = eps * std::max(1.0, std::abs(p[i]));
            probe[i] = p[i] + step;
            const double up = obj.value(probe);
            probe[i] = p[i] - step;
            const double down = obj.value(probe);
            probe[i] = p[i];
            fd[i] = (up - down) / (2.0 * step);
        }
        double err = 0.0;
        for (std::size_t i = 0; i < d; ++i) err += (g[i] - fd[i]) * (g[i] - fd[i]);
        worst = std::max(worst, std::sqrt(err) / std::max(1.0, kernels::norm(g)));
    }
    return worst;
}

namespace {

constexpr double kPlGapFloor = 1e-12;

double pl_ratio(const SmoothObjective& obj, ConstPoint x) {
    const double gap = obj.gap(x);
    if (!(gap >= kPlGapFloor)) return std::numeric_limits<double>::infinity();
    const Vector g = obj.gradient(x);
    return kernels::norm_sq(g) / (2.0 * gap);
}

}  // namespace

double estimate_pl_constant(const SmoothObjective& obj, double lo, double hi, std::size_t n) {
    if (obj.dimension() != 1) throw std::invalid_argument("grid PL estimate needs a 1-D objective");
    if (!obj.min_value()) throw std::invalid_argument("PL estimate needs a known minimum value");
    if (!(hi > lo) || n < 2) throw std::invalid_argument("PL grid needs hi > lo and n >= 2");

    const double dx = (hi - lo) / static_cast<double>(n - 1);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + dx * static_cast<double>(i);
        const double r = pl_ratio(obj, std::span<const double>(&x, 1));
        if (r < best) {
            best = r;
            best_i = i;
        }
    }
    if (!std::isfinite(best))
        throw std::domain_error("PL constant undefined: every grid point is within 1e-12 of f*");

    // Golden-section refinement inside the neighbouring grid cells.
    auto ratio_at = [&](double x) { return pl_ratio(obj, std::span<const double>(&x, 1)); };
    const double center = lo + dx * static_cast<double>(best_i);
    double a = std::max(lo, center - dx), b = std::min(hi, center + dx);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), e = a + inv_phi * (b - a);
    double fc = ratio_at(c), fe = ratio_at(e);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(center)); ++it) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = ratio_at(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = ratio_at(e);
        }
    }
    return std::min({best, fc, fe});
}

double estimate_pl_constant(const SmoothObjective& obj, std::span<const Vector> points) {
    if (!obj.min_value()) throw std::invalid_argument("PL estimate needs a known minimum value");
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& p : points) best = std::min(best, pl_ratio(obj, p));
    if (!std::isfinite(best))
        throw std::domain_error("PL constant undefined: every sample is within 1e-12 of f*");
    return best;
}

}  // namespace hessdamp
