#pragma once

// Objective oracles: smooth objectives with their regularity constants,
// proximable terms, composite objectives F = f + g, built-in test problems
// and the independent numerical validators used to certify them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hessdamp {

using Vector = std::vector<double>;
using ConstPoint = std::span<const double>;

// Row-major dense matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vector data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static DenseMatrix identity(std::size_t n);
};

/// A differentiable objective f together with the constants the convergence
/// theory needs. Immutable once constructed.
class SmoothObjective {
public:
    using EvalFn = std::function<double(ConstPoint)>;
    using GradFn = std::function<void(ConstPoint, std::span<double>)>;

    struct Definition {
        std::string name;
        std::size_t dimension = 0;
        EvalFn eval;
        GradFn grad;
        double lipschitz = 0.0;
        std::optional<double> strong_convexity;
        std::optional<double> pl_constant;
        std::optional<double> qg_constant;
        std::optional<Vector> minimizer;
        std::optional<double> min_value;
        // Optional cancellation-free evaluation of f(x) - f*. When empty,
        // gap() falls back to eval(x) - min_value.
        EvalFn gap;
    };

    // Throws std::invalid_argument on a malformed definition (missing
    // callbacks, L <= 0, a mu-type constant outside (0, L], or a minimizer of
    // the wrong dimension).
    explicit SmoothObjective(Definition def);

    const std::string& name() const noexcept { return def_.name; }
    std::size_t dimension() const noexcept { return def_.dimension; }
    double lipschitz() const noexcept { return def_.lipschitz; }
    const std::optional<double>& strong_convexity() const noexcept { return def_.strong_convexity; }
    const std::optional<double>& pl_constant() const noexcept { return def_.pl_constant; }
    const std::optional<double>& qg_constant() const noexcept { return def_.qg_constant; }
    const std::optional<Vector>& minimizer() const noexcept { return def_.minimizer; }
    const std::optional<double>& min_value() const noexcept { return def_.min_value; }
    bool has_solution() const noexcept { return def_.minimizer && def_.min_value; }

    double value(ConstPoint x) const { return def_.eval(x); }
    void gradient(ConstPoint x, std::span<double> out) const { def_.grad(x, out); }
    Vector gradient(ConstPoint x) const;

    // f(x) - f*. Requires min_value.
    double gap(ConstPoint x) const;

private:
    Definition def_;
};

/// A proper closed convex term g with a computable proximal map
/// prox_{s g}(z) = argmin_u g(u) + |u - z|^2 / (2 s).
class ProxTerm {
public:
    using EvalFn = std::function<double(ConstPoint)>;
    using ProxFn = std::function<void(ConstPoint, double, std::span<double>)>;

    ProxTerm(std::string name, EvalFn eval, ProxFn prox);

    static ProxTerm zero();
    // lambda * |x|_1 with the soft-threshold prox.
    static ProxTerm l1(double lambda);

    const std::string& name() const noexcept { return name_; }
    double weight() const noexcept { return weight_; }
    bool is_zero() const noexcept { return is_zero_; }

    double value(ConstPoint x) const { return eval_(x); }
    void prox(ConstPoint z, double s, std::span<double> out) const;
    Vector prox(ConstPoint z, double s) const;

private:
    std::string name_;
    EvalFn eval_;
    ProxFn prox_;
    double weight_ = 0.0;
    bool is_zero_ = false;
};

/// F = f + g.
class CompositeObjective {
public:
    using GapFn = std::function<double(ConstPoint)>;

    CompositeObjective(SmoothObjective smooth, ProxTerm prox_term);

    const SmoothObjective& smooth() const noexcept { return smooth_; }
    const ProxTerm& prox_term() const noexcept { return prox_term_; }
    std::size_t dimension() const noexcept { return smooth_.dimension(); }
    double lipschitz() const noexcept { return smooth_.lipschitz(); }

    const std::optional<Vector>& minimizer() const noexcept { return minimizer_; }
    const std::optional<double>& min_value() const noexcept { return min_value_; }
    const std::optional<double>& qg_constant() const noexcept { return qg_constant_; }
    bool has_solution() const noexcept { return minimizer_ && min_value_; }

    double value(ConstPoint x) const { return smooth_.value(x) + prox_term_.value(x); }
    // F(x) - F*. Requires min_value.
    double gap(ConstPoint x) const;

    // Returns a copy carrying the given solution. gap_fn may be empty.
    CompositeObjective with_solution(Vector xstar, double fstar, GapFn gap_fn = {}) const;
    CompositeObjective with_qg_constant(double mu) const;

private:
    SmoothObjective smooth_;
    ProxTerm prox_term_;
    std::optional<Vector> minimizer_;
    std::optional<double> min_value_;
    std::optional<double> qg_constant_;
    GapFn gap_;
};

// ---------------------------------------------------------------------------
// Built-in problems

// Seeded random orthogonal matrix; seed 0 yields the identity.
DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed);

// f(x) = 1/2 x^T Q x - b^T x with Q = U^T diag(spectrum) U, U = random_orthogonal(d, seed).
SmoothObjective quadratic_problem(std::span<const double> spectrum, std::span<const double> b,
                                  std::uint64_t seed);

// Geometric spectrum of length d from q*L to L (d >= 2).
Vector geometric_spectrum(std::size_t d, double q, double L);

// f(x) = x^2 + 3 sin^2(x), nonconvex but PL.
SmoothObjective pl_sine_problem();

// F(x) = 1/2 |Ax - b|^2 + lambda |x|_1. A must have full column rank.
CompositeObjective lasso_problem(const DenseMatrix& a, std::span<const double> b, double lambda);

// A (rows x d) with singular values sqrt(spectrum) so that A^T A has exactly
// the given spectrum.
DenseMatrix design_matrix(std::size_t rows, std::span<const double> spectrum, std::uint64_t seed);

// Smallest lambda on a geometric ladder whose lasso solution has at least
// zero_fraction of its coordinates exactly zero.
double lasso_lambda_for_sparsity(const DenseMatrix& a, std::span<const double> b,
                                 double zero_fraction);

// ---------------------------------------------------------------------------
// Validators

struct ReferenceSolution {
    Vector x;
    double value = 0.0;
    double residual = 0.0;  // |G_s(x)| with s = 1/L at exit
    std::size_t iterations = 0;
    bool converged = false;
};

inline constexpr double kReferenceTolerance = 1e-12;
inline constexpr std::size_t kReferenceIterationCap = 10'000'000;

// Plain proximal gradient (step 1/L, no momentum) from the origin until
// |G_s| <= tol. Independent of every accelerated solver.
ReferenceSolution reference_minimizer(const CompositeObjective& obj,
                                      double tol = kReferenceTolerance,
                                      std::size_t max_iterations = kReferenceIterationCap);

// G_s(y) = (y - prox_{s g}(y - s grad f(y))) / s.
Vector grad_mapping(const CompositeObjective& obj, ConstPoint y, double s);

// Max over points of |grad - fd| / max(1, |grad|) using central differences.
double finite_diff_gradient_check(const SmoothObjective& obj, std::span<const Vector> points,
                                  double eps = 1e-6);

// min |grad f|^2 / (2 (f - f*)) over a uniform 1-D grid, refined by a local
// golden-section search around the grid minimizer. Throws std::domain_error
// when every grid point sits within 1e-12 of f*.
double estimate_pl_constant(const SmoothObjective& obj, double lo, double hi, std::size_t n);

// Same ratio minimized over explicitly supplied points (any dimension).
double estimate_pl_constant(const SmoothObjective& obj, std::span<const Vector> points);

}  // namespace hessdamp
