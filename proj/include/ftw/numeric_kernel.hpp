#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace ftw {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using RealFunction = std::function<double(double)>;

/// Gamma function for x > 0. Throws DomainError otherwise.
double gamma(double x);

/// Nodes and weights of a fixed quadrature rule on [a, b].
///
/// For weighted rules (Gauss-Jacobi) the weight function is folded into
/// `weights`, so `integrate(g)` approximates the weighted integral of g.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    template <class F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sum += weights[i] * f(nodes[i]);
        }
        return sum;
    }

    std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point Gauss-Jacobi rule for integrals of the form
///   int_a^b (b - t)^exponent g(t) dt,
/// exact for polynomial g of degree <= 2n - 1. Requires exponent > -1.
QuadratureRule gauss_jacobi_right(int n, double a, double b, double exponent);

/// Where a composite rule clusters extra panels.
///
/// Left grading resolves endpoint behaviour like (t - a)^gamma at the left end
/// of every segment; Both also resolves near-singular kernels at the right end.
enum class Grading { None, Left, Both };

struct CompositeOptions {
    int points_per_segment = 32;
    Grading grading = Grading::None;
    int grading_levels = 20;
    double grading_ratio = 0.15;
};

/// Composite Gauss-Legendre rule with a segment break at every breakpoint.
/// Breakpoints must be strictly increasing with at least two entries.
QuadratureRule composite_rule(std::span<const double> breakpoints, const CompositeOptions& options);

/// Composite Gauss-Legendre integral of f over [0, 1], split at every breakpoint.
/// Breakpoints must be sorted, lie in [0, 1], and include both 0 and 1.
double integrate_piecewise(const RealFunction& f, std::span<const double> breakpoints,
                           int points_per_segment);
double integrate_piecewise(const RealFunction& f, std::span<const double> breakpoints,
                           const CompositeOptions& options);

enum class MatrixKind { General, SymmetricPositiveDefinite };

/// Factor-once dense solver.
///
/// SPD-flagged matrices go through Cholesky first; if that fails (or a pivot
/// is tiny) the solver falls back to partial-pivoted LU. A pivot below
/// 1e-14 * ||A||_inf raises SingularMatrixError.
class DenseSolver {
public:
    explicit DenseSolver(const DenseMatrix& a, MatrixKind kind = MatrixKind::General);

    Vector solve(const Vector& rhs) const;
    DenseMatrix solve(const DenseMatrix& rhs) const;

    /// Reciprocal of the 1-norm reciprocal-condition estimate.
    double condition_estimate() const noexcept { return condition_; }
    bool used_cholesky() const noexcept { return std::holds_alternative<Eigen::LLT<DenseMatrix>>(factor_); }
    Eigen::Index size() const noexcept { return size_; }

private:
    Eigen::Index size_ = 0;
    std::variant<Eigen::LLT<DenseMatrix>, Eigen::PartialPivLU<DenseMatrix>> factor_;
    double condition_ = 0.0;
};

/// Solve A x = b with partial pivoting.
Vector solve_linear(const DenseMatrix& a, const Vector& b);

/// Infinity norm (max absolute row sum).
double norm_inf(const DenseMatrix& a);

}  // namespace ftw
