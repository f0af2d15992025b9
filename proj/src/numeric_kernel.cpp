#include "ftw/numeric_kernel.hpp"

#include "ftw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ftw {

namespace {

constexpr int kMaxNewtonIterations = 100;

struct ReferenceRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Legendre nodes on [-1, 1] by Newton iteration on the three-term recurrence.
ReferenceRule legendre_reference(int n) {
    ReferenceRule rule;
    rule.x.assign(static_cast<std::size_t>(n), 0.0);
    rule.w.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Newton from cos(...) yields descending nodes; store ascending.
        rule.x[static_cast<std::size_t>(i)] = -x;
        rule.x[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.w[static_cast<std::size_t>(i)] = w;
        rule.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        rule.x[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

struct JacobiValues {
    double pn;
    double pnm1;
};

JacobiValues jacobi_eval(int n, double alpha, double beta, double x) {
    double p0 = 1.0;
    if (n == 0) {
        return {p0, 0.0};
    }
    double p1 = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + alpha + beta;
        const double a1 = 2.0 * k * (k + alpha + beta) * (s - 2.0);
        const double a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        const double a3 = (s - 2.0) * (s - 1.0) * s;
        const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
        const double pk = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = pk;
    }
    return {p1, p0};
}

double jacobi_derivative(int n, double alpha, double beta, double x, const JacobiValues& v) {
    const double s = 2.0 * n + alpha + beta;
    return (n * ((alpha - beta) - s * x) * v.pn + 2.0 * (n + alpha) * (n + beta) * v.pnm1) /
           (s * (1.0 - x * x));
}

// Gauss-Jacobi on [-1, 1] with weight (1-x)^alpha (1+x)^beta.
// Golub-Welsch for starting nodes, then Newton polish and closed-form weights.
ReferenceRule jacobi_reference(int n, double alpha, double beta) {
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    const double ab = alpha + beta;
    diag(0) = (beta - alpha) / (ab + 2.0);
    for (int j = 1; j < n; ++j) {
        const double s = 2.0 * j + ab;
        diag(j) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        const double num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        sub(j - 1) = std::sqrt(num / den);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& start = eig.eigenvalues();

    const double log_c = (ab + 1.0) * std::log(2.0) + std::lgamma(n + alpha + 1.0) +
                         std::lgamma(n + beta + 1.0) - std::lgamma(n + ab + 1.0) -
                         std::lgamma(n + 1.0);
    const double c = std::exp(log_c);

    ReferenceRule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = start(i);
        for (int iter = 0; iter < 8; ++iter) {
            const JacobiValues v = jacobi_eval(n, alpha, beta, x);
            const double dp = jacobi_derivative(n, alpha, beta, x, v);
            const double dx = v.pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const JacobiValues v = jacobi_eval(n, alpha, beta, x);
        const double dp = jacobi_derivative(n, alpha, beta, x, v);
        rule.x[static_cast<std::size_t>(i)] = x;
        rule.w[static_cast<std::size_t>(i)] = c / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

void append_mapped(const ReferenceRule& ref, double a, double b, QuadratureRule& out) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < ref.x.size(); ++i) {
        out.nodes.push_back(mid + half * ref.x[i]);
        out.weights.push_back(half * ref.w[i]);
    }
}

// Narrower panels next to a nonzero endpoint would map nodes onto the endpoint itself.
constexpr double kMinGradedWidth = 1e-12;

void append_graded_left(const ReferenceRule& ref, double a, double b, const CompositeOptions& opt,
                        QuadratureRule& out) {
    const double h = b - a;
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(opt.grading_levels) + 2);
    edges.push_back(a);
    for (int j = opt.grading_levels; j >= 1; --j) {
        const double width = h * std::pow(opt.grading_ratio, j);
        if (width >= kMinGradedWidth * std::abs(a)) {
            edges.push_back(a + width);
        }
    }
    edges.push_back(b);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] > edges[i]) {
            append_mapped(ref, edges[i], edges[i + 1], out);
        }
    }
}

void append_graded_right(const ReferenceRule& ref, double a, double b, const CompositeOptions& opt,
                         QuadratureRule& out) {
    const double h = b - a;
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(opt.grading_levels) + 2);
    edges.push_back(a);
    for (int j = 1; j <= opt.grading_levels; ++j) {
        const double width = h * std::pow(opt.grading_ratio, j);
        if (width >= kMinGradedWidth * std::abs(b)) {
            edges.push_back(b - width);
        }
    }
    edges.push_back(b);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i + 1] > edges[i]) {
            append_mapped(ref, edges[i], edges[i + 1], out);
        }
    }
}

}  // namespace

double gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError("gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) {
        throw DomainError("gauss_legendre: need n >= 1");
    }
    if (!(a < b)) {
        throw DomainError("gauss_legendre: need a < b");
    }
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.reserve(static_cast<std::size_t>(n));
    rule.weights.reserve(static_cast<std::size_t>(n));
    append_mapped(legendre_reference(n), a, b, rule);
    return rule;
}

QuadratureRule gauss_jacobi_right(int n, double a, double b, double exponent) {
    if (n < 1) {
        throw DomainError("gauss_jacobi_right: need n >= 1");
    }
    if (!(a < b)) {
        throw DomainError("gauss_jacobi_right: need a < b");
    }
    if (!(exponent > -1.0) || !std::isfinite(exponent)) {
        throw DomainError("gauss_jacobi_right: exponent must exceed -1");
    }
    const ReferenceRule ref = jacobi_reference(n, exponent, 0.0);
    const double half = 0.5 * (b - a);
    const double scale = std::pow(half, exponent + 1.0);
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.reserve(static_cast<std::size_t>(n));
    rule.weights.reserve(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < ref.x.size(); ++i) {
        rule.nodes.push_back(a + half * (ref.x[i] + 1.0));
        rule.weights.push_back(scale * ref.w[i]);
    }
    return rule;
}

QuadratureRule composite_rule(std::span<const double> breakpoints, const CompositeOptions& options) {
    if (breakpoints.size() < 2) {
        throw DomainError("composite_rule: need at least two breakpoints");
    }
    if (options.points_per_segment < 1) {
        throw DomainError("composite_rule: need at least one point per segment");
    }
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] < breakpoints[i]) {
            throw DomainError("composite_rule: breakpoints must be sorted");
        }
    }
    const ReferenceRule ref = legendre_reference(options.points_per_segment);
    QuadratureRule rule;
    rule.order = options.points_per_segment;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a)) {
            continue;
        }
        switch (options.grading) {
            case Grading::None:
                append_mapped(ref, a, b, rule);
                break;
            case Grading::Left:
                append_graded_left(ref, a, b, options, rule);
                break;
            case Grading::Both: {
                const double mid = 0.5 * (a + b);
                append_graded_left(ref, a, mid, options, rule);
                append_graded_right(ref, mid, b, options, rule);
                break;
            }
        }
    }
    return rule;
}

double integrate_piecewise(const RealFunction& f, std::span<const double> breakpoints,
                           const CompositeOptions& options) {
    if (breakpoints.size() < 2 || breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
        throw DomainError("integrate_piecewise: breakpoints must include 0 and 1");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (breakpoints[i] < 0.0 || breakpoints[i] > 1.0) {
            throw DomainError("integrate_piecewise: breakpoint outside [0, 1]");
        }
        if (i > 0 && breakpoints[i] < breakpoints[i - 1]) {
            throw DomainError("integrate_piecewise: breakpoints must be sorted");
        }
    }
    return composite_rule(breakpoints, options).integrate(f);
}

double integrate_piecewise(const RealFunction& f, std::span<const double> breakpoints,
                           int points_per_segment) {
    CompositeOptions options;
    options.points_per_segment = points_per_segment;
    return integrate_piecewise(f, breakpoints, options);
}

double norm_inf(const DenseMatrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

DenseSolver::DenseSolver(const DenseMatrix& a, MatrixKind kind) : size_(a.rows()) {
    if (a.rows() != a.cols()) {
        throw DomainError("DenseSolver: matrix must be square");
    }
    if (!a.allFinite()) {
        throw DomainError("DenseSolver: matrix has non-finite entries");
    }
    const double scale = norm_inf(a);
    const double threshold = 1e-14 * scale;

    if (kind == MatrixKind::SymmetricPositiveDefinite) {
        Eigen::LLT<DenseMatrix> llt(a);
        if (llt.info() == Eigen::Success) {
            const double min_pivot = llt.matrixLLT().diagonal().cwiseAbs2().minCoeff();
            if (min_pivot > threshold) {
                const double rcond = llt.rcond();
                condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
                factor_ = std::move(llt);
                return;
            }
        }
    }

    Eigen::PartialPivLU<DenseMatrix> lu(a);
    const double min_pivot = a.rows() > 0 ? lu.matrixLU().diagonal().cwiseAbs().minCoeff() : 1.0;
    if (!(min_pivot > threshold)) {
        throw SingularMatrixError("matrix is numerically singular (pivot " + std::to_string(min_pivot) +
                                      ")",
                                  min_pivot);
    }
    const double rcond = lu.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    factor_ = std::move(lu);
}

Vector DenseSolver::solve(const Vector& rhs) const {
    if (rhs.size() != size_) {
        throw DomainError("DenseSolver::solve: dimension mismatch");
    }
    return std::visit([&](const auto& f) -> Vector { return f.solve(rhs); }, factor_);
}

DenseMatrix DenseSolver::solve(const DenseMatrix& rhs) const {
    if (rhs.rows() != size_) {
        throw DomainError("DenseSolver::solve: dimension mismatch");
    }
    return std::visit([&](const auto& f) -> DenseMatrix { return f.solve(rhs); }, factor_);
}

Vector solve_linear(const DenseMatrix& a, const Vector& b) {
    if (a.rows() != b.size()) {
        throw DomainError("solve_linear: dimension mismatch");
    }
    return DenseSolver(a).solve(b);
}

}  // namespace ftw
