#pragma once

#include "ftw/focp_solver.hpp"
#include "ftw/wavelet_basis.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftw {

/// M / (m_hat! 2^{2 m_hat - 1}), evaluated in the log domain.
double lemma2_bound(double M_tilde, int m_hat);

/// L (M1 + M2) / (m_hat! 2^{2 m_hat - 1}).
double cost_gap_bound(double L, double M1, double M2, int m_hat);

/// Chebyshev interpolation bound applied on each block separately:
/// M h^M / (M! 2^{2M-1}) for degree M - 1 polynomials on blocks of width h.
double block_interpolation_bound(double M_tilde, int M, double width);

/// Smooth function on [0, 1] with derivatives of every order in closed form.
struct AnalyticFunction {
    std::string name;
    RealFunction value;
    /// (order, t) -> f^{(order)}(t).
    std::function<double(int, double)> derivative;
};

/// exp(t), cosh(sqrt2 t), sinh(sqrt2 t) and the mu = 1 optimal state of the
/// reference problem with p = q = 1, a = -1, b = 1, x0 = 1.
const std::vector<AnalyticFunction>& analytic_family();

/// max |f^{(order)}| on a 1001-point grid of [0, 1].
double derivative_sup(const AnalyticFunction& f, int order);

struct BoundReport {
    int m_hat = 0;
    double M_tilde = 0.0;
    double bound = 0.0;
    /// ||f - proj f||_2 on [0, 1].
    double observed = 0.0;
    bool satisfied = false;
};

/// Projects f onto the basis and compares the L2 error with lemma2_bound,
/// taking M_tilde from the closed-form m_hat-th derivative.
BoundReport check_lemma2(const AnalyticFunction& f, const WaveletParams& params);

/// Known solution of a problem, used for error columns of a sweep.
struct ExactSolution {
    RealFunction x;
    RealFunction u;
    /// Optional (order, t) -> x^{(order)}(t) for the bound column.
    std::function<double(int, double)> x_derivative;
};

struct SweepRow {
    WaveletParams params;
    double J = 0.0;
    std::optional<double> err_x_sup;
    std::optional<double> err_u_sup;
    std::optional<double> err_x_l2;
    std::optional<double> err_u_l2;
    std::optional<double> bound;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// J non-increasing (1e-9 slack) across consecutive rows sharing k, basis and mu.
    bool monotone_nested = true;
    /// Same test across every consecutive pair; reported only.
    bool monotone_all = true;
};

/// Solves the problem for each configuration in order. Configurations must
/// be sorted by m_hat; errors are filled when `exact` is given.
SweepResult convergence_sweep(const FocpProblem& problem, const std::vector<WaveletParams>& configs,
                              const std::optional<ExactSolution>& exact = std::nullopt);

/// Columns k, M, m_hat, mu, basis, J, err_x_sup, err_u_sup, bound; missing values are empty.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace ftw
