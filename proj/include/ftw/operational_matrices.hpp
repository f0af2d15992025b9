#pragma once

#include "ftw/numeric_kernel.hpp"
#include "ftw/wavelet_basis.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace ftw {

/// Gram matrix int_0^1 Psi Psi^T from closed-form block moments.
DenseMatrix gram_matrix(const WaveletParams& params);

/// Same matrix by breakpoint-aware quadrature; used only as a cross-check.
DenseMatrix gram_matrix_quadrature(const WaveletParams& params);

/// T[i](j, l) = int_0^1 psi_i psi_j psi_l from the same block moments.
std::vector<DenseMatrix> triple_product_tensor(const WaveletParams& params);

/// Immutable bundle of everything that depends only on (k, M, mu, basis).
///
/// Holds the quadrature rule used for projections together with the basis
/// sampled at its nodes, so repeated projections cost one pass over f.
class OperationalMatrices {
public:
    explicit OperationalMatrices(const WaveletParams& params);

    const WaveletParams& params() const noexcept { return params_; }
    const DenseMatrix& D() const noexcept { return D_; }
    const DenseMatrix& P1() const noexcept { return P1_; }
    const DenseMatrix& Pmu() const noexcept { return Pmu_; }
    const std::vector<DenseMatrix>& triple() const noexcept { return triple_; }
    const DenseSolver& d_solver() const noexcept { return *d_solver_; }
    double cond_D() const noexcept { return d_solver_->condition_estimate(); }

    /// Projection rule: 32-point Gauss-Legendre per panel, split at every
    /// block boundary and graded toward each block's left end.
    const QuadratureRule& rule() const noexcept { return rule_; }

    /// Basis sampled at rule().nodes, one column per node.
    const DenseMatrix& basis_at_nodes() const noexcept { return basis_nodes_; }

    /// int_0^1 f Psi.
    Vector moments(const RealFunction& f) const;

    /// Least-squares coefficients D^{-1} int_0^1 f Psi.
    Vector project(const RealFunction& f) const;

    /// c^T Psi(zeta).
    double evaluate(const Vector& coeffs, double zeta) const;

    /// (sum_j c_j T[j]) D^{-1}; its transpose maps the coefficients of g to
    /// those of the product (c^T Psi) g.
    DenseMatrix product_matrix(const Vector& c) const;

    /// sum_j c_j T[j].
    DenseMatrix weighted_triple(const Vector& c) const;

private:
    WaveletParams params_;
    QuadratureRule rule_;
    DenseMatrix basis_nodes_;
    DenseMatrix D_;
    std::shared_ptr<const DenseSolver> d_solver_;
    std::vector<DenseMatrix> triple_;
    DenseMatrix P1_;
    DenseMatrix Pmu_;
};

/// Coefficients of f with respect to the bundle's basis.
Vector project(const RealFunction& f, const OperationalMatrices& mats);

/// First-order integration matrix: row i projects int_0^zeta psi_i.
DenseMatrix integration_matrix_first_order(const OperationalMatrices& mats);

/// Order-mu integration matrix: row i projects the Riemann-Liouville integral
/// of psi_i, with the kernel (zeta - tau)^{mu-1} folded into Gauss-Jacobi rules.
DenseMatrix integration_matrix_fractional(const OperationalMatrices& mats);
DenseMatrix integration_matrix_fractional(const OperationalMatrices& mats, double order);

/// Pointwise Riemann-Liouville integral of order `order` of psi_i.
double fractional_integral_of_wavelet(const WaveletParams& params, int flat_index, double order, double zeta);

DenseMatrix product_matrix(const Vector& c, const OperationalMatrices& mats);

/// Matrix as CSV, one row per line, 9 significant digits.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);

}  // namespace ftw
