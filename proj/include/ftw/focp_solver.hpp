#pragma once

#include "ftw/numeric_kernel.hpp"
#include "ftw/operational_matrices.hpp"
#include "ftw/wavelet_basis.hpp"

#include <memory>
#include <utility>

namespace ftw {

/// Linear-quadratic fractional optimal control problem on [0, 1]:
///
///   min 1/2 int_0^1 p (x - r_x)^2 + q (u - r_u)^2
///   s.t. D^mu x = a x + b u,  x(0) = x0.
///
/// Empty tracking targets mean zero, which gives the homogeneous cost.
struct FocpProblem {
    RealFunction p;
    RealFunction q;
    RealFunction a;
    RealFunction b;
    RealFunction track_x;
    RealFunction track_u;
    double x0 = 0.0;
    double mu = 1.0;

    /// Checks p >= 0, q > 0, b != 0 and finiteness on a 100-point grid, and
    /// 0 < mu <= 1. Throws ValidationError naming the offending field.
    void validate() const;
};

/// Everything the KKT assembly needs, in coefficient space.
struct DiscretizedFocp {
    WaveletParams params;
    std::shared_ptr<const OperationalMatrices> mats;
    Vector A_hat;
    Vector B_hat;
    Vector P_hat;
    Vector Q_hat;
    Vector d1;
    /// int p Psi Psi^T and int q Psi Psi^T.
    DenseMatrix Wp;
    DenseMatrix Wq;
    /// int p r_x Psi and int q r_u Psi.
    Vector fx;
    Vector fu;
    /// Projections of the tracking targets (zero when absent).
    Vector Rx;
    Vector Ru;
    /// 1/2 int p r_x^2 + q r_u^2.
    double target_energy = 0.0;
};

DiscretizedFocp discretize(const FocpProblem& problem, const WaveletParams& params);
DiscretizedFocp discretize(const FocpProblem& problem, std::shared_ptr<const OperationalMatrices> mats);

/// Coefficients of x = I^mu(C_hat^T Psi) + x0, i.e. (P^mu)^T C_hat + d1.
Vector state_from_coeffs(const Vector& C_hat, const Vector& d1, const OperationalMatrices& mats);

/// Equality-constrained QP in z = [C_hat; U_hat]:
///   min 1/2 z^T H z + g^T z + constant   s.t.  G z = h
/// and its KKT matrix K = [[H, G^T], [G, 0]] with right-hand side [-g; h].
struct KktSystem {
    DenseMatrix K;
    Vector rhs;
    DenseMatrix H;
    DenseMatrix G;
    Vector g;
    Vector h;
    double constant = 0.0;
};

KktSystem assemble_kkt(const DiscretizedFocp& disc);

struct Residuals {
    /// max |G z - h| over the coefficient constraints.
    double constraint = 0.0;
    /// max |H z + g + G^T eta|.
    double stationarity = 0.0;
    /// max over a 50-point grid of |D^mu x - a x - b u|, using the Caputo oracle.
    double dynamics_defect = 0.0;
    /// |J quadratic form - J by requadrature|.
    double cost_discrepancy = 0.0;
};

struct FocpSolution {
    WaveletParams params;
    Vector C_hat;
    Vector U_hat;
    Vector eta_star;
    /// Coefficients of x.
    Vector X_hat;
    double J_value = 0.0;
    double J_requadrature = 0.0;
    double kkt_condition = 0.0;
    Residuals residuals;
};

/// Solves the discretized problem. A singular KKT matrix raises
/// SingularMatrixError whose message names the block at fault.
FocpSolution solve(const DiscretizedFocp& disc, const FocpProblem& problem);
FocpSolution solve(const FocpProblem& problem, const WaveletParams& params);

/// (x(zeta), u(zeta)).
std::pair<double, double> reconstruct(const FocpSolution& solution, const OperationalMatrices& mats, double zeta);

/// Cost evaluated through nested product matrices: x^2 -> C3 -> p x^2 -> C5,
/// u^2 -> U3 -> q u^2 -> U5, J = 1/2 (C5 + U5)^T int Psi. Tracking targets
/// enter as shifts of the state and control coefficients.
double chain_cost(const DiscretizedFocp& disc, const FocpSolution& solution);

/// Caputo derivative of the reconstructed state at zeta in (0, 1], treating the
/// jumps of x at block boundaries as point masses of x'.
double state_caputo(const FocpSolution& solution, const OperationalMatrices& mats, double zeta);

}  // namespace ftw
