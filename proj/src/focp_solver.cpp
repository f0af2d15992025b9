#include "ftw/focp_solver.hpp"

#include "ftw/errors.hpp"
#include "ftw/fractional_ops.hpp"

#include <cmath>
#include <string>

namespace ftw {

namespace {

constexpr int kValidationPoints = 100;
constexpr int kDefectPoints = 50;
constexpr int kRequadraturePoints = 20;

void check_sampled(const RealFunction& f, const std::string& field, bool required) {
    if (!f) {
        if (required) {
            throw ValidationError(field, "missing");
        }
        return;
    }
    for (int i = 0; i < kValidationPoints; ++i) {
        const double z = static_cast<double>(i) / (kValidationPoints - 1);
        if (!std::isfinite(f(z))) {
            throw ValidationError(field, "not finite at t=" + std::to_string(z));
        }
    }
}

double eval_or_zero(const RealFunction& f, double z) {
    return f ? f(z) : 0.0;
}

// int w Psi Psi^T on the bundle's projection rule.
DenseMatrix weighted_gram(const OperationalMatrices& mats, const RealFunction& w) {
    const auto& rule = mats.rule();
    const auto& psi = mats.basis_at_nodes();
    Vector weights(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q) {
        weights(static_cast<Eigen::Index>(q)) = rule.weights[q] * w(rule.nodes[q]);
    }
    DenseMatrix out = psi * weights.asDiagonal() * psi.transpose();
    return 0.5 * (out + out.transpose());
}

bool positive_definite(const DenseMatrix& m) {
    Eigen::LLT<DenseMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        return false;
    }
    return llt.matrixLLT().diagonal().cwiseAbs2().minCoeff() > 1e-14 * norm_inf(m);
}

// Requadrature of the cost on the reconstructed trajectories with a rule
// distinct from the projection rule.
double requadrature_cost(const FocpProblem& problem, const FocpSolution& sol, const OperationalMatrices& mats) {
    const auto bps = breakpoints(mats.params());
    CompositeOptions options;
    options.points_per_segment = kRequadraturePoints;
    options.grading = Grading::Left;
    const auto rule = composite_rule(bps, options);
    return 0.5 * rule.integrate([&](double z) {
        const auto [x, u] = reconstruct(sol, mats, z);
        const double ex = x - eval_or_zero(problem.track_x, z);
        const double eu = u - eval_or_zero(problem.track_u, z);
        return problem.p(z) * ex * ex + problem.q(z) * eu * eu;
    });
}

}  // namespace

void FocpProblem::validate() const {
    if (!(mu > 0.0 && mu <= 1.0)) {
        throw ValidationError("mu", "must lie in (0, 1], got " + std::to_string(mu));
    }
    if (!std::isfinite(x0)) {
        throw ValidationError("x0", "not finite");
    }
    check_sampled(p, "p", true);
    check_sampled(q, "q", true);
    check_sampled(a, "a", true);
    check_sampled(b, "b", true);
    check_sampled(track_x, "track_x", false);
    check_sampled(track_u, "track_u", false);
    for (int i = 0; i < kValidationPoints; ++i) {
        const double z = static_cast<double>(i) / (kValidationPoints - 1);
        if (p(z) < 0.0) {
            throw ValidationError("p", "must be nonnegative, p(" + std::to_string(z) + ") < 0");
        }
        if (!(q(z) > 0.0)) {
            throw ValidationError("q", "must be positive, q(" + std::to_string(z) + ") <= 0");
        }
        if (b(z) == 0.0) {
            throw ValidationError("b", "must be nonzero, b(" + std::to_string(z) + ") = 0");
        }
    }
}

DiscretizedFocp discretize(const FocpProblem& problem, const WaveletParams& params) {
    return discretize(problem, std::make_shared<const OperationalMatrices>(params));
}

DiscretizedFocp discretize(const FocpProblem& problem, std::shared_ptr<const OperationalMatrices> mats) {
    problem.validate();
    const auto& params = mats->params();
    if (problem.mu != params.mu) {
        throw ConfigError("problem order mu=" + std::to_string(problem.mu) + " differs from basis parameters mu=" +
                          std::to_string(params.mu));
    }
    DiscretizedFocp d;
    d.params = params;
    d.A_hat = mats->project(problem.a);
    d.B_hat = mats->project(problem.b);
    d.P_hat = mats->project(problem.p);
    d.Q_hat = mats->project(problem.q);
    d.d1 = mats->project([x0 = problem.x0](double) { return x0; });
    d.Wp = weighted_gram(*mats, problem.p);
    d.Wq = weighted_gram(*mats, problem.q);

    const int size = params.m_hat();
    d.fx = Vector::Zero(size);
    d.fu = Vector::Zero(size);
    d.Rx = Vector::Zero(size);
    d.Ru = Vector::Zero(size);
    if (problem.track_x) {
        d.fx = mats->moments([&](double z) { return problem.p(z) * problem.track_x(z); });
        d.Rx = mats->project(problem.track_x);
    }
    if (problem.track_u) {
        d.fu = mats->moments([&](double z) { return problem.q(z) * problem.track_u(z); });
        d.Ru = mats->project(problem.track_u);
    }
    if (problem.track_x || problem.track_u) {
        d.target_energy = 0.5 * mats->rule().integrate([&](double z) {
            const double rx = eval_or_zero(problem.track_x, z);
            const double ru = eval_or_zero(problem.track_u, z);
            return problem.p(z) * rx * rx + problem.q(z) * ru * ru;
        });
    }
    d.mats = std::move(mats);
    return d;
}

Vector state_from_coeffs(const Vector& C_hat, const Vector& d1, const OperationalMatrices& mats) {
    if (C_hat.size() != mats.params().m_hat() || d1.size() != mats.params().m_hat()) {
        throw DomainError("state_from_coeffs: coefficient vectors have wrong length");
    }
    return mats.Pmu().transpose() * C_hat + d1;
}

KktSystem assemble_kkt(const DiscretizedFocp& disc) {
    const auto& mats = *disc.mats;
    const int n = disc.params.m_hat();
    const DenseMatrix& P = mats.Pmu();

    KktSystem s;
    // State block: x = P^T C + d1, so 1/2 x^T Wp x - x^T fx expands in C.
    const DenseMatrix hx_raw = P * disc.Wp * P.transpose();
    const DenseMatrix hx = 0.5 * (hx_raw + hx_raw.transpose());
    s.H = DenseMatrix::Zero(2 * n, 2 * n);
    s.H.topLeftCorner(n, n) = hx;
    s.H.bottomRightCorner(n, n) = disc.Wq;
    s.g.resize(2 * n);
    s.g.head(n) = P * (disc.Wp * disc.d1 - disc.fx);
    s.g.tail(n) = -disc.fu;
    s.constant = 0.5 * disc.d1.dot(disc.Wp * disc.d1) - disc.d1.dot(disc.fx) + disc.target_energy;

    // Dynamics in coefficients: C - D^{-1} Ta x - D^{-1} Tb U = 0.
    const DenseMatrix a_op = mats.d_solver().solve(mats.weighted_triple(disc.A_hat));
    const DenseMatrix b_op = mats.d_solver().solve(mats.weighted_triple(disc.B_hat));
    s.G.resize(n, 2 * n);
    s.G.leftCols(n) = DenseMatrix::Identity(n, n) - a_op * P.transpose();
    s.G.rightCols(n) = -b_op;
    s.h = a_op * disc.d1;

    s.K = DenseMatrix::Zero(3 * n, 3 * n);
    s.K.topLeftCorner(2 * n, 2 * n) = s.H;
    s.K.topRightCorner(2 * n, n) = s.G.transpose();
    s.K.bottomLeftCorner(n, 2 * n) = s.G;
    s.rhs.resize(3 * n);
    s.rhs.head(2 * n) = -s.g;
    s.rhs.tail(n) = s.h;
    return s;
}

FocpSolution solve(const DiscretizedFocp& disc, const FocpProblem& problem) {
    const auto& mats = *disc.mats;
    const int n = disc.params.m_hat();
    const KktSystem kkt = assemble_kkt(disc);

    std::unique_ptr<DenseSolver> solver;
    try {
        solver = std::make_unique<DenseSolver>(kkt.K);
    } catch (const SingularMatrixError& e) {
        if (!positive_definite(disc.Wq)) {
            throw SingularMatrixError("KKT system singular: control weight block Wq is not positive definite "
                                      "(q must be positive)",
                                      e.pivot());
        }
        Eigen::ColPivHouseholderQR<DenseMatrix> qr(kkt.G);
        if (qr.rank() < kkt.G.rows()) {
            throw SingularMatrixError("KKT system singular: constraint Jacobian G is rank deficient", e.pivot());
        }
        throw SingularMatrixError("KKT system singular: full KKT matrix (Hessian singular on the constraint null "
                                  "space)",
                                  e.pivot());
    }
    const Vector sol = solver->solve(kkt.rhs);

    FocpSolution out;
    out.params = disc.params;
    out.C_hat = sol.head(n);
    out.U_hat = sol.segment(n, n);
    out.eta_star = sol.tail(n);
    out.X_hat = state_from_coeffs(out.C_hat, disc.d1, mats);
    out.kkt_condition = solver->condition_estimate();

    const Vector z = sol.head(2 * n);
    out.J_value = 0.5 * z.dot(kkt.H * z) + kkt.g.dot(z) + kkt.constant;
    out.J_requadrature = requadrature_cost(problem, out, mats);

    out.residuals.constraint = (kkt.G * z - kkt.h).cwiseAbs().maxCoeff();
    out.residuals.stationarity = (kkt.H * z + kkt.g + kkt.G.transpose() * out.eta_star).cwiseAbs().maxCoeff();
    out.residuals.cost_discrepancy = std::abs(out.J_value - out.J_requadrature);
    double defect = 0.0;
    for (int i = 0; i < kDefectPoints; ++i) {
        // Cell midpoints never land on a block boundary, where the jump term is infinite.
        const double zeta = (i + 0.5) / kDefectPoints;
        const auto [x, u] = reconstruct(out, mats, zeta);
        const double lhs = state_caputo(out, mats, zeta);
        defect = std::max(defect, std::abs(lhs - problem.a(zeta) * x - problem.b(zeta) * u));
    }
    out.residuals.dynamics_defect = defect;
    return out;
}

FocpSolution solve(const FocpProblem& problem, const WaveletParams& params) {
    return solve(discretize(problem, params), problem);
}

std::pair<double, double> reconstruct(const FocpSolution& solution, const OperationalMatrices& mats, double zeta) {
    const Vector psi = eval_basis(mats.params(), zeta).values;
    return {solution.X_hat.dot(psi), solution.U_hat.dot(psi)};
}

double chain_cost(const DiscretizedFocp& disc, const FocpSolution& solution) {
    const auto& mats = *disc.mats;
    const Vector c2 = solution.X_hat - disc.Rx;
    const Vector c3 = mats.product_matrix(c2).transpose() * c2;
    const Vector c5 = mats.product_matrix(c3).transpose() * disc.P_hat;
    const Vector u1 = solution.U_hat - disc.Ru;
    const Vector u3 = mats.product_matrix(u1).transpose() * u1;
    const Vector u5 = mats.product_matrix(u3).transpose() * disc.Q_hat;
    const Vector psi_integral = mats.moments([](double) { return 1.0; });
    return 0.5 * (c5 + u5).dot(psi_integral);
}

double state_caputo(const FocpSolution& solution, const OperationalMatrices& mats, double zeta) {
    const auto& params = mats.params();
    const Vector& c = solution.X_hat;
    const RealFunction x = [&](double t) { return c.dot(eval_basis(params, t).values); };
    const RealFunction dx = [&](double t) { return c.dot(eval_basis_derivative(params, t)); };
    const FracOrder order(params.mu);
    if (params.mu == 1.0) {
        return dx(zeta);
    }
    const auto bps = breakpoints(params);
    const std::vector<double> interior(bps.begin() + 1, bps.end() - 1);
    double value = caputo_derivative(x, dx, order, zeta, interior);
    for (const auto& jump : boundary_limits(params, c)) {
        if (jump.location < zeta) {
            value += (jump.right - jump.left) * std::pow(zeta - jump.location, -params.mu) / gamma(1.0 - params.mu);
        }
    }
    return value;
}

}  // namespace ftw
