#include "ftw/operational_matrices.hpp"

#include "ftw/csv_format.hpp"
#include "ftw/errors.hpp"

#include <cmath>
#include <iostream>
#include <ostream>

namespace ftw {

namespace {

constexpr int kPointsPerPanel = 32;
constexpr double kConditionWarning = 1e12;

struct WaveletTerms {
    int n;
    int m;
    double lo;
    double hi;
    std::vector<MonomialTerm> terms;
};

std::vector<WaveletTerms> all_terms(const WaveletParams& params) {
    std::vector<WaveletTerms> out;
    out.reserve(static_cast<std::size_t>(params.m_hat()));
    for (int n = 1; n <= params.blocks(); ++n) {
        const auto [lo, hi] = support_interval(params, n);
        for (int m = 0; m < params.M; ++m) {
            out.push_back({n, m, lo, hi, monomial_expansion(params, n, m)});
        }
    }
    return out;
}

// moments[n-1][p] = int over block n of s^p dzeta, with s = 2^{k-1} zeta^alpha - n + 1
// the local coordinate. Block 1 is a single monomial. On later blocks the
// expanded monomial sums cancel badly, so the integral is taken in s instead:
// dzeta/ds = ((s + n - 1) / N)^{1/alpha - 1} / (alpha N) is analytic on [0, 1]
// with its nearest singularity at s = 1 - n <= -1, and Gauss-Legendre is
// exact to rounding there.
std::vector<std::vector<double>> local_power_moments(const WaveletParams& params, int max_power) {
    const double alpha = params.exponent();
    const double blocks = params.blocks();
    const auto rule = gauss_legendre(48, 0.0, 1.0);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(params.blocks()));
    for (int n = 1; n <= params.blocks(); ++n) {
        auto& k = out[static_cast<std::size_t>(n - 1)];
        k.resize(static_cast<std::size_t>(max_power) + 1);
        if (n == 1) {
            const double hi = support_interval(params, 1).second;
            for (int p = 0; p <= max_power; ++p) {
                k[static_cast<std::size_t>(p)] = hi / (alpha * p + 1.0);
            }
            continue;
        }
        std::vector<double> jac(rule.size());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            jac[q] = rule.weights[q] * std::pow((rule.nodes[q] + n - 1.0) / blocks, 1.0 / alpha - 1.0) /
                     (alpha * blocks);
        }
        for (int p = 0; p <= max_power; ++p) {
            double sum = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q) {
                sum += jac[q] * std::pow(rule.nodes[q], p);
            }
            k[static_cast<std::size_t>(p)] = sum;
        }
    }
    return out;
}

QuadratureRule projection_rule(const WaveletParams& params) {
    const auto bps = breakpoints(params);
    CompositeOptions options;
    options.points_per_segment = kPointsPerPanel;
    options.grading = Grading::Left;
    return composite_rule(bps, options);
}

// Riemann-Liouville integral of a single wavelet. The support [lo, hi) splits
// the integral into F(lo -> zeta) - F(hi -> zeta) with
//   F(a -> zeta) = int_a^zeta (zeta - tau)^{order-1} p(tau) dtau
// for p the wavelet's polynomial continued past its support.
class WaveletRlIntegrator {
public:
    WaveletRlIntegrator(const WaveletParams& params, double order)
        : params_(params),
          order_(order),
          inv_gamma_(1.0 / gamma(order)),
          jacobi_(gauss_jacobi_right(kPointsPerPanel, 0.0, 1.0, order - 1.0)),
          terms_(all_terms(params)) {}

    double operator()(int i, double zeta) const {
        const auto& w = terms_[static_cast<std::size_t>(i)];
        if (zeta <= w.lo) {
            return 0.0;
        }
        double value = from_start(w, zeta);
        if (zeta > w.hi) {
            value -= from(w, w.hi, zeta);
        }
        return value * inv_gamma_;
    }

private:
    double from_start(const WaveletTerms& w, double zeta) const {
        if (w.lo > 0.0) {
            return from(w, w.lo, zeta);
        }
        // int_0^zeta (zeta - tau)^{order-1} tau^e dtau = zeta^{e+order} B(e+1, order)
        double sum = 0.0;
        for (const auto& t : w.terms) {
            sum += t.coef * std::pow(zeta, t.power + order_) * gamma(t.power + 1.0) * gamma(order_) /
                   gamma(t.power + 1.0 + order_);
        }
        return sum;
    }

    double from(const WaveletTerms& w, double a, double zeta) const {
        const double h = zeta - a;
        const double scale = std::pow(h, order_);
        double sum = 0.0;
        for (std::size_t q = 0; q < jacobi_.size(); ++q) {
            sum += jacobi_.weights[q] * eval_wavelet_extension(params_, w.n, w.m, a + h * jacobi_.nodes[q]);
        }
        return scale * sum;
    }

    WaveletParams params_;
    double order_;
    double inv_gamma_;
    QuadratureRule jacobi_;
    std::vector<WaveletTerms> terms_;
};

}  // namespace

DenseMatrix gram_matrix(const WaveletParams& params) {
    const auto moments = local_power_moments(params, 2 * params.M - 2);
    const int size = params.m_hat();
    const double scale2 = params.blocks();
    DenseMatrix d = DenseMatrix::Zero(size, size);
    for (int n = 1; n <= params.blocks(); ++n) {
        const auto& k = moments[static_cast<std::size_t>(n - 1)];
        for (int a = 0; a < params.M; ++a) {
            for (int b = 0; b < params.M; ++b) {
                d(params.flat_index(n, a), params.flat_index(n, b)) =
                    scale2 * std::sqrt((2.0 * a + 1.0) * (2.0 * b + 1.0)) * k[static_cast<std::size_t>(a + b)];
            }
        }
    }
    return d;
}

DenseMatrix gram_matrix_quadrature(const WaveletParams& params) {
    const auto rule = projection_rule(params);
    const int size = params.m_hat();
    DenseMatrix d = DenseMatrix::Zero(size, size);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vector psi = eval_basis(params, rule.nodes[q]).values;
        d.noalias() += rule.weights[q] * psi * psi.transpose();
    }
    return d;
}

std::vector<DenseMatrix> triple_product_tensor(const WaveletParams& params) {
    const auto moments = local_power_moments(params, 3 * params.M - 3);
    const int size = params.m_hat();
    const double scale3 = std::pow(static_cast<double>(params.blocks()), 1.5);
    std::vector<DenseMatrix> t(static_cast<std::size_t>(size), DenseMatrix::Zero(size, size));
    for (int n = 1; n <= params.blocks(); ++n) {
        const auto& k = moments[static_cast<std::size_t>(n - 1)];
        for (int a = 0; a < params.M; ++a) {
            auto& slice = t[static_cast<std::size_t>(params.flat_index(n, a))];
            for (int b = 0; b < params.M; ++b) {
                for (int c = 0; c < params.M; ++c) {
                    slice(params.flat_index(n, b), params.flat_index(n, c)) =
                        scale3 * std::sqrt((2.0 * a + 1.0) * (2.0 * b + 1.0) * (2.0 * c + 1.0)) *
                        k[static_cast<std::size_t>(a + b + c)];
                }
            }
        }
    }
    return t;
}

OperationalMatrices::OperationalMatrices(const WaveletParams& params)
    : params_(WaveletParams::make(params.k, params.M, params.mu, params.basis)),
      rule_(projection_rule(params_)),
      D_(gram_matrix(params_)),
      triple_(triple_product_tensor(params_)) {
    basis_nodes_.resize(params_.m_hat(), static_cast<Eigen::Index>(rule_.size()));
    for (std::size_t q = 0; q < rule_.size(); ++q) {
        basis_nodes_.col(static_cast<Eigen::Index>(q)) = eval_basis(params_, rule_.nodes[q]).values;
    }
    d_solver_ = std::make_shared<const DenseSolver>(D_, MatrixKind::SymmetricPositiveDefinite);
    if (d_solver_->condition_estimate() > kConditionWarning) {
        std::clog << "warning: Gram matrix condition estimate " << d_solver_->condition_estimate()
                  << " exceeds " << kConditionWarning << " (k=" << params_.k << ", M=" << params_.M
                  << ", mu=" << params_.mu << ")\n";
    }
    P1_ = integration_matrix_first_order(*this);
    Pmu_ = integration_matrix_fractional(*this);
}

Vector OperationalMatrices::moments(const RealFunction& f) const {
    Vector weighted(static_cast<Eigen::Index>(rule_.size()));
    for (std::size_t q = 0; q < rule_.size(); ++q) {
        weighted(static_cast<Eigen::Index>(q)) = rule_.weights[q] * f(rule_.nodes[q]);
    }
    return basis_nodes_ * weighted;
}

Vector OperationalMatrices::project(const RealFunction& f) const {
    return d_solver_->solve(moments(f));
}

double OperationalMatrices::evaluate(const Vector& coeffs, double zeta) const {
    if (coeffs.size() != params_.m_hat()) {
        throw DomainError("evaluate: coefficient vector has wrong length");
    }
    return coeffs.dot(eval_basis(params_, zeta).values);
}

DenseMatrix OperationalMatrices::weighted_triple(const Vector& c) const {
    if (c.size() != params_.m_hat()) {
        throw DomainError("product matrix: coefficient vector has wrong length");
    }
    DenseMatrix sum = DenseMatrix::Zero(params_.m_hat(), params_.m_hat());
    for (int j = 0; j < params_.m_hat(); ++j) {
        if (c(j) != 0.0) {
            sum += c(j) * triple_[static_cast<std::size_t>(j)];
        }
    }
    return sum;
}

DenseMatrix OperationalMatrices::product_matrix(const Vector& c) const {
    // D is symmetric, so (S D^{-1}) = (D^{-1} S)^T with S symmetric.
    return d_solver_->solve(weighted_triple(c)).transpose();
}

Vector project(const RealFunction& f, const OperationalMatrices& mats) {
    return mats.project(f);
}

DenseMatrix product_matrix(const Vector& c, const OperationalMatrices& mats) {
    return mats.product_matrix(c);
}

DenseMatrix integration_matrix_first_order(const OperationalMatrices& mats) {
    const auto& params = mats.params();
    const int size = params.m_hat();
    const double alpha = params.exponent();
    const int blocks = params.blocks();
    const double scale = std::sqrt(static_cast<double>(blocks));

    // c[n][s]: coefficients of zeta -> int_0^zeta tau^{alpha s} restricted to block n.
    std::vector<std::vector<Vector>> c(static_cast<std::size_t>(blocks));
    for (int n = 1; n <= blocks; ++n) {
        const auto [lo, hi] = support_interval(params, n);
        for (int s = 0; s < params.M; ++s) {
            const double e = alpha * s + 1.0;
            const double base = std::pow(lo, e);
            c[static_cast<std::size_t>(n - 1)].push_back(mats.project([=](double z) {
                if (z <= lo) {
                    return 0.0;
                }
                return (std::pow(std::min(z, hi), e) - base) / e;
            }));
        }
    }

    DenseMatrix p1 = DenseMatrix::Zero(size, size);
    for (int n = 1; n <= blocks; ++n) {
        for (int m = 0; m < params.M; ++m) {
            Vector row = Vector::Zero(size);
            for (int s = 0; s <= m; ++s) {
                const int shift_power = m - s;
                const double shift = shift_power == 0 ? 1.0 : std::pow(-(n - 1.0), shift_power);
                double binom = 1.0;
                for (int r = 1; r <= s; ++r) {
                    binom = binom * (m - s + r) / r;
                }
                const double coef = std::pow(static_cast<double>(blocks), s) * shift * binom;
                row += coef * c[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(s)];
            }
            p1.row(params.flat_index(n, m)) = scale * std::sqrt(2.0 * m + 1.0) * row.transpose();
        }
    }
    return p1;
}

double fractional_integral_of_wavelet(const WaveletParams& params, int flat_index, double order, double zeta) {
    if (flat_index < 0 || flat_index >= params.m_hat()) {
        throw IndexError("fractional_integral_of_wavelet: index out of range");
    }
    if (!(order > 0.0 && order <= 1.0)) {
        throw DomainError("fractional_integral_of_wavelet: order must lie in (0, 1]");
    }
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw DomainError("fractional_integral_of_wavelet: zeta outside [0, 1]");
    }
    return WaveletRlIntegrator(params, order)(flat_index, zeta);
}

DenseMatrix integration_matrix_fractional(const OperationalMatrices& mats) {
    return integration_matrix_fractional(mats, mats.params().mu);
}

DenseMatrix integration_matrix_fractional(const OperationalMatrices& mats, double order) {
    if (!(order > 0.0 && order <= 1.0)) {
        throw DomainError("integration_matrix_fractional: order must lie in (0, 1]");
    }
    const auto& params = mats.params();
    const int size = params.m_hat();
    const WaveletRlIntegrator integrate(params, order);
    DenseMatrix pm(size, size);
    for (int i = 0; i < size; ++i) {
        pm.row(i) = mats.project([&](double z) { return integrate(i, z); }).transpose();
    }
    return pm;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_number(m(i, j));
        }
        out << '\n';
    }
}

}  // namespace ftw
