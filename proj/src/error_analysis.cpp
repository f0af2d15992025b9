#include "ftw/error_analysis.hpp"

#include "ftw/csv_format.hpp"
#include "ftw/errors.hpp"
#include "ftw/operational_matrices.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace ftw {

namespace {

constexpr int kSupGridPoints = 201;
constexpr int kDerivativeGridPoints = 1001;
constexpr double kMonotoneSlack = 1e-9;

double log_denominator(int m_hat) {
    return std::lgamma(m_hat + 1.0) + (2.0 * m_hat - 1.0) * std::numbers::ln2;
}

void check_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite and nonnegative");
    }
}

QuadratureRule error_rule(const WaveletParams& params) {
    CompositeOptions options;
    options.points_per_segment = 20;
    options.grading = Grading::Left;
    return composite_rule(breakpoints(params), options);
}

double l2_distance(const QuadratureRule& rule, const RealFunction& f, const RealFunction& g) {
    return std::sqrt(rule.integrate([&](double t) {
        const double d = f(t) - g(t);
        return d * d;
    }));
}

// d^n/dt^n [A cosh(ct) + B sinh(ct)].
std::function<double(int, double)> hyperbolic_derivative(double A, double B, double c) {
    return [=](int n, double t) {
        const double ch = std::cosh(c * t);
        const double sh = std::sinh(c * t);
        const double scale = std::pow(c, n);
        return n % 2 == 0 ? scale * (A * ch + B * sh) : scale * (A * sh + B * ch);
    };
}

AnalyticFunction hyperbolic(std::string name, double A, double B, double c) {
    return {std::move(name), [=](double t) { return A * std::cosh(c * t) + B * std::sinh(c * t); },
            hyperbolic_derivative(A, B, c)};
}

}  // namespace

double lemma2_bound(double M_tilde, int m_hat) {
    check_nonnegative(M_tilde, "lemma2_bound: M_tilde");
    if (m_hat < 1) {
        throw DomainError("lemma2_bound: m_hat must be at least 1");
    }
    if (M_tilde == 0.0) {
        return 0.0;
    }
    return std::exp(std::log(M_tilde) - log_denominator(m_hat));
}

double cost_gap_bound(double L, double M1, double M2, int m_hat) {
    check_nonnegative(L, "cost_gap_bound: L");
    check_nonnegative(M1, "cost_gap_bound: M1");
    check_nonnegative(M2, "cost_gap_bound: M2");
    return L * lemma2_bound(M1 + M2, m_hat);
}

double block_interpolation_bound(double M_tilde, int M, double width) {
    if (!(width > 0.0 && width <= 1.0)) {
        throw DomainError("block_interpolation_bound: width must lie in (0, 1]");
    }
    return lemma2_bound(M_tilde, M) * std::pow(width, M);
}

const std::vector<AnalyticFunction>& analytic_family() {
    static const std::vector<AnalyticFunction> family = [] {
        const double r2 = std::numbers::sqrt2;
        // Optimal state of the mu = 1 reference problem with the rounded
        // transversality constant -0.98.
        constexpr double varpi = -0.98;
        std::vector<AnalyticFunction> f;
        f.push_back({"exp", [](double t) { return std::exp(t); }, [](int, double t) { return std::exp(t); }});
        f.push_back(hyperbolic("cosh_sqrt2", 1.0, 0.0, r2));
        f.push_back(hyperbolic("sinh_sqrt2", 0.0, 1.0, r2));
        f.push_back(hyperbolic("example1_state", 1.0, varpi, r2));
        return f;
    }();
    return family;
}

double derivative_sup(const AnalyticFunction& f, int order) {
    double sup = 0.0;
    for (int i = 0; i < kDerivativeGridPoints; ++i) {
        sup = std::max(sup, std::abs(f.derivative(order, static_cast<double>(i) / (kDerivativeGridPoints - 1))));
    }
    return sup;
}

BoundReport check_lemma2(const AnalyticFunction& f, const WaveletParams& params) {
    const OperationalMatrices mats(params);
    const Vector c = mats.project(f.value);
    BoundReport r;
    r.m_hat = params.m_hat();
    r.M_tilde = derivative_sup(f, r.m_hat);
    r.bound = lemma2_bound(r.M_tilde, r.m_hat);
    r.observed = l2_distance(error_rule(params), f.value, [&](double t) { return mats.evaluate(c, t); });
    r.satisfied = r.observed <= r.bound * (1.0 + 1e-9);
    return r;
}

SweepResult convergence_sweep(const FocpProblem& problem, const std::vector<WaveletParams>& configs,
                              const std::optional<ExactSolution>& exact) {
    for (std::size_t i = 1; i < configs.size(); ++i) {
        if (configs[i].m_hat() < configs[i - 1].m_hat()) {
            throw ConfigError("convergence_sweep: configurations must be sorted by m_hat");
        }
    }
    SweepResult result;
    for (const auto& params : configs) {
        auto mats = std::make_shared<const OperationalMatrices>(params);
        const FocpSolution sol = solve(discretize(problem, mats), problem);
        SweepRow row;
        row.params = params;
        row.J = sol.J_value;
        if (exact) {
            double ex = 0.0;
            double eu = 0.0;
            for (int i = 0; i < kSupGridPoints; ++i) {
                const double t = static_cast<double>(i) / (kSupGridPoints - 1);
                const auto [x, u] = reconstruct(sol, *mats, t);
                ex = std::max(ex, std::abs(x - exact->x(t)));
                eu = std::max(eu, std::abs(u - exact->u(t)));
            }
            row.err_x_sup = ex;
            row.err_u_sup = eu;
            const auto rule = error_rule(params);
            row.err_x_l2 = l2_distance(rule, exact->x, [&](double t) { return reconstruct(sol, *mats, t).first; });
            row.err_u_l2 = l2_distance(rule, exact->u, [&](double t) { return reconstruct(sol, *mats, t).second; });
            if (exact->x_derivative) {
                const AnalyticFunction fx{"x", exact->x, exact->x_derivative};
                row.bound = lemma2_bound(derivative_sup(fx, params.m_hat()), params.m_hat());
            }
        }
        result.rows.push_back(std::move(row));
    }

    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const auto& prev = result.rows[i - 1];
        const auto& cur = result.rows[i];
        const bool decreasing = cur.J <= prev.J + kMonotoneSlack;
        result.monotone_all = result.monotone_all && decreasing;
        const bool nested = cur.params.k == prev.params.k && cur.params.basis == prev.params.basis &&
                            cur.params.mu == prev.params.mu && cur.params.M > prev.params.M;
        if (nested) {
            result.monotone_nested = result.monotone_nested && decreasing;
        }
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    out << "k,M,m_hat,mu,basis,J,err_x_sup,err_u_sup,bound\n";
    for (const auto& r : result.rows) {
        out << r.params.k << ',' << r.params.M << ',' << r.params.m_hat() << ',' << format_number(r.params.mu) << ','
            << to_string(r.params.basis) << ',' << format_number(r.J) << ',' << opt(r.err_x_sup) << ','
            << opt(r.err_u_sup) << ',' << opt(r.bound) << '\n';
    }
}

}  // namespace ftw
