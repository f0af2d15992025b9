#include "ftw/fractional_ops.hpp"

#include "ftw/errors.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace ftw {

namespace {

constexpr int kJacobiPoints = 32;

// Derivatives such as tau^{mu-1} with mu = 0.3 are strongly singular at 0;
// 36 levels at ratio 0.1 leave an untreated first panel of width 1e-36.
CompositeOptions graded(Grading grading) {
    CompositeOptions options;
    options.points_per_segment = 24;
    options.grading = grading;
    options.grading_levels = 36;
    options.grading_ratio = 0.1;
    return options;
}

void check_zeta(double zeta, const char* what) {
    if (!(zeta > 0.0 && zeta <= 1.0)) {
        throw DomainError(std::string(what) + ": zeta must lie in (0, 1], got " + std::to_string(zeta));
    }
}

// int_0^zeta (zeta - tau)^exponent g(tau) dtau, split at the breakpoints below zeta.
double kernel_integral(const RealFunction& g, double exponent, double zeta, std::span<const double> breakpoints) {
    std::vector<double> edges{0.0};
    for (double b : breakpoints) {
        if (b > edges.back() && b < zeta) {
            edges.push_back(b);
        }
    }
    const double last = edges.back();
    auto kernel = [&](double t) { return std::pow(zeta - t, exponent) * g(t); };

    double sum = 0.0;
    if (edges.size() > 1) {
        sum += composite_rule(edges, graded(Grading::Both)).integrate(kernel);
    }

    const double mid = 0.5 * (last + zeta);
    const double first_half[2] = {last, mid};
    sum += composite_rule(first_half, graded(Grading::Left)).integrate(kernel);
    sum += gauss_jacobi_right(kJacobiPoints, mid, zeta, exponent).integrate(g);
    return sum;
}

}  // namespace

FracOrder::FracOrder(double mu) : mu_(mu) {
    if (!(mu > 0.0 && mu <= 1.0)) {
        throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(mu));
    }
}

double rl_integral(const RealFunction& f, FracOrder mu, double zeta, std::span<const double> breakpoints) {
    check_zeta(zeta, "rl_integral");
    return kernel_integral(f, mu.value() - 1.0, zeta, breakpoints) / gamma(mu.value());
}

double caputo_derivative(const RealFunction& f, const RealFunction& f_prime, FracOrder mu, double zeta,
                         std::span<const double> breakpoints) {
    check_zeta(zeta, "caputo_derivative");
    const RealFunction derivative = f_prime ? f_prime : finite_difference_derivative(f);
    if (mu.value() == 1.0) {
        return derivative(zeta);
    }
    return kernel_integral(derivative, -mu.value(), zeta, breakpoints) / gamma(1.0 - mu.value());
}

double check_inversion_identity(const RealFunction& f, const RealFunction& f_prime, FracOrder mu,
                                std::span<const double> grid) {
    const double f0 = f(0.0);
    const RealFunction caputo = [&](double t) { return t > 0.0 ? caputo_derivative(f, f_prime, mu, t) : 0.0; };
    double worst = 0.0;
    for (double zeta : grid) {
        check_zeta(zeta, "check_inversion_identity");
        const double lhs = rl_integral(caputo, mu, zeta);
        worst = std::max(worst, std::abs(lhs - (f(zeta) - f0)));
    }
    return worst;
}

RealFunction finite_difference_derivative(RealFunction f, double step) {
    if (!(step > 0.0 && step < 0.05)) {
        throw DomainError("finite_difference_derivative: step must lie in (0, 0.05)");
    }
    return [f = std::move(f), step](double x) {
        auto stencil = [&](double h) {
            if (x - 2.0 * h < 0.0) {
                return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2.0 * h) + 16.0 * f(x + 3.0 * h) -
                        3.0 * f(x + 4.0 * h)) /
                       (12.0 * h);
            }
            if (x + 2.0 * h > 1.0) {
                return (25.0 * f(x) - 48.0 * f(x - h) + 36.0 * f(x - 2.0 * h) - 16.0 * f(x - 3.0 * h) +
                        3.0 * f(x - 4.0 * h)) /
                       (12.0 * h);
            }
            return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
        };
        // Both stencils are fourth order, so the h^4 error term cancels.
        return (16.0 * stencil(0.5 * step) - stencil(step)) / 15.0;
    };
}

}  // namespace ftw
