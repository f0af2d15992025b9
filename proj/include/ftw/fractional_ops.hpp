#pragma once

#include "ftw/numeric_kernel.hpp"

#include <span>

namespace ftw {

/// Fractional order in (0, 1].
class FracOrder {
public:
    explicit FracOrder(double mu);
    double value() const noexcept { return mu_; }

private:
    double mu_;
};

/// Riemann-Liouville integral (1/Gamma(mu)) int_0^zeta (zeta - tau)^{mu-1} f(tau) dtau.
///
/// `breakpoints` lists points in (0, 1) where f or its derivatives may jump;
/// the integral is split there. The final piece [b, zeta] is halved and its
/// right half uses a Gauss-Jacobi rule that absorbs the kernel singularity.
double rl_integral(const RealFunction& f, FracOrder mu, double zeta, std::span<const double> breakpoints = {});

/// Caputo derivative (1/Gamma(1-mu)) int_0^zeta (zeta - tau)^{-mu} f'(tau) dtau,
/// and f'(zeta) at mu = 1. `f` is only used at mu = 1 when `f_prime` is empty.
double caputo_derivative(const RealFunction& f, const RealFunction& f_prime, FracOrder mu, double zeta,
                         std::span<const double> breakpoints = {});

/// max over grid of |I^mu (D^mu f)(zeta) - (f(zeta) - f(0))|.
double check_inversion_identity(const RealFunction& f, const RealFunction& f_prime, FracOrder mu,
                                std::span<const double> grid);

/// Derivative of a black-box f on [0, 1]: five-point stencils at step h and
/// h/2 combined by Richardson extrapolation. One-sided stencils are used
/// within 2h of either end so f is never sampled outside [0, 1].
RealFunction finite_difference_derivative(RealFunction f, double step = 1e-4);

}  // namespace ftw
