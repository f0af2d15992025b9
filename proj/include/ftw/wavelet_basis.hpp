#pragma once

#include "ftw/numeric_kernel.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ftw {

/// Taylor wavelets use the dyadic split of [0, 1); fractional Taylor wavelets
/// compose them with zeta -> zeta^mu, which stretches the supports.
enum class BasisKind { Taylor, FractionalTaylor };

std::string_view to_string(BasisKind kind) noexcept;
BasisKind parse_basis_kind(std::string_view text);

/// Discretization triple (k, M, mu) plus the basis family.
///
/// `mu` is always the fractional order of the problem. The wavelets are built
/// on zeta^exponent(), which is mu for the fractional family and 1 for the
/// plain Taylor family, so a Taylor basis can still carry a fractional mu.
struct WaveletParams {
    int k = 1;
    int M = 1;
    double mu = 1.0;
    BasisKind basis = BasisKind::FractionalTaylor;

    /// Validates k >= 1, M >= 1 and 0 < mu <= 1.
    static WaveletParams make(int k, int M, double mu, BasisKind basis = BasisKind::FractionalTaylor);

    int blocks() const noexcept { return 1 << (k - 1); }
    int m_hat() const noexcept { return blocks() * M; }
    double exponent() const noexcept { return basis == BasisKind::Taylor ? 1.0 : mu; }

    /// 0-based flat index of wavelet (n, m), n in 1..2^{k-1}, m in 0..M-1.
    int flat_index(int n, int m) const;
};

/// Evaluation of all m_hat wavelets at one point, ordered n-major, m-minor.
struct BasisVector {
    Vector values;
    double point = 0.0;
};

/// sqrt(2m + 1) * s^m.
double normalized_taylor_poly(int m, double s);

/// Support [lo, hi) of the n-th block.
std::pair<double, double> support_interval(const WaveletParams& params, int n);

/// Block boundaries 0 = b_0 < b_1 < ... < b_{2^{k-1}} = 1.
std::vector<double> breakpoints(const WaveletParams& params);

/// Block n (1-based) whose support contains zeta. Interior breakpoints belong
/// to the block on their right and zeta = 1 belongs to the last block.
int support_block(const WaveletParams& params, double zeta);

double eval_wavelet(const WaveletParams& params, int n, int m, double zeta);
BasisVector eval_basis(const WaveletParams& params, double zeta);

/// Derivative d/dzeta of every wavelet at an interior point (zeta > 0).
Vector eval_basis_derivative(const WaveletParams& params, double zeta);

/// One term coef * zeta^power of a wavelet's expansion on its support.
struct MonomialTerm {
    double coef;
    double power;
};

/// Expansion of psi_{n,m} into powers of zeta on its support:
///   2^{(k-1)/2} sqrt(2m+1) sum_s C(m,s) 2^{(k-1)s} (1-n)^{m-s} zeta^{exponent*s}.
std::vector<MonomialTerm> monomial_expansion(const WaveletParams& params, int n, int m);

/// Value of psi_{n,m}'s defining polynomial continued outside its support.
double eval_wavelet_extension(const WaveletParams& params, int n, int m, double zeta);

/// Left and right limits of c^T Psi at each interior block boundary.
struct BoundaryJump {
    double location;
    double left;
    double right;
};
std::vector<BoundaryJump> boundary_limits(const WaveletParams& params, const Vector& coeffs);

}  // namespace ftw
