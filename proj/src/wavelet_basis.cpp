#include "ftw/wavelet_basis.hpp"

#include "ftw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ftw {

namespace {

double binomial(int n, int r) {
    double out = 1.0;
    for (int i = 1; i <= r; ++i) {
        out = out * (n - r + i) / i;
    }
    return out;
}

void check_block(const WaveletParams& params, int n) {
    if (n < 1 || n > params.blocks()) {
        throw IndexError("wavelet translation index n=" + std::to_string(n) + " outside 1.." +
                         std::to_string(params.blocks()));
    }
}

void check_degree(const WaveletParams& params, int m) {
    if (m < 0 || m >= params.M) {
        throw IndexError("wavelet degree m=" + std::to_string(m) + " outside 0.." +
                         std::to_string(params.M - 1));
    }
}

void check_point(double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw DomainError("wavelet evaluation point outside [0, 1]: " + std::to_string(zeta));
    }
}

// Local coordinate s = 2^{k-1} zeta^exponent - n + 1, in [0, 1) on block n.
double local_coordinate(const WaveletParams& params, int n, double zeta) {
    return params.blocks() * std::pow(zeta, params.exponent()) - n + 1.0;
}

}  // namespace

std::string_view to_string(BasisKind kind) noexcept {
    return kind == BasisKind::Taylor ? "tw" : "ftw";
}

BasisKind parse_basis_kind(std::string_view text) {
    if (text == "tw" || text == "TW") {
        return BasisKind::Taylor;
    }
    if (text == "ftw" || text == "FTW") {
        return BasisKind::FractionalTaylor;
    }
    throw ConfigError("unknown basis '" + std::string(text) + "' (expected tw or ftw)");
}

WaveletParams WaveletParams::make(int k, int M, double mu, BasisKind basis) {
    if (k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (k > 20) {
        throw ConfigError("k too large");
    }
    if (M < 1) {
        throw ConfigError("M must be >= 1");
    }
    if (!(mu > 0.0 && mu <= 1.0)) {
        throw ConfigError("mu must lie in (0, 1], got " + std::to_string(mu));
    }
    return WaveletParams{k, M, mu, basis};
}

int WaveletParams::flat_index(int n, int m) const {
    check_block(*this, n);
    check_degree(*this, m);
    return (n - 1) * M + m;
}

double normalized_taylor_poly(int m, double s) {
    return std::sqrt(2.0 * m + 1.0) * std::pow(s, m);
}

std::pair<double, double> support_interval(const WaveletParams& params, int n) {
    check_block(params, n);
    const double inv = 1.0 / params.exponent();
    const double lo = std::pow(static_cast<double>(n - 1) / params.blocks(), inv);
    const double hi = n == params.blocks() ? 1.0 : std::pow(static_cast<double>(n) / params.blocks(), inv);
    return {lo, hi};
}

std::vector<double> breakpoints(const WaveletParams& params) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(params.blocks()) + 1);
    for (int n = 1; n <= params.blocks(); ++n) {
        out.push_back(support_interval(params, n).first);
    }
    out.push_back(1.0);
    return out;
}

int support_block(const WaveletParams& params, double zeta) {
    check_point(zeta);
    const double s = params.blocks() * std::pow(zeta, params.exponent());
    const int n = static_cast<int>(std::floor(s)) + 1;
    return std::clamp(n, 1, params.blocks());
}

double eval_wavelet(const WaveletParams& params, int n, int m, double zeta) {
    check_block(params, n);
    check_degree(params, m);
    check_point(zeta);
    if (support_block(params, zeta) != n) {
        return 0.0;
    }
    const double scale = std::sqrt(static_cast<double>(params.blocks()));
    return scale * normalized_taylor_poly(m, local_coordinate(params, n, zeta));
}

BasisVector eval_basis(const WaveletParams& params, double zeta) {
    check_point(zeta);
    BasisVector out;
    out.point = zeta;
    out.values = Vector::Zero(params.m_hat());
    const int n = support_block(params, zeta);
    const double s = local_coordinate(params, n, zeta);
    const double scale = std::sqrt(static_cast<double>(params.blocks()));
    const int base = (n - 1) * params.M;
    for (int m = 0; m < params.M; ++m) {
        out.values(base + m) = scale * normalized_taylor_poly(m, s);
    }
    return out;
}

Vector eval_basis_derivative(const WaveletParams& params, double zeta) {
    check_point(zeta);
    if (zeta == 0.0 && params.exponent() < 1.0) {
        throw DomainError("basis derivative is unbounded at zeta = 0 for fractional wavelets");
    }
    Vector out = Vector::Zero(params.m_hat());
    const int n = support_block(params, zeta);
    const double alpha = params.exponent();
    const double s = local_coordinate(params, n, zeta);
    const double ds = params.blocks() * alpha * std::pow(zeta, alpha - 1.0);
    const double scale = std::sqrt(static_cast<double>(params.blocks()));
    const int base = (n - 1) * params.M;
    for (int m = 1; m < params.M; ++m) {
        out(base + m) = scale * std::sqrt(2.0 * m + 1.0) * m * std::pow(s, m - 1) * ds;
    }
    return out;
}

std::vector<MonomialTerm> monomial_expansion(const WaveletParams& params, int n, int m) {
    check_block(params, n);
    check_degree(params, m);
    const double lead = std::sqrt(static_cast<double>(params.blocks())) * std::sqrt(2.0 * m + 1.0);
    std::vector<MonomialTerm> terms;
    terms.reserve(static_cast<std::size_t>(m) + 1);
    for (int s = 0; s <= m; ++s) {
        // 0^0 = 1 keeps only the s = m term on the first block.
        const double shift = (n == 1 && s < m) ? 0.0 : std::pow(1.0 - n, m - s);
        if (shift == 0.0) {
            continue;
        }
        const double coef = lead * binomial(m, s) * std::pow(params.blocks(), s) * shift;
        terms.push_back({coef, params.exponent() * s});
    }
    return terms;
}

double eval_wavelet_extension(const WaveletParams& params, int n, int m, double zeta) {
    check_block(params, n);
    check_degree(params, m);
    if (zeta < 0.0) {
        throw DomainError("wavelet extension evaluated at negative zeta");
    }
    const double scale = std::sqrt(static_cast<double>(params.blocks()));
    return scale * normalized_taylor_poly(m, local_coordinate(params, n, zeta));
}

std::vector<BoundaryJump> boundary_limits(const WaveletParams& params, const Vector& coeffs) {
    if (coeffs.size() != params.m_hat()) {
        throw DomainError("boundary_limits: coefficient vector has wrong length");
    }
    std::vector<BoundaryJump> out;
    const double scale = std::sqrt(static_cast<double>(params.blocks()));
    for (int n = 2; n <= params.blocks(); ++n) {
        // Local coordinate is 1 at the right end of block n-1 and 0 at the left end of block n.
        double left = 0.0;
        for (int m = 0; m < params.M; ++m) {
            left += coeffs((n - 2) * params.M + m) * scale * std::sqrt(2.0 * m + 1.0);
        }
        const double right = coeffs((n - 1) * params.M) * scale;
        out.push_back({support_interval(params, n).first, left, right});
    }
    return out;
}

}  // namespace ftw
