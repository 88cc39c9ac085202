#pragma once

// Leading-order instability predictions and the reduced 2x2 matrices they come from.
//
//   Delta3Periodic    xi = 0, pair {n, n+3}, n in {-1,-2}     regime (1,dec) / (-1,inc)
//   LongWavePeriodic  xi = 0, origin collision of modes +-1  regime (1,inc) / (-1,dec)
//   Bloch01           xi != 0, pair {-1, 0}                  regime (1,inc) / (-1,dec)
//   BlochDelta2       xi != 0, pair {n, n+2}, n in {-1,-2}   regime (1,dec) / (-1,inc)

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "kplab/collisions.hpp"
#include "kplab/error.hpp"
#include "kplab/symbols.hpp"
#include "kplab/waves.hpp"

namespace kplab {

enum class BandContext { Delta3Periodic, LongWavePeriodic, Bloch01, BlochDelta2 };

inline std::string_view to_string(BandContext c) {
    switch (c) {
        case BandContext::Delta3Periodic: return "delta3";
        case BandContext::LongWavePeriodic: return "longwave";
        case BandContext::Bloch01: return "bloch01";
        case BandContext::BlochDelta2: return "bloch-delta2";
    }
    return "?";
}

inline BandContext parse_context(std::string_view s) {
    if (s == "delta3") return BandContext::Delta3Periodic;
    if (s == "longwave") return BandContext::LongWavePeriodic;
    if (s == "bloch01") return BandContext::Bloch01;
    if (s == "bloch-delta2") return BandContext::BlochDelta2;
    fail(ErrorKind::InvalidArgument, "unknown band context '" + std::string(s) + "'");
}

struct BandPrediction {
    BandContext context = BandContext::Delta3Periodic;
    double center_ell_sq = 0.0;
    double half_width_ell_sq = 0.0;
    std::string validity;
    // parameters the prediction was made for
    std::string symbol;
    int sigma = 1;
    double k = 1.0, a = 0.0, xi = 0.0;
    int n = 0;

    /// Predicted band in l^2; the long-wave band is [0, half_width).
    [[nodiscard]] double lower() const noexcept {
        return context == BandContext::LongWavePeriodic ? 0.0 : center_ell_sq - half_width_ell_sq;
    }
    [[nodiscard]] double upper() const noexcept {
        return context == BandContext::LongWavePeriodic ? half_width_ell_sq : center_ell_sq + half_width_ell_sq;
    }
};

namespace detail {

inline BandPrediction prediction_stub(BandContext ctx, const MultiplierSymbol& sym, SigmaSign sigma, double k,
                                      double a, double xi, int n, std::string validity) {
    BandPrediction p;
    p.context = ctx;
    p.symbol = sym.name();
    p.sigma = sigma.value();
    p.k = k;
    p.a = a;
    p.xi = xi;
    p.n = n;
    p.validity = std::move(validity);
    return p;
}

inline void require_regime(bool ok, BandContext ctx, const MultiplierSymbol& sym, SigmaSign sigma) {
    if (!ok)
        fail(ErrorKind::Inapplicable, std::string(to_string(ctx)) + " prediction does not apply to (sigma, m) = (" +
                                          std::to_string(sigma.value()) + ", " +
                                          std::string(to_string(sym.monotonicity())) + ")");
}

inline void require_bloch_xi(double xi) { require(xi > 0.0 && xi <= 0.5, "xi must lie in (0, 1/2]"); }

inline double delta3_center(const MultiplierSymbol& sym, SigmaSign sigma, double k) {
    return 4.0 * sigma.as_double() / 3.0 * (sym(k) - sym(2.0 * k));
}

inline double delta2_center(const MultiplierSymbol& sym, SigmaSign sigma, double k, double xi, int n) {
    const double u = n + xi, v = n + 2 + xi, m = sym(k);
    return sigma.as_double() * v * u / 2.0 * (u * (m - sym(k * u)) - v * (m - sym(k * v)));
}

}  // namespace detail

inline BandPrediction predict_delta3_periodic(const MultiplierSymbol& sym, SigmaSign sigma, double k, double a) {
    detail::require_regime(short_wave_regime(sigma, sym.monotonicity()), BandContext::Delta3Periodic, sym, sigma);
    const StokesCoefficients s = stokes_coefficients(sym, k);
    auto p = detail::prediction_stub(BandContext::Delta3Periodic, sym, sigma, k, a, 0.0, -1,
                                     "leading order; O(a^4) remainder");
    p.center_ell_sq = detail::delta3_center(sym, sigma, k);
    if (!(p.center_ell_sq > 0.0)) fail(ErrorKind::Inapplicable, "delta3 collision locus is not positive");
    const double aa = std::abs(a);
    p.half_width_ell_sq = -sigma.as_double() * a * a * s.A2 + 2.0 * std::sqrt(2.0) / 3.0 * aa * aa * aa * s.A3;
    return p;
}

/// Outside (1,inc)/(-1,dec) the band is empty (half width 0).
inline BandPrediction predict_longwave_periodic(const MultiplierSymbol& sym, SigmaSign sigma, double k, double a) {
    const StokesCoefficients s = stokes_coefficients(sym, k);
    auto p = detail::prediction_stub(BandContext::LongWavePeriodic, sym, sigma, k, a, 0.0, 1,
                                     "leading order; O(a^4) remainder");
    p.center_ell_sq = 0.0;
    p.half_width_ell_sq =
        long_wave_regime(sigma, sym.monotonicity()) ? sigma.as_double() * (s.A2 - 2.0 * s.A0) * a * a : 0.0;
    return p;
}

inline BandPrediction predict_bloch01(const MultiplierSymbol& sym, SigmaSign sigma, double k, double a, double xi) {
    detail::require_regime(long_wave_regime(sigma, sym.monotonicity()), BandContext::Bloch01, sym, sigma);
    detail::require_bloch_xi(xi);
    auto p = detail::prediction_stub(BandContext::Bloch01, sym, sigma, k, a, xi, -1, "leading order; O(a^2) remainder");
    p.center_ell_sq = bloch_locus_value(sym, sigma, k, xi, 0, 1);
    p.half_width_ell_sq = std::pow(xi * (1.0 - xi), 1.5) * std::abs(a);
    return p;
}

inline BandPrediction predict_bloch_delta2(const MultiplierSymbol& sym, SigmaSign sigma, double k, double a, double xi,
                                           int n) {
    detail::require_regime(short_wave_regime(sigma, sym.monotonicity()), BandContext::BlochDelta2, sym, sigma);
    detail::require_bloch_xi(xi);
    require(n == -1 || n == -2, "bloch-delta2 needs n in {-1, -2}");
    const StokesCoefficients s = stokes_coefficients(sym, k);
    auto p = detail::prediction_stub(BandContext::BlochDelta2, sym, sigma, k, a, xi, n, "leading order; O(a^3) remainder");
    p.center_ell_sq = detail::delta2_center(sym, sigma, k, xi, n);
    if (!(p.center_ell_sq > 0.0)) fail(ErrorKind::Inapplicable, "bloch-delta2 collision locus is not positive");
    p.half_width_ell_sq = sigma.as_double() * a * a * s.A2 * (n + xi) * (n + 2 + xi);
    return p;
}

struct ReducedMatrix {
    Eigen::Matrix2cd entries;
    BandContext context = BandContext::Delta3Periodic;
    double center_ell_sq = 0.0;
    double center_omega = 0.0;

    [[nodiscard]] std::complex<double> trace() const { return entries(0, 0) + entries(1, 1); }
    [[nodiscard]] std::complex<double> determinant() const {
        return entries(0, 0) * entries(1, 1) - entries(0, 1) * entries(1, 0);
    }
    /// Discriminant tr^2 - 4 det of the characteristic polynomial in lambda.
    [[nodiscard]] std::complex<double> discriminant() const {
        const auto t = trace();
        return t * t - 4.0 * determinant();
    }
    [[nodiscard]] std::array<std::complex<double>, 2> eigenvalues() const {
        const auto t = trace(), r = std::sqrt(discriminant());
        return {(t + r) / 2.0, (t - r) / 2.0};
    }
    [[nodiscard]] double max_real() const {
        const auto ev = eigenvalues();
        return std::max(ev[0].real(), ev[1].real());
    }
};

/// The perturbation matrix of the given context at (a, l, xi); n selects the Delta3/BlochDelta2 pair.
inline ReducedMatrix reduced_matrix(BandContext ctx, const MultiplierSymbol& sym, SigmaSign sigma, double k, double a,
                                    double ell, double xi = 0.0, int n = -1) {
    using namespace std::complex_literals;
    const StokesCoefficients s = stokes_coefficients(sym, k);
    const double sg = sigma.as_double(), a2 = a * a;
    ReducedMatrix R;
    R.context = ctx;
    switch (ctx) {
        case BandContext::Delta3Periodic: {
            require(n == -1 || n == -2, "delta3 needs n in {-1, -2}");
            R.center_ell_sq = detail::delta3_center(sym, sigma, k);
            R.center_omega = omega(sym, sigma, k, std::sqrt(std::abs(R.center_ell_sq)), {n, 0.0});
            const double eps = ell * ell - R.center_ell_sq, w = R.center_omega;
            const double n0 = n, n3 = n + 3;
            R.entries << 1i * w - 1i * a2 * s.A2 / 2.0 * n0 - 1i * sg * eps / n0, 1i * a2 * a * s.A3 / 2.0 * n3,
                1i * a2 * a * s.A3 / 2.0 * n0, 1i * w - 1i * a2 * s.A2 / 2.0 * n3 - 1i * sg * eps / n3;
            break;
        }
        case BandContext::LongWavePeriodic: {
            const double D = 1.0 + 4.0 * a2 * s.A2 * s.A2, l2 = ell * ell;
            R.entries << 0.0, (sg * l2 + (s.A0 - s.A2) * a2) / D, (-sg * l2 - s.A0 * a2) / D, 0.0;
            break;
        }
        case BandContext::Bloch01: {
            detail::require_bloch_xi(xi);
            R.center_ell_sq = bloch_locus_value(sym, sigma, k, xi, 0, 1);
            R.center_omega = omega(sym, sigma, k, std::sqrt(std::abs(R.center_ell_sq)), {-1, xi});
            const double eps = ell * ell - R.center_ell_sq, w = R.center_omega;
            // basis order (e^{-iz}, 1)
            R.entries << 1i * w - 1i * sg * eps / (xi - 1.0), 0.5i * a * xi, 0.5i * (xi - 1.0) * a,
                1i * w - 1i * sg * eps / xi;
            break;
        }
        case BandContext::BlochDelta2: {
            detail::require_bloch_xi(xi);
            require(n == -1 || n == -2, "bloch-delta2 needs n in {-1, -2}");
            R.center_ell_sq = detail::delta2_center(sym, sigma, k, xi, n);
            R.center_omega = omega(sym, sigma, k, std::sqrt(std::abs(R.center_ell_sq)), {n, xi});
            const double eps = ell * ell - R.center_ell_sq, w = R.center_omega;
            const double u = n + xi, v = n + 2 + xi;
            R.entries << 1i * w - 1i * a2 * s.A2 / 2.0 * u - 1i * sg * eps / u, 1i * a2 * s.A2 / 2.0 * v,
                1i * a2 * s.A2 / 2.0 * u, 1i * w - 1i * a2 * s.A2 / 2.0 * v - 1i * sg * eps / v;
            break;
        }
    }
    return R;
}

/// Fourier data of the long-wave basis: phi1 = sum cos_coeff[j] cos(jz), phi2 = sum sin_coeff[j] sin(jz).
struct LongWaveBasis {
    std::array<double, 4> cos_coeff{};
    std::array<double, 4> sin_coeff{};
};

inline LongWaveBasis longwave_basis(const MultiplierSymbol& sym, double k, double a) {
    if (a == 0.0) fail(ErrorKind::InvalidArgument, "long-wave basis needs a != 0");
    const StokesCoefficients s = stokes_coefficients(sym, k);
    LongWaveBasis b;
    b.cos_coeff = {0.0, 1.0, 2.0 * a * s.A2, 3.0 * a * a * s.A3};
    b.sin_coeff = b.cos_coeff;
    return b;
}

}  // namespace kplab
