#pragma once

// Small-amplitude 2*pi-periodic traveling waves w(z), z = kx, of the profile equation
//
//     M_k w = c w + w^2/2 + B
//
// stored as cosine coefficients: w(z) = w_0 + sum_{n>=1} 2 w_n cos(nz).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kplab/error.hpp"
#include "kplab/symbols.hpp"

namespace kplab {

struct WaveParams {
    double k = 1.0;
    double a = 0.0;
    double b = 0.0;
};

struct StokesCoefficients {
    double A0 = 0.0, A2 = 0.0, A3 = 0.0, c2 = 0.0;
};

enum class WaveProvenance { Expansion, NewtonRefined };

inline std::string_view to_string(WaveProvenance p) {
    return p == WaveProvenance::Expansion ? "expansion" : "newton";
}

struct StokesWave {
    std::string symbol;
    WaveParams params;
    double c = 0.0;
    std::vector<double> what;  // w_0 .. w_M
    WaveProvenance provenance = WaveProvenance::Expansion;
    double residual = 0.0;
    int iterations = 0;

    [[nodiscard]] int harmonics() const noexcept { return static_cast<int>(what.size()) - 1; }

    /// Complex-exponential coefficient W_j (W_{-j} = W_j = w_j; zero beyond the stored range).
    [[nodiscard]] double coefficient(int j) const noexcept {
        const auto a = static_cast<std::size_t>(j < 0 ? -j : j);
        return a < what.size() ? what[a] : 0.0;
    }

    [[nodiscard]] double operator()(double z) const {
        double v = what.empty() ? 0.0 : what[0];
        for (std::size_t n = 1; n < what.size(); ++n) v += 2.0 * what[n] * std::cos(static_cast<double>(n) * z);
        return v;
    }
};

inline constexpr double kDegenerateDenominator = 1e-14;

inline StokesCoefficients stokes_coefficients(const MultiplierSymbol& sym, double k) {
    require(k > 0.0 && std::isfinite(k), "wavenumber k must be positive");
    const double m1 = sym(k), m2 = sym(2.0 * k), m3 = sym(3.0 * k);
    const double d0 = 1.0 - m1, d2 = m2 - m1, d3 = m3 - m1;
    for (double d : {d0, d2, d3})
        if (!(std::abs(d) >= kDegenerateDenominator))
            fail(ErrorKind::DegenerateSymbol, "degenerate symbol '" + sym.name() + "' at k = " +
                                                  detail::format_beta(k) + ": Stokes denominator vanishes");
    StokesCoefficients s;
    s.A0 = 1.0 / (4.0 * d0);
    s.A2 = 1.0 / (4.0 * d2);
    s.A3 = s.A2 / (2.0 * d3);
    s.c2 = -s.A0 - s.A2 / 2.0;
    return s;
}

/// Galilean shift carried by the offset parameter: w -> w + s, c -> c - s.
inline double offset_shift(const MultiplierSymbol& sym, const WaveParams& p) { return (1.0 - sym(p.k)) * p.b; }

/// Constant B in the profile equation satisfied by the wave (exactly zero when b = 0).
inline double profile_constant(const MultiplierSymbol& sym, const StokesWave& w) {
    const double s = offset_shift(sym, w.params);
    return (1.0 - w.c) * s - 0.5 * s * s;
}

/// Third-order Stokes expansion (harmonics 0..3).
inline StokesWave stokes_wave(const MultiplierSymbol& sym, const WaveParams& p) {
    const StokesCoefficients s = stokes_coefficients(sym, p.k);
    const double a = p.a, a2 = a * a;
    if (std::abs(a) > 0.2)
        std::fprintf(stderr, "kplab: warning: amplitude a = %g is outside the small-amplitude range\n", a);
    StokesWave w;
    w.symbol = sym.name();
    w.params = p;
    w.c = sym(p.k) - (1.0 - sym(p.k)) * p.b + a2 * s.c2;
    w.what = {(1.0 - sym(p.k)) * p.b + a2 * s.A0, a / 2.0, a2 * s.A2 / 2.0, a2 * a * s.A3 / 2.0};
    w.provenance = WaveProvenance::Expansion;
    return w;
}

namespace detail {

// (w^2/2)^_n for n = 0..nmax from the two-sided coefficient sequence.
inline std::vector<double> half_square(const StokesWave& w, int nmax) {
    const int M = w.harmonics();
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    for (int n = 0; n <= nmax; ++n) {
        double acc = 0.0;
        for (int j = std::max(-M, n - M); j <= std::min(M, n + M); ++j) acc += w.coefficient(j) * w.coefficient(n - j);
        out[static_cast<std::size_t>(n)] = 0.5 * acc;
    }
    return out;
}

inline std::vector<double> profile_residual(const MultiplierSymbol& sym, const StokesWave& w, double constant,
                                            int nmax) {
    const auto sq = half_square(w, nmax);
    std::vector<double> F(static_cast<std::size_t>(nmax) + 1);
    for (int n = 0; n <= nmax; ++n) {
        const double wn = w.coefficient(n);
        const double mk = n == 0 ? 1.0 : sym(w.params.k * n);
        F[static_cast<std::size_t>(n)] = mk * wn - w.c * wn - sq[static_cast<std::size_t>(n)] - (n == 0 ? constant : 0.0);
    }
    return F;
}

}  // namespace detail

/// Max-coefficient norm of the profile-equation residual with the given constant.
/// Harmonics up to 2M are included, so the residual is that of the finite Fourier series itself.
inline double wave_residual(const MultiplierSymbol& sym, const StokesWave& w, double constant) {
    require(w.harmonics() >= 3, "wave needs at least 3 harmonics");
    const auto F = detail::profile_residual(sym, w, constant, 2 * w.harmonics());
    double r = 0.0;
    for (double f : F) r = std::max(r, std::abs(f));
    return r;
}

inline double wave_residual(const MultiplierSymbol& sym, const StokesWave& w) {
    return wave_residual(sym, w, profile_constant(sym, w));
}

struct NewtonOptions {
    int harmonics = 32;
    double tol = 1e-12;
    int max_iterations = 50;
};

/// Solve the Galerkin-truncated profile equation for (w_0, w_2..w_M, c) with w_1 = a/2 fixed.
inline StokesWave newton_refine(const MultiplierSymbol& sym, const WaveParams& p, const NewtonOptions& opt = {}) {
    require(opt.harmonics >= 16, "Newton truncation must be at least 16 harmonics");
    require(opt.tol >= 1e-14, "Newton tolerance must be >= 1e-14");
    const int M = opt.harmonics;
    const StokesWave guess = stokes_wave(sym, WaveParams{p.k, p.a, 0.0});

    StokesWave w;
    w.symbol = sym.name();
    w.params = WaveParams{p.k, p.a, 0.0};
    w.provenance = WaveProvenance::NewtonRefined;
    w.what.assign(static_cast<std::size_t>(M) + 1, 0.0);
    w.c = guess.c;

    if (p.a != 0.0) {
        std::copy(guess.what.begin(), guess.what.end(), w.what.begin());
        std::vector<double> mk(static_cast<std::size_t>(M) + 1);
        for (int n = 0; n <= M; ++n) mk[static_cast<std::size_t>(n)] = n == 0 ? 1.0 : sym(p.k * n);

        const auto n_unknowns = static_cast<Eigen::Index>(M) + 1;
        Eigen::MatrixXd J(n_unknowns, n_unknowns);
        Eigen::VectorXd F(n_unknowns);
        bool converged = false;
        for (int it = 0; it <= opt.max_iterations; ++it) {
            const auto sq = detail::half_square(w, M);
            double norm = 0.0;
            for (int n = 0; n <= M; ++n) {
                const auto un = static_cast<std::size_t>(n);
                F(n) = (mk[un] - w.c) * w.what[un] - sq[un];
                norm = std::max(norm, std::abs(F(n)));
            }
            if (norm <= opt.tol) {
                converged = true;
                w.iterations = it;
                break;
            }
            if (it == opt.max_iterations) break;
            // column 0 <-> w_0, column 1 <-> c (w_1 is pinned), column p <-> w_p
            for (int n = 0; n <= M; ++n) {
                const auto un = static_cast<std::size_t>(n);
                J(n, 0) = (n == 0 ? mk[0] - w.c : 0.0) - w.coefficient(n);
                J(n, 1) = -w.what[un];
                for (int q = 2; q <= M; ++q)
                    J(n, q) = (n == q ? mk[un] - w.c : 0.0) - (w.coefficient(n - q) + w.coefficient(n + q));
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
            if (!lu.isInvertible()) fail(ErrorKind::NoConvergence, "singular Jacobian in Newton refinement");
            const Eigen::VectorXd d = lu.solve(-F);
            w.what[0] += d(0);
            w.c += d(1);
            for (int q = 2; q <= M; ++q) w.what[static_cast<std::size_t>(q)] += d(q);
        }
        if (!converged)
            fail(ErrorKind::NoConvergence,
                 "Newton refinement did not converge in " + std::to_string(opt.max_iterations) + " iterations");
    }

    const double s = offset_shift(sym, p);
    w.params.b = p.b;
    w.what[0] += s;
    w.c -= s;
    w.residual = wave_residual(sym, w);
    return w;
}

}  // namespace kplab
