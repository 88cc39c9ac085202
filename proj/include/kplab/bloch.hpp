#pragma once

// Hill's method for the Bloch operator family
//
//     A(l, xi) = (d_z + i xi)(c - M_k + w) + sigma l^2 (d_z + i xi)^{-1}
//
// on the Fourier modes e^{i(n+xi)z}, n = -N..N (n = 0 dropped when xi = 0).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "kplab/error.hpp"
#include "kplab/parallel.hpp"
#include "kplab/symbols.hpp"
#include "kplab/waves.hpp"

namespace kplab {

using cdouble = std::complex<double>;

/// Real parts at or below this are treated as zero.
inline constexpr double kDeadBand = 1e-9;
/// Below this |xi| the inverse derivative is ill-conditioned.
inline constexpr double kSmallXi = 1e-3;

struct BlochSpec {
    MultiplierSymbol sym;
    SigmaSign sigma;
    StokesWave wave;
    double ell = 0.0;
    double xi = 0.0;
    int N = 32;

    [[nodiscard]] double k() const noexcept { return wave.params.k; }
};

inline void validate(const BlochSpec& s) {
    require(s.N >= 8, "truncation N must be at least 8");
    require(s.xi > -0.5 && s.xi <= 0.5, "xi must lie in (-1/2, 1/2]");
    require(s.wave.harmonics() >= 3, "wave needs at least 3 harmonics");
    require(std::isfinite(s.ell), "ell must be finite");
}

/// Retained Fourier indices in matrix order.
inline std::vector<int> retained_modes(const BlochSpec& s) {
    std::vector<int> modes;
    modes.reserve(static_cast<std::size_t>(2 * s.N + 1));
    for (int n = -s.N; n <= s.N; ++n)
        if (!(s.xi == 0.0 && n == 0)) modes.push_back(n);
    return modes;
}

inline Eigen::MatrixXcd assemble(const BlochSpec& s) {
    validate(s);
    const auto modes = retained_modes(s);
    const auto dim = static_cast<Eigen::Index>(modes.size());
    const double k = s.k(), c = s.wave.c, sl2 = s.sigma.as_double() * s.ell * s.ell;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const double nu_r = modes[static_cast<std::size_t>(r)] + s.xi;
        for (Eigen::Index q = 0; q < dim; ++q) {
            const int n = modes[static_cast<std::size_t>(q)];
            double h = s.wave.coefficient(modes[static_cast<std::size_t>(r)] - n);
            if (r == q) h += c - s.sym(k * (n + s.xi));
            double v = nu_r * h;
            if (r == q) v -= sl2 / nu_r;
            // purely imaginary entries; keep the real part an exact zero
            A(r, q) = cdouble(0.0, v);
        }
    }
    return A;
}

/// H such that A = D H with D = diag(i(n+xi)), recovered from an assembled matrix.
inline Eigen::MatrixXcd hermitian_factor(const BlochSpec& s, const Eigen::MatrixXcd& A) {
    const auto modes = retained_modes(s);
    Eigen::MatrixXcd H(A.rows(), A.cols());
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        const double nu = modes[static_cast<std::size_t>(r)] + s.xi;
        for (Eigen::Index q = 0; q < A.cols(); ++q) {
            const cdouble z = A(r, q);
            H(r, q) = cdouble(z.imag() / nu, -z.real() / nu);  // z / (i nu)
        }
    }
    return H;
}

/// max |H - H^*| entrywise.
inline double hermiticity_defect(const Eigen::MatrixXcd& H) {
    return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

struct SpectrumResult {
    std::vector<cdouble> eigenvalues;  // sorted by imaginary, then real part
    double max_real = 0.0;
    double solver_tol = kDeadBand;
    std::vector<std::string> warnings;
};

inline bool eigen_order(const cdouble& x, const cdouble& y) {
    if (x.imag() != y.imag()) return x.imag() < y.imag();
    return x.real() < y.real();
}

inline double max_real_part(const std::vector<cdouble>& ev, double dead_band = kDeadBand) {
    double m = 0.0;
    for (const auto& z : ev) m = std::max(m, z.real());
    return m > dead_band ? m : 0.0;
}

inline SpectrumResult spectrum(const BlochSpec& s) {
    SpectrumResult res;
    if (s.xi != 0.0 && std::abs(s.xi) < kSmallXi)
        res.warnings.push_back("|xi| < 1e-3: the inverse derivative on mode n = 0 is ill-conditioned");
    const Eigen::MatrixXcd A = assemble(s);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    res.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(res.eigenvalues.begin(), res.eigenvalues.end(), eigen_order);
    res.max_real = max_real_part(res.eigenvalues);
    return res;
}

/// Copy of the template with (ell, xi) replaced.
inline BlochSpec at(const BlochSpec& tmpl, double ell, double xi) {
    BlochSpec s = tmpl;
    s.ell = ell;
    s.xi = xi;
    return s;
}

inline BlochSpec at(const BlochSpec& tmpl, double ell) { return at(tmpl, ell, tmpl.xi); }

struct ScanRow {
    double ell = 0.0, xi = 0.0, max_real = 0.0;
};

/// max_real over the grid product; rows ordered xi-major, ell-minor.
inline std::vector<ScanRow> growth_scan(const BlochSpec& tmpl, const std::vector<double>& ell_grid,
                                        const std::vector<double>& xi_grid) {
    require(!ell_grid.empty() && !xi_grid.empty(), "scan grids must be nonempty");
    std::vector<ScanRow> rows(ell_grid.size() * xi_grid.size());
    for (std::size_t i = 0; i < xi_grid.size(); ++i)
        for (std::size_t j = 0; j < ell_grid.size(); ++j) rows[i * ell_grid.size() + j] = {ell_grid[j], xi_grid[i], 0.0};
    for (const auto& r : rows) validate(at(tmpl, r.ell, r.xi));
    parallel_for(rows.size(), [&](std::size_t i) { rows[i].max_real = spectrum(at(tmpl, rows[i].ell, rows[i].xi)).max_real; });
    return rows;
}

}  // namespace kplab
