#pragma once

// Numerical measurement of instability bands from Hill spectra.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "kplab/asymptotics.hpp"
#include "kplab/bloch.hpp"
#include "kplab/error.hpp"
#include "kplab/parallel.hpp"

namespace kplab {

struct BandReport {
    BandContext context = BandContext::Delta3Periodic;
    double measured_center = 0.0;
    double lower = 0.0, upper = 0.0;  // measured edges in l^2
    BandPrediction predicted;
    double max_growth = 0.0;
    double agreement_ratio = 0.0;  // measured half width / predicted half width
    // parameters
    std::string symbol;
    int sigma = 1;
    double k = 1.0, a = 0.0, xi = 0.0;
    int N = 0;
    int scan_points = 0;
    double refine_tol = 0.0;

    [[nodiscard]] double measured_half_width() const noexcept {
        return context == BandContext::LongWavePeriodic ? upper : 0.5 * (upper - lower);
    }
};

struct BandOptions {
    double refine_tol = 1e-10;
    int scan_points = 33;
    double window_factor = 4.0;  // scan center +- factor * half width
    int max_extensions = 256;    // outward steps when the band reaches the scan window
};

namespace detail {

inline double growth_at(const BlochSpec& tmpl, double ell_sq) {
    return spectrum(at(tmpl, std::sqrt(std::max(ell_sq, 0.0)))).max_real;
}

inline bool unstable_at(const BlochSpec& tmpl, double ell_sq) { return growth_at(tmpl, ell_sq) > kDeadBand; }

/// Edge between a stable and an unstable l^2, to within tol.
inline double bisect_edge(const BlochSpec& tmpl, double stable, double unstable, double tol) {
    while (std::abs(unstable - stable) > tol) {
        const double mid = 0.5 * (stable + unstable);
        if (mid == stable || mid == unstable) break;
        (unstable_at(tmpl, mid) ? unstable : stable) = mid;
    }
    return 0.5 * (stable + unstable);
}

}  // namespace detail

/// Locate the band of positive growth near the predicted one. `tmpl` fixes everything but l.
inline BandReport measure_band(const BlochSpec& tmpl, const BandPrediction& pred, const BandOptions& opt = {}) {
    require(pred.half_width_ell_sq > 0.0, "prediction has an empty band");
    require(opt.scan_points >= 3, "need at least 3 scan points");
    require(opt.refine_tol > 0.0, "refine tolerance must be positive");
    validate(tmpl);
    const bool longwave = pred.context == BandContext::LongWavePeriodic;

    const double hw = pred.half_width_ell_sq;
    const double lo_w = longwave ? 0.0 : pred.center_ell_sq - opt.window_factor * hw;
    const double hi_w = longwave ? opt.window_factor * hw : pred.center_ell_sq + opt.window_factor * hw;
    const int npts = opt.scan_points;
    const double step = (hi_w - lo_w) / (npts - 1);

    std::vector<double> l2(static_cast<std::size_t>(npts)), g(static_cast<std::size_t>(npts), 0.0);
    for (int j = 0; j < npts; ++j) l2[static_cast<std::size_t>(j)] = lo_w + j * step;
    // l^2 = 0 is the pinned lower edge of the long-wave band (double eigenvalue at the origin)
    const std::size_t first = longwave ? 1 : 0;
    parallel_for(static_cast<std::size_t>(npts) - first, [&](std::size_t i) {
        const std::size_t j = i + first;
        g[j] = l2[j] < 0.0 ? 0.0 : detail::growth_at(tmpl, l2[j]);
    });

    const auto best = static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin());
    if (!(g[static_cast<std::size_t>(best)] > kDeadBand))
        fail(ErrorKind::VerificationFailed, "no instability found in the scan window [" + detail::format_beta(lo_w) +
                                                ", " + detail::format_beta(hi_w) + "]");

    int L = best, R = best;
    while (L - 1 >= static_cast<int>(first) && g[static_cast<std::size_t>(L - 1)] > kDeadBand) --L;
    while (R + 1 < npts && g[static_cast<std::size_t>(R + 1)] > kDeadBand) ++R;

    BandReport rep;
    rep.max_growth = *std::max_element(g.begin() + L, g.begin() + R + 1);

    if (longwave && L == static_cast<int>(first)) {
        rep.lower = 0.0;
    } else {
        double unstable = l2[static_cast<std::size_t>(L)];
        double stable = unstable - step;
        for (int ext = 0; stable >= 0.0 && detail::unstable_at(tmpl, stable); ++ext) {
            if (ext >= opt.max_extensions) fail(ErrorKind::VerificationFailed, "lower band edge not found");
            unstable = stable;
            stable -= step;
        }
        rep.lower = stable < 0.0 ? 0.0 : detail::bisect_edge(tmpl, stable, unstable, opt.refine_tol);
    }
    {
        double unstable = l2[static_cast<std::size_t>(R)];
        double stable = unstable + step;
        for (int ext = 0; detail::unstable_at(tmpl, stable); ++ext) {
            if (ext >= opt.max_extensions) fail(ErrorKind::VerificationFailed, "upper band edge not found");
            unstable = stable;
            stable += step;
        }
        rep.upper = detail::bisect_edge(tmpl, stable, unstable, opt.refine_tol);
    }

    rep.context = pred.context;
    rep.predicted = pred;
    rep.measured_center = longwave ? 0.0 : 0.5 * (rep.lower + rep.upper);
    rep.agreement_ratio = rep.measured_half_width() / hw;
    rep.symbol = tmpl.sym.name();
    rep.sigma = tmpl.sigma.value();
    rep.k = tmpl.k();
    rep.a = tmpl.wave.params.a;
    rep.xi = tmpl.xi;
    rep.N = tmpl.N;
    rep.scan_points = npts;
    rep.refine_tol = opt.refine_tol;
    return rep;
}

struct TracePoint {
    double ell = 0.0;
    std::complex<double> lambda1, lambda2;
};

namespace detail {

// Indices of the two eigenvalues best matching the predicted pair; flags a competing third candidate.
inline std::array<std::size_t, 2> match_pair(const std::vector<cdouble>& ev, cdouble p1, cdouble p2, bool& ambiguous) {
    double best = std::numeric_limits<double>::infinity(), second = best;
    std::array<std::size_t, 2> pick{0, 0}, pick2{0, 0};
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double di = std::abs(ev[i] - p1);
        if (di > best) continue;
        for (std::size_t j = 0; j < ev.size(); ++j) {
            if (j == i) continue;
            const double cost = di + std::abs(ev[j] - p2);
            if (cost < best) {
                second = best;
                pick2 = pick;
                best = cost;
                pick = {i, j};
            } else if (cost < second) {
                second = cost;
                pick2 = {i, j};
            }
        }
    }
    const bool same_set = (pick2[0] == pick[0] && pick2[1] == pick[1]) || (pick2[0] == pick[1] && pick2[1] == pick[0]);
    ambiguous = !same_set && second - best < 1e-12 && std::isfinite(second);
    return pick;
}

}  // namespace detail

/// Follow the two eigenvalues that start nearest i*target_imag across an ell grid.
inline std::vector<TracePoint> eigenvalue_trace(const BlochSpec& tmpl, const std::vector<double>& ell_grid,
                                                double target_imag) {
    require(ell_grid.size() >= 2, "trace grid needs at least two points");
    std::vector<std::vector<cdouble>> spectra(ell_grid.size());
    parallel_for(ell_grid.size(), [&](std::size_t i) { spectra[i] = spectrum(at(tmpl, ell_grid[i])).eigenvalues; });

    std::vector<TracePoint> out;
    out.reserve(ell_grid.size());
    {
        const auto& ev = spectra.front();
        const cdouble target(0.0, target_imag);
        std::vector<std::size_t> order(ev.size());
        for (std::size_t i = 0; i < ev.size(); ++i) order[i] = i;
        std::partial_sort(order.begin(), order.begin() + 2, order.end(),
                          [&](std::size_t x, std::size_t y) { return std::abs(ev[x] - target) < std::abs(ev[y] - target); });
        cdouble l1 = ev[order[0]], l2 = ev[order[1]];
        if (eigen_order(l2, l1)) std::swap(l1, l2);
        out.push_back({ell_grid.front(), l1, l2});
    }
    for (std::size_t s = 1; s < ell_grid.size(); ++s) {
        const TracePoint& prev = out.back();
        cdouble p1 = prev.lambda1, p2 = prev.lambda2;
        if (out.size() >= 2) {
            // linear predictor keeps transversal crossings from being paired as bounces
            const TracePoint& pp = out[out.size() - 2];
            const double r = (ell_grid[s] - prev.ell) / (prev.ell - pp.ell);
            p1 += r * (prev.lambda1 - pp.lambda1);
            p2 += r * (prev.lambda2 - pp.lambda2);
        }
        bool ambiguous = false;
        const auto pick = detail::match_pair(spectra[s], p1, p2, ambiguous);
        if (ambiguous)
            fail(ErrorKind::InvalidArgument, "eigenvalue tracking is ambiguous near ell = " +
                                                 detail::format_beta(ell_grid[s]) + "; refine the ell grid");
        out.push_back({ell_grid[s], spectra[s][pick[0]], spectra[s][pick[1]]});
    }
    return out;
}

struct StabilityReport {
    std::size_t points_checked = 0;
    std::vector<ScanRow> violations;

    [[nodiscard]] bool stable() const noexcept { return violations.empty(); }
};

/// Check max Re(lambda) <= dead band on the grid product.
inline StabilityReport verify_stability_region(const BlochSpec& tmpl, const std::vector<double>& ell_grid,
                                               const std::vector<double>& xi_grid) {
    for (double xi : xi_grid)
        require(xi == 0.0 || std::abs(xi) >= 0.01, "stability grids must avoid 0 < |xi| < 0.01");
    StabilityReport rep;
    const auto rows = growth_scan(tmpl, ell_grid, xi_grid);
    rep.points_checked = rows.size();
    for (const auto& r : rows)
        if (r.max_real > kDeadBand) rep.violations.push_back(r);
    return rep;
}

}  // namespace kplab
