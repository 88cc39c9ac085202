#pragma once

// Reference values computed independently of the library code paths under test.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

/// Unperturbed frequency at nu = n + xi, straight from the dispersion relation.
inline double omega(const std::function<double(double)>& m, int sigma, double k, double ell, double nu) {
    return nu * (m(k) - m(k * nu)) - sigma * ell * ell / nu;
}

/// Root of f on [lo, hi] by plain bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Positive l^2 where omega(nu1) == omega(nu2), found by bracketing and bisection; none if no sign change.
inline std::optional<double> collision_root(const std::function<double(double)>& m, int sigma, double k, double nu1,
                                            double nu2) {
    auto g = [&](double L) {
        const double ell = std::sqrt(L);
        return omega(m, sigma, k, ell, nu1) - omega(m, sigma, k, ell, nu2);
    };
    double hi = 1.0;
    const double g0 = g(0.0);
    if (g0 == 0.0) return std::nullopt;
    for (int i = 0; i < 200 && (g(hi) < 0.0) == (g0 < 0.0); ++i) hi *= 2.0;
    if ((g(hi) < 0.0) == (g0 < 0.0)) return std::nullopt;
    return bisect(g, 0.0, hi);
}

/// Stokes coefficients by direct evaluation.
struct Stokes {
    double A0, A2, A3, c2;
};

inline Stokes stokes(const std::function<double(double)>& m, double k) {
    Stokes s{};
    s.A0 = 1.0 / (4.0 * (1.0 - m(k)));
    s.A2 = 1.0 / (4.0 * (m(2 * k) - m(k)));
    s.A3 = s.A2 / (2.0 * (m(3 * k) - m(k)));
    s.c2 = -s.A0 - s.A2 / 2.0;
    return s;
}

}  // namespace oracle
