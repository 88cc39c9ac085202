#pragma once

// Unperturbed (a = 0) eigenvalues i*omega, Krein signatures and collision loci.
//
// With nu = n + xi, omega_n(l^2) = nu (m(k) - m(k nu)) - sigma l^2 / nu is affine in l^2,
// so every pairwise collision has a closed-form l^2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "kplab/error.hpp"
#include "kplab/symbols.hpp"

namespace kplab {

struct ModeIndex {
    int n = 1;
    double xi = 0.0;

    [[nodiscard]] double nu() const noexcept { return n + xi; }
};

inline void validate(const ModeIndex& idx) {
    require(idx.xi > -0.5 && idx.xi <= 0.5, "xi must lie in (-1/2, 1/2]");
    require(idx.nu() != 0.0, "mode index n + xi must be nonzero");
}

inline double omega(const MultiplierSymbol& sym, SigmaSign sigma, double k, double ell, const ModeIndex& idx) {
    validate(idx);
    const double nu = idx.nu();
    return nu * (sym(k) - sym(k * nu)) - sigma.as_double() * ell * ell / nu;
}

/// Sign of <L e, e>; exactly 0 when the argument is below 1e-14 in magnitude.
inline int krein(const MultiplierSymbol& sym, SigmaSign sigma, double k, double ell, const ModeIndex& idx) {
    validate(idx);
    const double nu = idx.nu();
    const double q = sym(k) - sym(k * nu) - sigma.as_double() * ell * ell / (nu * nu);
    if (std::abs(q) < 1e-14) return 0;
    return q > 0.0 ? 1 : -1;
}

/// l^2 at which omega_i == omega_j (may be nonpositive: no collision at real l).
inline double collision_ell_sq(const MultiplierSymbol& sym, SigmaSign sigma, double k, const ModeIndex& i,
                               const ModeIndex& j) {
    validate(i);
    validate(j);
    const double ni = i.nu(), nj = j.nu();
    require(ni != nj, "collision needs two distinct modes");
    const double ai = ni * (sym(k) - sym(k * ni));
    const double aj = nj * (sym(k) - sym(k * nj));
    return sigma.as_double() * (ai - aj) * ni * nj / (nj - ni);
}

/// Raw periodic locus of modes p and -q (p, q >= 1).
inline double periodic_locus_value(const MultiplierSymbol& sym, SigmaSign sigma, double k, int p, int q) {
    require(p >= 1 && q >= 1, "periodic locus needs p, q >= 1");
    require(!(p == 1 && q == 1), "(p, q) = (1, 1) is the origin collision");
    const double m = sym(k);
    const double pd = p, qd = q;
    return sigma.as_double() * pd * qd / (pd + qd) * (pd * (m - sym(k * pd)) + qd * (m - sym(k * qd)));
}

inline std::optional<double> collision_locus_periodic(const MultiplierSymbol& sym, SigmaSign sigma, double k, int p,
                                                      int q) {
    const double v = periodic_locus_value(sym, sigma, k, p, q);
    if (v > 0.0) return v;
    return std::nullopt;
}

/// Raw Bloch locus of modes p and -q, xi in (0, 1/2], p >= 0, q >= 1.
inline double bloch_locus_value(const MultiplierSymbol& sym, SigmaSign sigma, double k, double xi, int p, int q) {
    require(xi > 0.0 && xi <= 0.5, "Bloch locus needs xi in (0, 1/2]");
    require(p >= 0 && q >= 1, "Bloch locus needs p >= 0 and q >= 1");
    const double m = sym(k), s = sigma.as_double();
    if (p == 0 && q == 1) {
        // modes {0, -1}
        return s * xi * (1.0 - xi) * ((1.0 - xi) * (m - sym(k * (1.0 - xi))) + xi * (m - sym(k * xi)));
    }
    const double u = p + xi, v = q - xi;
    return s * u * v / (p + q) * (u * (m - sym(k * u)) + v * (m - sym(k * v)));
}

inline std::optional<double> collision_locus_bloch(const MultiplierSymbol& sym, SigmaSign sigma, double k, double xi,
                                                   int p, int q) {
    const double v = bloch_locus_value(sym, sigma, k, xi, p, q);
    if (v > 0.0) return v;
    return std::nullopt;
}

struct CollisionEvent {
    ModeIndex first, second;
    double ell_sq = 0.0;
    double omega = 0.0;
    int kappa_first = 0, kappa_second = 0;
    bool dangerous = false;
};

struct CollisionList {
    std::vector<CollisionEvent> events;
    int max_index = 0;  // enumeration cap; collisions involving larger |n| are not listed
    double ell_max = 0.0;
};

/// Every collision among modes |n| <= max_index with 0 < l^2 <= ell_max^2, sorted by l^2.
inline CollisionList enumerate_collisions(const MultiplierSymbol& sym, SigmaSign sigma, double k, double xi,
                                          int max_index, double ell_max) {
    require(max_index >= 3, "max_index must be at least 3");
    require(xi > -0.5 && xi <= 0.5, "xi must lie in (-1/2, 1/2]");
    std::vector<ModeIndex> modes;
    for (int n = -max_index; n <= max_index; ++n)
        if (n + xi != 0.0) modes.push_back({n, xi});

    CollisionList out;
    out.max_index = max_index;
    out.ell_max = ell_max;
    for (std::size_t a = 0; a < modes.size(); ++a) {
        for (std::size_t b = a + 1; b < modes.size(); ++b) {
            const double l2 = collision_ell_sq(sym, sigma, k, modes[a], modes[b]);
            if (!(l2 > 0.0) || l2 > ell_max * ell_max) continue;
            const double ell = std::sqrt(l2);
            CollisionEvent e;
            e.first = modes[a];
            e.second = modes[b];
            e.ell_sq = l2;
            e.omega = 0.5 * (omega(sym, sigma, k, ell, e.first) + omega(sym, sigma, k, ell, e.second));
            e.kappa_first = krein(sym, sigma, k, ell, e.first);
            e.kappa_second = krein(sym, sigma, k, ell, e.second);
            e.dangerous = e.kappa_first != e.kappa_second;
            out.events.push_back(e);
        }
    }
    std::stable_sort(out.events.begin(), out.events.end(), [](const CollisionEvent& x, const CollisionEvent& y) {
        return std::tie(x.ell_sq, x.first.n, x.second.n) < std::tie(y.ell_sq, y.first.n, y.second.n);
    });
    return out;
}

/// Collisions of opposite Krein signature only.
inline CollisionList enumerate_dangerous(const MultiplierSymbol& sym, SigmaSign sigma, double k, double xi,
                                         int max_index, double ell_max) {
    CollisionList all = enumerate_collisions(sym, sigma, k, xi, max_index, ell_max);
    std::erase_if(all.events, [](const CollisionEvent& e) { return !e.dangerous; });
    return all;
}

/// Smallest positive collision l^2 among |n| <= max_index (any signature), if one exists.
inline std::optional<double> first_collision_ell_sq(const MultiplierSymbol& sym, SigmaSign sigma, double k, double xi,
                                                    int max_index = 8) {
    const auto all = enumerate_collisions(sym, sigma, k, xi, max_index, std::numeric_limits<double>::max());
    if (all.events.empty()) return std::nullopt;
    return all.events.front().ell_sq;
}

}  // namespace kplab
