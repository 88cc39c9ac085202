#pragma once

// Dispersion symbols m(k) of the multiplier operator, hypothesis audits, and the
// (sigma, monotonicity) instability classification.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kplab/error.hpp"
#include "kplab/expression.hpp"

namespace kplab {

enum class Monotonicity { Increasing, Decreasing, NonMonotone };

inline std::string_view to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::Increasing: return "increasing";
        case Monotonicity::Decreasing: return "decreasing";
        case Monotonicity::NonMonotone: return "non-monotone";
    }
    return "?";
}

/// Sign of the transverse term; +1 gives the "-I" models, -1 the "-II" models.
class SigmaSign {
public:
    constexpr explicit SigmaSign(int v) : value_(v) {
        if (v != 1 && v != -1) fail(ErrorKind::InvalidArgument, "sigma must be +1 or -1");
    }
    [[nodiscard]] constexpr int value() const noexcept { return value_; }
    [[nodiscard]] constexpr double as_double() const noexcept { return static_cast<double>(value_); }
    constexpr bool operator==(const SigmaSign&) const = default;

private:
    int value_;
};

/// An even real symbol m(k) with its growth exponent and monotonic behaviour on k > 0.
class MultiplierSymbol {
public:
    MultiplierSymbol(std::string name, std::function<double(double)> eval, double alpha, Monotonicity mono)
        : name_(std::move(name)), eval_(std::move(eval)), alpha_(alpha), mono_(mono) {}

    [[nodiscard]] double operator()(double k) const { return eval_(k); }
    [[nodiscard]] double eval(double k) const { return eval_(k); }

    /// Selector string that resolves back to this symbol (e.g. "fkdv:beta=2").
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] Monotonicity monotonicity() const noexcept { return mono_; }
    [[nodiscard]] bool increasing() const noexcept { return mono_ == Monotonicity::Increasing; }
    [[nodiscard]] bool decreasing() const noexcept { return mono_ == Monotonicity::Decreasing; }

private:
    std::string name_;
    std::function<double(double)> eval_;
    double alpha_;
    Monotonicity mono_;
};

namespace detail {

// Below this |k| the ILW and Whitham symbols switch to their Taylor series.
inline constexpr double kSeriesCutoff = 1e-4;

inline double ilw_symbol(double k) {
    const double k2 = k * k;
    if (std::abs(k) < kSeriesCutoff) return 1.0 + k2 / 3.0 - k2 * k2 / 45.0;
    return k / std::tanh(k);
}

inline double whitham_symbol(double k) {
    const double k2 = k * k;
    if (std::abs(k) < kSeriesCutoff) return 1.0 - k2 / 6.0 + 19.0 * k2 * k2 / 360.0;
    return std::sqrt(std::tanh(k) / k);
}

inline std::string format_beta(double beta) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", beta);
    return buf;
}

}  // namespace detail

/// Geometric grid of n points from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    require(lo > 0 && hi > lo && n >= 2, "geometric_grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double r = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(r * static_cast<double>(i));
    g.back() = hi;
    return g;
}

/// Classify the behaviour of sym on a strictly increasing grid of positive k.
inline Monotonicity infer_monotonicity(const std::function<double(double)>& f, std::span<const double> grid) {
    bool up = true, down = true;
    double prev = f(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (!(cur > prev)) up = false;
        if (!(cur < prev)) down = false;
        prev = cur;
    }
    if (up) return Monotonicity::Increasing;
    if (down) return Monotonicity::Decreasing;
    return Monotonicity::NonMonotone;
}

/// fkdv (needs beta > 1/2), bo, ilw, whitham.
inline MultiplierSymbol builtin_symbol(std::string_view name, std::optional<double> beta = std::nullopt) {
    if (name == "fkdv") {
        if (!beta) fail(ErrorKind::InvalidArgument, "fkdv requires beta");
        if (!(*beta > 0.5) || !std::isfinite(*beta)) fail(ErrorKind::InvalidArgument, "fkdv requires beta > 1/2");
        const double b = *beta;
        return {"fkdv:beta=" + detail::format_beta(b), [b](double k) { return 1.0 + std::pow(std::abs(k), b); },
                b, Monotonicity::Increasing};
    }
    if (beta) fail(ErrorKind::InvalidArgument, "beta is only meaningful for fkdv");
    if (name == "bo") return {"bo", [](double k) { return 1.0 + std::abs(k); }, 1.0, Monotonicity::Increasing};
    if (name == "ilw") return {"ilw", detail::ilw_symbol, 1.0, Monotonicity::Increasing};
    if (name == "whitham") return {"whitham", detail::whitham_symbol, -0.5, Monotonicity::Decreasing};
    fail(ErrorKind::UnknownSymbol, "unknown symbol '" + std::string(name) + "'");
}

/// User symbol from an expression in k. Monotonicity and growth exponent are inferred on a grid.
inline MultiplierSymbol expression_symbol(std::string_view text) {
    const Expression expr = Expression::parse(text);
    auto f = [expr](double k) {
        const double v = expr(k);
        if (std::isfinite(v) || k != 0.0) return v;
        // removable singularity at the origin: symmetric limit
        constexpr double h = 1e-7;
        return 0.5 * (expr(h) + expr(-h));
    };
    const auto dense = geometric_grid(1e-3, 100.0, 400);
    const Monotonicity mono = infer_monotonicity(f, dense);
    const double k1 = 10.0, k2 = 1000.0;
    double alpha = std::log(std::abs(f(k2)) / std::abs(f(k1))) / std::log(k2 / k1);
    if (!std::isfinite(alpha)) alpha = std::numeric_limits<double>::quiet_NaN();
    return {"expr:" + std::string(text), f, alpha, mono};
}

/// Resolve "fkdv:beta=2", "bo", "ilw", "whitham" or "expr:<expression>".
/// A separately supplied beta (CLI --beta) is used when the selector carries none.
inline MultiplierSymbol resolve_symbol(std::string_view selector, std::optional<double> beta = std::nullopt) {
    if (selector.starts_with("expr:")) return expression_symbol(selector.substr(5));
    const auto colon = selector.find(':');
    const std::string_view name = selector.substr(0, colon);
    if (colon != std::string_view::npos) {
        const std::string_view opt = selector.substr(colon + 1);
        if (!opt.starts_with("beta="))
            fail(ErrorKind::InvalidArgument, "unrecognised symbol option '" + std::string(opt) + "'");
        try {
            std::size_t used = 0;
            const std::string num(opt.substr(5));
            beta = std::stod(num, &used);
            if (used != num.size()) throw std::invalid_argument(num);
        } catch (const std::logic_error&) {
            fail(ErrorKind::InvalidArgument, "bad beta value in '" + std::string(selector) + "'");
        }
    }
    return builtin_symbol(name, beta);
}

struct HypothesisCheck {
    bool pass = true;
    std::vector<double> failing_k;  // witnesses
    std::string detail;
};

struct AuditReport {
    HypothesisCheck h1, h2, h3;
    double c1 = 0.0, c2 = 0.0;         // tail bounds of m(k)/k^alpha
    double alpha_estimate = 0.0;       // log-log slope over the tail
    Monotonicity observed = Monotonicity::NonMonotone;

    [[nodiscard]] bool all_pass() const noexcept { return h1.pass && h2.pass && h3.pass; }
};

struct AuditOptions {
    double tail_start = 10.0;
    double even_tol = 1e-12;
    double alpha_slack = 0.25;
};

/// Check evenness/normalisation (H1), power growth (H2) and strict monotonicity (H3) on a grid.
inline AuditReport audit_hypotheses(const MultiplierSymbol& sym, std::span<const double> grid,
                                    const AuditOptions& opt = {}) {
    require(!grid.empty(), "audit grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(grid[i] > 0.0 && std::isfinite(grid[i]), "audit grid must be positive");
        if (i > 0) require(grid[i] > grid[i - 1], "audit grid must be strictly increasing");
    }

    AuditReport rep;

    const double m0 = sym(0.0);
    if (!(std::abs(m0 - 1.0) <= opt.even_tol)) {
        rep.h1.pass = false;
        rep.h1.failing_k.push_back(0.0);
        rep.h1.detail = "m(0) = " + detail::format_beta(m0) + " != 1";
    }
    for (double k : grid) {
        const double mp = sym(k), mn = sym(-k);
        if (!std::isfinite(mp) || !std::isfinite(mn) || !(std::abs(mp - mn) <= opt.even_tol)) {
            rep.h1.pass = false;
            rep.h1.failing_k.push_back(k);
        }
    }
    if (!rep.h1.pass && rep.h1.detail.empty()) rep.h1.detail = "m is not even/real on the grid";

    std::vector<double> tail;
    for (double k : grid)
        if (k >= opt.tail_start) tail.push_back(k);
    if (tail.size() < 2) {
        rep.h2.pass = false;
        rep.h2.detail = "fewer than two grid points in the tail";
    } else {
        rep.c1 = std::numeric_limits<double>::infinity();
        rep.c2 = -std::numeric_limits<double>::infinity();
        for (double k : tail) {
            const double r = sym(k) / std::pow(k, sym.alpha());
            if (!std::isfinite(r) || !(r > 0.0)) {
                rep.h2.pass = false;
                rep.h2.failing_k.push_back(k);
                continue;
            }
            rep.c1 = std::min(rep.c1, r);
            rep.c2 = std::max(rep.c2, r);
        }
        const double lo = sym(tail.front()), hi = sym(tail.back());
        rep.alpha_estimate = std::log(hi / lo) / std::log(tail.back() / tail.front());
        if (!std::isfinite(rep.alpha_estimate) || !(sym.alpha() >= -1.0) ||
            !(std::abs(rep.alpha_estimate - sym.alpha()) <= opt.alpha_slack)) {
            rep.h2.pass = false;
            rep.h2.detail = "tail slope " + detail::format_beta(rep.alpha_estimate) +
                            " inconsistent with alpha " + detail::format_beta(sym.alpha());
        } else if (!rep.h2.pass) {
            rep.h2.detail = "m(k)/k^alpha not positive and finite on the tail";
        }
    }

    rep.observed = infer_monotonicity([&](double k) { return sym(k); }, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d = sym(grid[i]) - sym(grid[i - 1]);
        const bool ok = sym.increasing() ? d > 0.0 : sym.decreasing() ? d < 0.0 : false;
        if (!ok) rep.h3.failing_k.push_back(grid[i]);
    }
    if (!rep.h3.failing_k.empty() || rep.observed == Monotonicity::NonMonotone) {
        rep.h3.pass = false;
        rep.h3.detail = std::string("expected strictly ") + std::string(to_string(sym.monotonicity())) +
                        ", observed " + std::string(to_string(rep.observed));
    }
    return rep;
}

/// Default audit grid: 121 geometric points over [1e-3, 1e3].
inline std::vector<double> default_audit_grid() { return geometric_grid(1e-3, 1e3, 121); }

/// Symbols entering downstream analysis must pass the audit.
inline void require_admissible(const MultiplierSymbol& sym) {
    const auto g = default_audit_grid();
    if (!audit_hypotheses(sym, g).all_pass())
        fail(ErrorKind::InvalidArgument, "symbol '" + sym.name() + "' fails the H1-H3 audit");
}

inline double phase_velocity(const MultiplierSymbol& sym, SigmaSign sigma, double k, double ell) {
    require(k != 0.0, "phase velocity needs k != 0");
    return sym(k) + sigma.as_double() * ell * ell / (k * k);
}

enum class XClass { Periodic, NonPeriodic };
enum class YClass { FiniteShort, Long };
enum class Verdict { PredictUnstable, PredictStableConditional, NoInstabilityFound };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::PredictUnstable: return "predict-unstable";
        case Verdict::PredictStableConditional: return "predict-stable-conditional";
        case Verdict::NoInstabilityFound: return "no-instability-found";
    }
    return "?";
}

struct VerdictQuery {
    SigmaSign sigma{1};
    Monotonicity monotonicity = Monotonicity::Increasing;
    XClass x_class = XClass::Periodic;
    YClass y_class = YClass::FiniteShort;
};

/// True for (1, decreasing) and (-1, increasing): phase velocity monotone in k.
inline bool short_wave_regime(SigmaSign sigma, Monotonicity mono) {
    return (sigma.value() == 1 && mono == Monotonicity::Decreasing) ||
           (sigma.value() == -1 && mono == Monotonicity::Increasing);
}

/// True for (1, increasing) and (-1, decreasing).
inline bool long_wave_regime(SigmaSign sigma, Monotonicity mono) {
    return (sigma.value() == 1 && mono == Monotonicity::Increasing) ||
           (sigma.value() == -1 && mono == Monotonicity::Decreasing);
}

inline Verdict table1_verdict(const VerdictQuery& q) {
    require(q.monotonicity != Monotonicity::NonMonotone, "verdict needs a strictly monotone symbol");
    if (q.x_class == XClass::NonPeriodic)
        return q.y_class == YClass::FiniteShort ? Verdict::PredictUnstable : Verdict::NoInstabilityFound;
    const bool unstable = q.y_class == YClass::FiniteShort ? short_wave_regime(q.sigma, q.monotonicity)
                                                           : long_wave_regime(q.sigma, q.monotonicity);
    return unstable ? Verdict::PredictUnstable : Verdict::PredictStableConditional;
}

inline Verdict table1_verdict(const MultiplierSymbol& sym, SigmaSign sigma, XClass x, YClass y) {
    return table1_verdict(VerdictQuery{sigma, sym.monotonicity(), x, y});
}

}  // namespace kplab
