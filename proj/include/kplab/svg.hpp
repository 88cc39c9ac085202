#pragma once

// Minimal static SVG line plots: panels stacked vertically in an 800x600 canvas.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "kplab/bands.hpp"

namespace kplab::svg {

inline constexpr int kWidth = 800;
inline constexpr int kHeight = 600;

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
};

struct Panel {
    std::string xlabel, ylabel;
    std::vector<Series> series;
};

namespace detail {

inline std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

inline std::string fmt(double v, const char* spec = "%.2f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

// round step for about n ticks over [lo, hi]
inline double nice_step(double lo, double hi, int n) {
    const double raw = (hi - lo) / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

inline void range(const std::vector<Series>& ss, bool use_x, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& s : ss)
        for (double v : use_x ? s.x : s.y)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(1e-6, 0.1 * std::abs(hi));
        lo -= pad;
        hi += pad;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

}  // namespace detail

/// `metadata` is embedded verbatim (escaped) in a <metadata> element.
inline std::string render(const std::string& title, const std::vector<Panel>& panels, const std::string& metadata = {}) {
    using detail::fmt;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!metadata.empty()) os << "<metadata>" << detail::escape(metadata) << "</metadata>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << detail::escape(title)
       << "</text>\n";

    const double left = 90, right = kWidth - 30, top0 = 40, bottom_margin = 50;
    const double slot = (kHeight - top0) / std::max<std::size_t>(1, panels.size());
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Panel& pan = panels[p];
        const double top = top0 + p * slot, bottom = top + slot - bottom_margin;
        double x0, x1, y0, y1;
        detail::range(pan.series, true, x0, x1);
        detail::range(pan.series, false, y0, y1);
        auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
        auto Y = [&](double y) { return bottom - (y - y0) / (y1 - y0) * (bottom - top); };

        os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(right - left) << "\" height=\""
           << fmt(bottom - top) << "\" fill=\"none\" stroke=\"black\"/>\n";
        const double sx = detail::nice_step(x0, x1, 6), sy = detail::nice_step(y0, y1, 4);
        for (double t = std::ceil(x0 / sx) * sx; t <= x1; t += sx)
            os << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << fmt(bottom) << "\" x2=\"" << fmt(X(t)) << "\" y2=\""
               << fmt(bottom + 5) << "\" stroke=\"black\"/><text x=\"" << fmt(X(t)) << "\" y=\"" << fmt(bottom + 18)
               << "\" text-anchor=\"middle\">" << detail::tick_label(t) << "</text>\n";
        for (double t = std::ceil(y0 / sy) * sy; t <= y1; t += sy)
            os << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(Y(t)) << "\" x2=\"" << fmt(left) << "\" y2=\""
               << fmt(Y(t)) << "\" stroke=\"black\"/><text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(Y(t) + 4)
               << "\" text-anchor=\"end\">" << detail::tick_label(t) << "</text>\n";
        os << "<text x=\"" << fmt(0.5 * (left + right)) << "\" y=\"" << fmt(bottom + 36) << "\" text-anchor=\"middle\">"
           << detail::escape(pan.xlabel) << "</text>\n";
        const double ym = 0.5 * (top + bottom);
        os << "<text x=\"20\" y=\"" << fmt(ym) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << fmt(ym)
           << ")\">" << detail::escape(pan.ylabel) << "</text>\n";

        double ly = top + 16;
        for (const auto& s : pan.series) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
                os << fmt(X(s.x[i])) << ',' << fmt(Y(s.y[i])) << ' ';
            os << "\"/>\n";
            if (!s.label.empty()) {
                os << "<text x=\"" << fmt(right - 10) << "\" y=\"" << fmt(ly) << "\" text-anchor=\"end\" fill=\""
                   << s.color << "\">" << detail::escape(s.label) << "</text>\n";
                ly += 16;
            }
        }
    }
    os << "</svg>\n";
    return os.str();
}

/// Re(lambda) and Im(lambda) of a tracked pair against ell.
inline std::string trace_plot(const std::string& title, const std::vector<TracePoint>& trace,
                              const std::string& metadata = {}) {
    Series r1{"lambda1", {}, {}, "#1f77b4"}, r2{"lambda2", {}, {}, "#d62728"};
    Series i1 = r1, i2 = r2;
    for (const auto& t : trace) {
        r1.x.push_back(t.ell);
        r1.y.push_back(t.lambda1.real());
        r2.x.push_back(t.ell);
        r2.y.push_back(t.lambda2.real());
        i1.x.push_back(t.ell);
        i1.y.push_back(t.lambda1.imag());
        i2.x.push_back(t.ell);
        i2.y.push_back(t.lambda2.imag());
    }
    return render(title, {Panel{"ell", "Re lambda", {r1, r2}}, Panel{"ell", "Im lambda", {i1, i2}}}, metadata);
}

}  // namespace kplab::svg
