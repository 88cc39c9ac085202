#pragma once

// Plain-text serialisation helpers shared by the CLI and the tests.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "kplab/bands.hpp"
#include "kplab/bloch.hpp"
#include "kplab/collisions.hpp"

namespace kplab::io {

/// 17 significant digits, enough to round-trip any double.
inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
    os << "ell,xi,max_real_part\n";
    for (const auto& r : rows) os << num(r.ell) << ',' << num(r.xi) << ',' << num(r.max_real) << '\n';
}

inline void write_collisions_csv(std::ostream& os, const std::vector<CollisionEvent>& events) {
    os << "p,q,xi,ell_sq,omega,kappa_p,kappa_q,dangerous\n";
    for (const auto& e : events)
        os << e.first.n << ',' << e.second.n << ',' << num(e.first.xi) << ',' << num(e.ell_sq) << ',' << num(e.omega)
           << ',' << e.kappa_first << ',' << e.kappa_second << ',' << (e.dangerous ? 1 : 0) << '\n';
}

inline void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace) {
    os << "ell,re_lambda1,im_lambda1,re_lambda2,im_lambda2\n";
    for (const auto& t : trace)
        os << num(t.ell) << ',' << num(t.lambda1.real()) << ',' << num(t.lambda1.imag()) << ','
           << num(t.lambda2.real()) << ',' << num(t.lambda2.imag()) << '\n';
}

inline void write_spectrum_csv(std::ostream& os, const std::vector<cdouble>& ev) {
    os << "index,re_lambda,im_lambda\n";
    for (std::size_t i = 0; i < ev.size(); ++i) os << i << ',' << num(ev[i].real()) << ',' << num(ev[i].imag()) << '\n';
}

}  // namespace kplab::io
