#pragma once

// Deterministic text output. Every real is printed with 17 significant digits
// in lowercase scientific notation ("%.16e"), so identical inputs give
// byte-identical files. Non-finite reals become JSON null.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "kaleido/coordinate.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/identities.hpp"
#include "kaleido/observables.hpp"

namespace kaleido::io {

inline std::string fmt(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string json_complex(complex_t z) {
    return "{\"re\":" + fmt(z.real()) + ",\"im\":" + fmt(z.imag()) + "}";
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline const char* json_bool(bool b) { return b ? "true" : "false"; }

/// {"n","k","alpha","dim","amps","mean_photons","delta_q","delta_p","product"}.
inline void write_state_json(std::ostream& os, const ObservableReport& r, const StateVector& state) {
    os << "{\"n\":" << r.n << ",\"k\":" << r.k << ",\"alpha\":" << json_complex(r.alpha) << ",\"dim\":" << r.dim
       << ",\"amps\":[";
    for (Eigen::Index m = 0; m < state.amps.size(); ++m) {
        if (m) os << ',';
        os << json_complex(state.amps(m));
    }
    os << "],\"mean_photons\":" << fmt(r.mean_photons_fock) << ",\"delta_q\":" << fmt(r.delta_q)
       << ",\"delta_p\":" << fmt(r.delta_p) << ",\"product\":" << fmt(r.product) << "}\n";
}

inline void write_state_csv(std::ostream& os, const ObservableReport& r, const StateVector& state) {
    os << "# n=" << r.n << " k=" << r.k << " alpha_re=" << fmt(r.alpha.real()) << " alpha_im=" << fmt(r.alpha.imag())
       << " dim=" << r.dim << " mean_photons=" << fmt(r.mean_photons_fock) << " delta_q=" << fmt(r.delta_q)
       << " delta_p=" << fmt(r.delta_p) << " product=" << fmt(r.product) << "\n";
    os << "m,amp_re,amp_im\n";
    for (Eigen::Index m = 0; m < state.amps.size(); ++m)
        os << m << ',' << fmt(state.amps(m).real()) << ',' << fmt(state.amps(m).imag()) << '\n';
}

/// One `#` metadata line, then `x,psi_re,psi_im,prob`.
inline void write_grid_csv(std::ostream& os, const WaveFunctionGrid& g) {
    os << "# n=" << g.n << " k=" << g.k << " alpha_re=" << fmt(g.alpha.real()) << " alpha_im=" << fmt(g.alpha.imag())
       << " dim=" << g.dim << " integral=" << fmt(g.integral) << " certified=" << json_bool(g.certified) << "\n";
    os << "x,psi_re,psi_im,prob\n";
    for (std::size_t i = 0; i < g.x.size(); ++i)
        os << fmt(g.x[i]) << ',' << fmt(g.psi[i].real()) << ',' << fmt(g.psi[i].imag()) << ',' << fmt(g.prob[i])
           << '\n';
}

inline void write_grid_json(std::ostream& os, const WaveFunctionGrid& g) {
    os << "{\"n\":" << g.n << ",\"k\":" << g.k << ",\"alpha\":" << json_complex(g.alpha) << ",\"dim\":" << g.dim
       << ",\"integral\":" << fmt(g.integral) << ",\"certified\":" << json_bool(g.certified) << ",\"samples\":[";
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        if (i) os << ',';
        os << "{\"x\":" << fmt(g.x[i]) << ",\"psi\":" << json_complex(g.psi[i]) << ",\"prob\":" << fmt(g.prob[i])
           << '}';
    }
    os << "]}\n";
}

inline std::string identity_report_json(const IdentityReport& r) {
    return "{\"identity_name\":" + json_string(r.identity_name) + ",\"residual_norm\":" + fmt(r.residual_norm) +
           ",\"tolerance\":" + fmt(r.tolerance) + ",\"passed\":" + json_bool(r.passed) +
           ",\"dim\":" + std::to_string(r.dim.value()) + ",\"params\":{\"alpha\":" + json_complex(r.alpha) +
           ",\"beta\":" + json_complex(r.beta) + "}}";
}

inline void write_reports_json(std::ostream& os, const std::vector<IdentityReport>& reports) {
    os << "[";
    for (std::size_t i = 0; i < reports.size(); ++i) os << (i ? ",\n " : "") << identity_report_json(reports[i]);
    os << "]\n";
}

inline void write_reports_csv(std::ostream& os, const std::vector<IdentityReport>& reports) {
    os << "identity_name,residual_norm,tolerance,passed,dim,alpha_re,alpha_im,beta_re,beta_im\n";
    for (const auto& r : reports)
        os << r.identity_name << ',' << fmt(r.residual_norm) << ',' << fmt(r.tolerance) << ',' << json_bool(r.passed)
           << ',' << r.dim.value() << ',' << fmt(r.alpha.real()) << ',' << fmt(r.alpha.imag()) << ','
           << fmt(r.beta.real()) << ',' << fmt(r.beta.imag()) << '\n';
}

} // namespace kaleido::io
