#pragma once

// Command-line front end: eval, state, grid, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 numerical failure, 4 uncertified output. MODN_MAX_DIM caps the Fock
// dimension (default 512).

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kaleido/coordinate.hpp"
#include "kaleido/error.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/identities.hpp"
#include "kaleido/modn.hpp"
#include "kaleido/observables.hpp"
#include "kaleido/serialize.hpp"

namespace kaleido::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_invalid_input = 2,
    exit_numerical_failure = 3,
    exit_uncertified = 4,
};

struct RunConfig {
    std::string subcommand;
    std::size_t n = 1;
    std::size_t k = 0;
    double z_re = 0.0, z_im = 0.0;
    std::optional<double> x;
    std::optional<double> alpha_re, alpha_im, beta_re, beta_im;
    std::optional<std::size_t> dim;
    std::optional<double> x_min, x_max;
    std::size_t samples = kDefaultGridSamples;
    std::string suite = "all";
    std::optional<double> tolerance;
    std::string format;
    std::string output;
};

inline std::size_t max_dim_from_env() {
    const char* raw = std::getenv("MODN_MAX_DIM");
    if (raw == nullptr || *raw == '\0') return kMaxAutoDim;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 2) throw invalid_argument("MODN_MAX_DIM must be an integer >= 2");
    return static_cast<std::size_t>(v);
}

inline FockDim resolve_dim(const RunConfig& cfg, complex_t alpha) {
    const std::size_t cap = max_dim_from_env();
    if (cfg.dim) {
        if (*cfg.dim > cap)
            throw invalid_argument("--dim " + std::to_string(*cfg.dim) + " exceeds MODN_MAX_DIM = " +
                                   std::to_string(cap));
        return FockDim(*cfg.dim);
    }
    return auto_dim(alpha, cap);
}

inline void require_finite(double v, const char* flag) {
    if (!std::isfinite(v)) throw invalid_argument(std::string(flag) + " must be finite");
}

inline complex_t alpha_of(const RunConfig& cfg) {
    const complex_t a{cfg.alpha_re.value_or(0.0), cfg.alpha_im.value_or(0.0)};
    require_finite(a.real(), "--alpha-re");
    require_finite(a.imag(), "--alpha-im");
    return a;
}

inline std::string format_or(const RunConfig& cfg, const char* fallback) {
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    if (f != "json" && f != "csv") throw invalid_argument("--format must be csv or json");
    return f;
}

inline int cmd_eval(const RunConfig& cfg, std::ostream& os) {
    const ModulusContext ctx(cfg.n);
    ctx.check_index(cfg.k, "--k");
    const complex_t z{cfg.z_re, cfg.z_im};
    require_finite(cfg.z_re, "--z-re");
    require_finite(cfg.z_im, "--z-im");
    const std::string format = format_or(cfg, "json");

    const complex_t series = modn_exp_all(ctx, z)[cfg.k];
    const complex_t dft = modn_exp_dft(ctx, cfg.k, z);
    const double diff = std::abs(series - dft);

    std::optional<complex_t> composite, hermite;
    if (cfg.x) {
        require_finite(*cfg.x, "--x");
        composite = modn_gaussian_exp(ctx, cfg.k, z, *cfg.x);
        hermite = modn_hermite_generating_sum(ctx, cfg.k, z, *cfg.x);
    }

    if (format == "json") {
        os << "{\"n\":" << cfg.n << ",\"k\":" << cfg.k << ",\"z\":" << io::json_complex(z)
           << ",\"series\":" << io::json_complex(series) << ",\"dft\":" << io::json_complex(dft)
           << ",\"diff\":" << io::fmt(diff);
        if (cfg.x)
            os << ",\"x\":" << io::fmt(*cfg.x) << ",\"composite_gaussian\":" << io::json_complex(*composite)
               << ",\"hermite_sum\":" << io::json_complex(*hermite)
               << ",\"gaussian_diff\":" << io::fmt(std::abs(*composite - *hermite));
        os << "}\n";
    } else {
        os << "# n=" << cfg.n << " k=" << cfg.k << " z_re=" << io::fmt(z.real()) << " z_im=" << io::fmt(z.imag())
           << "\n";
        os << "quantity,re,im\n";
        os << "series," << io::fmt(series.real()) << ',' << io::fmt(series.imag()) << '\n';
        os << "dft," << io::fmt(dft.real()) << ',' << io::fmt(dft.imag()) << '\n';
        os << "diff," << io::fmt(diff) << ',' << io::fmt(0.0) << '\n';
        if (cfg.x) {
            os << "composite_gaussian," << io::fmt(composite->real()) << ',' << io::fmt(composite->imag()) << '\n';
            os << "hermite_sum," << io::fmt(hermite->real()) << ',' << io::fmt(hermite->imag()) << '\n';
        }
    }
    return exit_ok;
}

inline int cmd_state(const RunConfig& cfg, std::ostream& os) {
    const ModulusContext ctx(cfg.n);
    ctx.check_index(cfg.k, "--k");
    const complex_t alpha = alpha_of(cfg);
    const std::string format = format_or(cfg, "json");
    const FockDim dim = resolve_dim(cfg, alpha);
    const StateVector state = kaleidoscope_state(ctx, cfg.k, alpha, dim);
    const ObservableReport report = observe(ctx, cfg.k, alpha, state);
    if (format == "json")
        io::write_state_json(os, report, state);
    else
        io::write_state_csv(os, report, state);
    return exit_ok;
}

inline int cmd_grid(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const ModulusContext ctx(cfg.n);
    ctx.check_index(cfg.k, "--k");
    const complex_t alpha = alpha_of(cfg);
    const std::string format = format_or(cfg, "csv");
    const double half = default_grid_half_width(alpha);
    const double lo = cfg.x_min.value_or(-half);
    const double hi = cfg.x_max.value_or(half);
    require_finite(lo, "--x-min");
    require_finite(hi, "--x-max");
    WaveFunctionGrid grid = probability_grid(ctx, cfg.k, alpha, lo, hi, cfg.samples);
    if (cfg.dim) grid.dim = resolve_dim(cfg, alpha).value();
    if (format == "json")
        io::write_grid_json(os, grid);
    else
        io::write_grid_csv(os, grid);
    if (!grid.certified) {
        err << "grid not certified: probability integrates to " << io::fmt(grid.integral)
            << "; widen the range, e.g. --x-min " << -half << " --x-max " << half << "\n";
        return exit_uncertified;
    }
    return exit_ok;
}

/// Fixed sweep used when no alpha/beta flags are given.
inline std::vector<std::pair<complex_t, complex_t>> default_identity_sweep() {
    return {
        {{0.0, 0.0}, {0.0, 0.0}},   {{0.7, 0.0}, {0.4, 0.0}},  {{1.0, 0.0}, {0.5, 0.0}},
        {{0.0, 0.3}, {0.0, 0.3}},   {{0.6, 0.0}, {0.6, 0.0}},  {{1.0, 0.2}, {0.5, 0.0}},
        {{0.8, 0.0}, {0.3, 0.0}},   {{-0.5, 0.5}, {0.9, -0.1}},
    };
}

inline IdentitySuite parse_suite(const std::string& s) {
    if (s == "mod2-identities") return IdentitySuite::mod2_identities;
    if (s == "addition") return IdentitySuite::addition;
    if (s == "q-commutation") return IdentitySuite::q_commutation;
    if (s == "all") return IdentitySuite::all;
    throw invalid_argument("--suite must be one of mod2-identities, addition, q-commutation, all");
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    const IdentitySuite suite = parse_suite(cfg.suite);
    const std::string format = format_or(cfg, "json");
    const FockDim dim(cfg.dim.value_or(kMinIdentityDim));
    if (dim.value() > max_dim_from_env()) throw invalid_argument("--dim exceeds MODN_MAX_DIM");
    if (cfg.tolerance && !(*cfg.tolerance > 0.0)) throw invalid_argument("--tolerance must be positive");

    std::vector<std::pair<complex_t, complex_t>> params;
    if (cfg.alpha_re || cfg.alpha_im || cfg.beta_re || cfg.beta_im) {
        const complex_t beta{cfg.beta_re.value_or(0.0), cfg.beta_im.value_or(0.0)};
        require_finite(beta.real(), "--beta-re");
        require_finite(beta.imag(), "--beta-im");
        params.emplace_back(alpha_of(cfg), beta);
    } else {
        params = default_identity_sweep();
    }
    // Validate every pair before running anything.
    for (const auto& [a, b] : params) check_identity_parameters(a, b, dim);

    std::vector<IdentityReport> reports;
    for (const auto& [a, b] : params)
        for (auto& r : run_identity_suite(suite, a, b, dim)) reports.push_back(std::move(r));
    bool all_passed = true;
    for (auto& r : reports) {
        if (cfg.tolerance) {
            r.tolerance = *cfg.tolerance;
            r.passed = r.residual_norm <= r.tolerance;
        }
        all_passed = all_passed && r.passed;
    }
    if (format == "json")
        io::write_reports_json(os, reports);
    else
        io::write_reports_csv(os, reports);
    return all_passed ? exit_ok : exit_verification_failed;
}

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mod-n exponentials and kaleidoscope coherent states", "modn"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "modulus (polygon order), n >= 1");
        sub->add_option("--k", cfg.k, "component index 0..n-1");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("--output,-o", cfg.output, "output file (default: standard output)");
    };
    auto add_alpha = [&cfg](CLI::App* sub) {
        sub->add_option("--alpha-re", cfg.alpha_re, "Re(alpha)");
        sub->add_option("--alpha-im", cfg.alpha_im, "Im(alpha)");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate _k e^z (mod n) by series and by root-of-unity sum");
    add_common(eval);
    eval->add_option("--z-re", cfg.z_re, "Re(z)");
    eval->add_option("--z-im", cfg.z_im, "Im(z)");
    eval->add_option("--x", cfg.x, "also evaluate the composite Gaussian _k e^(-z^2+2zx)");

    CLI::App* state = app.add_subcommand("state", "kaleidoscope state amplitudes and observables");
    add_common(state);
    add_alpha(state);
    state->add_option("--dim", cfg.dim, "Fock dimension (default: automatic)");

    CLI::App* grid = app.add_subcommand("grid", "coordinate-space probability grid");
    add_common(grid);
    add_alpha(grid);
    grid->add_option("--dim", cfg.dim, "Fock dimension recorded in the metadata");
    grid->add_option("--x-min", cfg.x_min, "left end of the grid");
    grid->add_option("--x-max", cfg.x_max, "right end of the grid");
    grid->add_option("--samples", cfg.samples, "number of samples (odd, >= 3)");

    CLI::App* verify = app.add_subcommand("verify", "certify the mod-2 operator identities");
    verify->add_option("--suite", cfg.suite, "mod2-identities | addition | q-commutation | all");
    verify->add_option("--dim", cfg.dim, "Fock dimension (default 64)");
    add_alpha(verify);
    verify->add_option("--beta-re", cfg.beta_re, "Re(beta)");
    verify->add_option("--beta-im", cfg.beta_im, "Im(beta)");
    verify->add_option("--tolerance", cfg.tolerance, "residual tolerance (default 1e-8)");
    verify->add_option("--format", cfg.format, "csv or json");
    verify->add_option("--output,-o", cfg.output, "output file (default: standard output)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid_input;
    }

    std::ostringstream buffer;
    std::ostream& os = cfg.output.empty() ? out : buffer;
    int code = exit_ok;
    try {
        if (eval->parsed())
            code = cmd_eval(cfg, os);
        else if (state->parsed())
            code = cmd_state(cfg, os);
        else if (grid->parsed())
            code = cmd_grid(cfg, os, err);
        else
            code = cmd_verify(cfg, os);
    } catch (const kaleido::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_invalid_input;
    } catch (const kaleido::numerical_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical_failure;
    }
    if (!cfg.output.empty()) {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "cannot open output file " << cfg.output << "\n";
            return exit_invalid_input;
        }
        file << buffer.str();
    }
    return code;
}

} // namespace kaleido::cli
