#pragma once

// Root-of-unity machinery and the mod-n exponential functions
//
//     _s e^z (mod n) = sum_k z^(nk+s) / (nk+s)!,   0 <= s < n,
//
// evaluated two independent ways: by the power series and by the
// root-of-unity superposition (1/n) sum_j conj(q^2j)^s exp(q^2j z).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "kaleido/error.hpp"

namespace kaleido {

using complex_t = std::complex<double>;

/// Series truncation control shared by every power-series evaluator.
struct SeriesConfig {
    double rel_tol = 1e-15;
    double abs_tol = 1e-300;
    std::size_t max_terms = 10000;

    void validate(std::size_t n) const {
        if (!(rel_tol > 0.0)) throw invalid_argument("SeriesConfig: rel_tol must be positive");
        if (!(abs_tol >= 0.0)) throw invalid_argument("SeriesConfig: abs_tol must be non-negative");
        if (max_terms < n) throw invalid_argument("SeriesConfig: max_terms must be >= n");
    }
};

/// The modulus n together with the powers of the primitive root q^2 = exp(2 pi i / n).
///
/// Powers are indexed modulo n, so `q2(j)` is valid for any j. Angles that are
/// exact quarter turns are stored exactly (1, i, -1, -i), which keeps the n = 2
/// and n = 4 superpositions free of spurious imaginary parts.
class ModulusContext {
public:
    explicit ModulusContext(std::size_t n) : n_(n) {
        if (n == 0) throw invalid_modulus("modulus n must be >= 1");
        q2_.reserve(n);
        q2bar_.reserve(n);
        for (std::size_t s = 0; s < n; ++s) {
            complex_t w;
            if ((4 * s) % n == 0) {
                switch ((4 * s) / n) {
                case 0: w = {1.0, 0.0}; break;
                case 1: w = {0.0, 1.0}; break;
                case 2: w = {-1.0, 0.0}; break;
                default: w = {0.0, -1.0}; break;
                }
            } else {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(n);
                w = {std::cos(angle), std::sin(angle)};
            }
            q2_.push_back(w);
            q2bar_.push_back(std::conj(w));
        }
    }

    std::size_t n() const noexcept { return n_; }

    /// q^(2j), j taken modulo n.
    complex_t q2(std::size_t j) const noexcept { return q2_[j % n_]; }
    /// conj(q)^(2j), j taken modulo n.
    complex_t q2bar(std::size_t j) const noexcept { return q2bar_[j % n_]; }

    const std::vector<complex_t>& q2_powers() const noexcept { return q2_; }
    const std::vector<complex_t>& q2bar_powers() const noexcept { return q2bar_; }

    void check_index(std::size_t k, const char* what = "component index") const {
        if (k >= n_)
            throw index_error(std::string(what) + " " + std::to_string(k) + " out of range for n = " +
                              std::to_string(n_));
    }

private:
    std::size_t n_;
    std::vector<complex_t> q2_;
    std::vector<complex_t> q2bar_;
};

inline ModulusContext make_context(std::size_t n) { return ModulusContext(n); }

/// d/dz maps _s e^z to _(s-1) e^z, with index 0 wrapping to n-1.
inline std::size_t derivative_index(const ModulusContext& ctx, std::size_t s) {
    ctx.check_index(s);
    return (s + ctx.n() - 1) % ctx.n();
}

/// k-th mod-n component of f at x: (1/n) sum_s conj(q^2s)^k f(q^2s x).
template <class F>
complex_t modn_component(F&& f, const ModulusContext& ctx, std::size_t k, complex_t x) {
    ctx.check_index(k);
    const std::size_t n = ctx.n();
    complex_t acc{0.0, 0.0};
    for (std::size_t s = 0; s < n; ++s) {
        const complex_t value = f(ctx.q2(s) * x);
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            throw evaluation_error("modn_component: function value not finite at rotated argument " +
                                   std::to_string(s));
        acc += ctx.q2bar(s * k) * value;
    }
    return acc / static_cast<double>(n);
}

namespace detail {

inline bool term_negligible(double term, double sum, std::size_t index, double z_abs, const SeriesConfig& cfg) {
    return static_cast<double>(index) >= z_abs && term <= cfg.abs_tol + cfg.rel_tol * sum;
}

} // namespace detail

/// Power-series evaluation of _s e^z (mod n). Terms are updated multiplicatively;
/// factorials are never formed.
inline complex_t modn_exp_series(const ModulusContext& ctx, std::size_t s, complex_t z, const SeriesConfig& cfg = {}) {
    ctx.check_index(s);
    cfg.validate(ctx.n());
    const std::size_t n = ctx.n();
    const double z_abs = std::abs(z);

    complex_t term{1.0, 0.0};
    for (std::size_t j = 1; j <= s; ++j) term *= z / static_cast<double>(j);
    complex_t sum = term;
    std::size_t index = s;

    for (std::size_t k = 1; k <= cfg.max_terms; ++k) {
        for (std::size_t j = 1; j <= n; ++j) term *= z / static_cast<double>(index + j);
        index += n;
        const double mag = std::abs(term);
        if (detail::term_negligible(mag, std::abs(sum), index, z_abs, cfg)) return sum;
        sum += term;
    }
    throw non_convergence("modn_exp_series: no convergence within max_terms", std::abs(term));
}

/// Root-of-unity superposition of ordinary exponentials; independent of the series path.
inline complex_t modn_exp_dft(const ModulusContext& ctx, std::size_t s, complex_t z) {
    return modn_component([](complex_t w) { return std::exp(w); }, ctx, s, z);
}

/// All n components in one pass over the exponential series.
inline std::vector<complex_t> modn_exp_all(const ModulusContext& ctx, complex_t z, const SeriesConfig& cfg = {}) {
    cfg.validate(ctx.n());
    const std::size_t n = ctx.n();
    const double z_abs = std::abs(z);

    std::vector<complex_t> sums(n, complex_t{0.0, 0.0});
    complex_t term{1.0, 0.0};
    sums[0] = term;
    // Consecutive negligible terms; n in a row means every component has converged.
    std::size_t quiet = 0;
    const std::size_t limit = cfg.max_terms * n;
    for (std::size_t m = 1; m <= limit; ++m) {
        term *= z / static_cast<double>(m);
        const std::size_t s = m % n;
        const double mag = std::abs(term);
        if (detail::term_negligible(mag, std::abs(sums[s]), m, z_abs, cfg)) {
            if (++quiet >= n) return sums;
        } else {
            quiet = 0;
        }
        sums[s] += term;
    }
    throw non_convergence("modn_exp_all: no convergence within max_terms", std::abs(term));
}

/// _s e^x divided by its leading term x^s / s!, for real x >= 0:
///
///     sum_j x^(nj) s! / (nj+s)!
///
/// Equals 1 at x = 0 and never underflows, so ratios of mod-n exponentials at
/// tiny |alpha|^2 stay well defined.
inline double modn_exp_scaled(const ModulusContext& ctx, std::size_t s, double x, const SeriesConfig& cfg = {}) {
    ctx.check_index(s);
    cfg.validate(ctx.n());
    if (!(x >= 0.0) || !std::isfinite(x)) throw invalid_argument("modn_exp_scaled: argument must be finite and >= 0");
    const std::size_t n = ctx.n();
    double term = 1.0;
    double sum = 1.0;
    std::size_t index = s;
    for (std::size_t k = 1; k <= cfg.max_terms; ++k) {
        for (std::size_t j = 1; j <= n; ++j) term *= x / static_cast<double>(index + j);
        index += n;
        if (detail::term_negligible(term, sum, index, x, cfg)) return sum;
        sum += term;
    }
    throw non_convergence("modn_exp_scaled: no convergence within max_terms", term);
}

} // namespace kaleido
