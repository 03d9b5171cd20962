#pragma once

// Coordinate representation of kaleidoscope states.
//
// Physicists' Hermite polynomials (generating function e^(-z^2 + 2zx)); the
// mod-n composite exponential _k e^(-z^2+2zx) is both the root-of-unity
// superposition of Gaussians and the generating sum of H_(ns+k). Wave functions
//
//     <x|k>_alpha = e^(-x^2/2) / (pi^(1/4) sqrt(_k e^(|alpha|^2))) _k e^(-alpha^2/2 + sqrt(2) alpha x)
//
// use the complex square alpha^2; the plotted probability is |psi(x)|^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "kaleido/error.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/modn.hpp"

namespace kaleido {

struct HermiteSequence {
    double x = 0.0;
    std::vector<double> values; // H_0(x) .. H_M(x)
};

/// H_0..H_M at x by the three-term recurrence H_(m+1) = 2x H_m - 2m H_(m-1).
inline HermiteSequence hermite_values(std::size_t max_degree, double x) {
    if (!std::isfinite(x)) throw invalid_argument("hermite_values: x must be finite");
    HermiteSequence h{x, {}};
    h.values.reserve(max_degree + 1);
    h.values.push_back(1.0);
    if (max_degree >= 1) h.values.push_back(2.0 * x);
    for (std::size_t m = 1; m < max_degree; ++m) {
        const double next = 2.0 * x * h.values[m] - 2.0 * static_cast<double>(m) * h.values[m - 1];
        if (!std::isfinite(next))
            throw range_error("hermite_values: H_" + std::to_string(m + 1) + "(" + std::to_string(x) +
                              ") overflows double precision");
        h.values.push_back(next);
    }
    return h;
}

/// _k e^(-z^2 + 2zx): k-th mod-n component of w -> e^(-w^2 + 2wx) at w = z.
inline complex_t modn_gaussian_exp(const ModulusContext& ctx, std::size_t k, complex_t z, double x) {
    return modn_component([x](complex_t w) { return std::exp(-w * w + 2.0 * w * x); }, ctx, k, z);
}

inline constexpr double kMaxGeneratingArgument = 5.0;

/// sum_s z^(ns+k) H_(ns+k)(x) / (ns+k)!, summed directly.
///
/// The terms t_m = z^m H_m(x) / m! obey t_(m+1) = z/(m+1) (2x t_m - 2z t_(m-1)),
/// the Hermite recurrence carried on the scaled terms so neither H_m nor m!
/// is ever formed and large |x| cannot overflow.
inline complex_t modn_hermite_generating_sum(const ModulusContext& ctx, std::size_t k, complex_t z, double x,
                                             const SeriesConfig& cfg = {}) {
    ctx.check_index(k);
    cfg.validate(ctx.n());
    if (std::abs(z) > kMaxGeneratingArgument)
        throw invalid_argument("modn_hermite_generating_sum: |z| must be <= 5");
    if (!std::isfinite(x)) throw invalid_argument("modn_hermite_generating_sum: x must be finite");
    const std::size_t n = ctx.n();
    // Past this index every step contracts the terms.
    const double contraction = 2.0 * std::abs(z) * (std::abs(x) + std::abs(z)) + 2.0;

    complex_t prev{1.0, 0.0};          // t_0
    complex_t cur = 2.0 * x * z;       // t_1
    complex_t sum = (k == 0) ? prev : complex_t{0.0, 0.0};
    if (k == 1 % n) sum += cur;
    double peak = std::max(std::abs(prev), std::abs(cur));
    const std::size_t limit = cfg.max_terms * n;
    for (std::size_t m = 1; m < limit; ++m) {
        const complex_t next = z / static_cast<double>(m + 1) * (2.0 * x * cur - 2.0 * z * prev);
        prev = cur;
        cur = next;
        if ((m + 1) % n == k) sum += cur;
        peak = std::max(peak, std::abs(cur));
        const double floor = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(sum), peak);
        if (static_cast<double>(m) > contraction && std::abs(cur) <= floor && std::abs(prev) <= floor) return sum;
    }
    throw non_convergence("modn_hermite_generating_sum: no convergence within max_terms", std::abs(cur));
}

/// sqrt(_k e^(|alpha|^2)) as (|alpha|^k / sqrt(k!)) sqrt(R_k).
inline double kaleidoscope_norm_root(const ModulusContext& ctx, std::size_t k, complex_t alpha) {
    const double r = std::abs(alpha);
    if (r == 0.0 && k != 0)
        throw degenerate_normalization("normalization _" + std::to_string(k) + "e^(|alpha|^2) vanishes at alpha = 0");
    double lead = 1.0;
    for (std::size_t j = 1; j <= k; ++j) lead *= r / std::sqrt(static_cast<double>(j));
    return lead * std::sqrt(modn_exp_scaled(ctx, k, r * r));
}

/// <x|k>_alpha from the composite Gaussian exponential.
inline complex_t wavefunction(const ModulusContext& ctx, std::size_t k, complex_t alpha, double x) {
    ctx.check_index(k);
    const double norm_root = kaleidoscope_norm_root(ctx, k, alpha);
    const double rt2 = std::numbers::sqrt2;
    const complex_t composite =
        modn_component([x, rt2](complex_t w) { return std::exp(-0.5 * w * w + rt2 * w * x); }, ctx, k, alpha);
    const double envelope = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
    return envelope * composite / norm_root;
}

namespace detail {

/// cosh y + cos y, sinh y + sin y, cosh y - cos y, sinh y - sin y for k = 0..3.
/// Below y = 1e-4 the leading two series terms avoid cancellation.
inline double quartet_normalization(std::size_t k, double y) {
    if (y < 1e-4) {
        const double y2 = y * y;
        switch (k) {
        case 0: return 2.0 * (1.0 + y2 * y2 / 24.0);
        case 1: return 2.0 * y * (1.0 + y2 * y2 / 120.0);
        case 2: return y2 * (1.0 + y2 * y2 / 360.0);
        default: return y2 * y / 3.0 * (1.0 + y2 * y2 / 840.0);
        }
    }
    switch (k) {
    case 0: return std::cosh(y) + std::cos(y);
    case 1: return std::sinh(y) + std::sin(y);
    case 2: return std::cosh(y) - std::cos(y);
    default: return std::sinh(y) - std::sin(y);
    }
}

} // namespace detail

/// The four mod-4 (quartet) wave functions written out with cosh/cos and sinh/sin.
inline complex_t quartet_closed_form(std::size_t k, complex_t alpha, double x) {
    if (k > 3) throw index_error("quartet_closed_form: k must be in 0..3");
    const double y = std::norm(alpha);
    if (y == 0.0 && k != 0)
        throw degenerate_normalization("quartet_closed_form: normalization vanishes at alpha = 0 for k >= 1");
    const complex_t half_sq = 0.5 * alpha * alpha;
    const complex_t w = std::numbers::sqrt2 * alpha * x;
    const complex_t damp = std::exp(-half_sq);
    const complex_t grow = std::exp(half_sq);
    complex_t numerator;
    switch (k) {
    case 0: numerator = damp * std::cosh(w) + grow * std::cos(w); break;
    case 1: numerator = damp * std::sinh(w) + grow * std::sin(w); break;
    case 2: numerator = damp * std::cosh(w) - grow * std::cos(w); break;
    default: numerator = damp * std::sinh(w) - grow * std::sin(w); break;
    }
    const double prefactor = std::exp(-0.5 * x * x) / (std::numbers::sqrt2 * std::pow(std::numbers::pi, 0.25));
    return prefactor * numerator / std::sqrt(detail::quartet_normalization(k, y));
}

/// Composite Simpson rule on equally spaced samples; size must be odd and >= 3.
inline double simpson(const std::vector<double>& f, double h) {
    const std::size_t size = f.size();
    if (size < 3 || size % 2 == 0) throw invalid_argument("simpson: need an odd number (>= 3) of samples");
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < size; ++i) (i % 2 ? odd : even) += f[i];
    return h / 3.0 * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

inline constexpr double kGridCertifyTolerance = 1e-4;
inline constexpr std::size_t kDefaultGridSamples = 1201;

struct WaveFunctionGrid {
    std::vector<double> x;
    std::vector<complex_t> psi;
    std::vector<double> prob;
    std::size_t n = 1;
    std::size_t k = 0;
    complex_t alpha;
    std::size_t dim = 0;
    double integral = 0.0;
    bool certified = false;
};

/// Symmetric default range +-max(8, sqrt(2)|alpha| + 8).
inline double default_grid_half_width(complex_t alpha) {
    return std::max(8.0, std::numbers::sqrt2 * std::abs(alpha) + 8.0);
}

inline WaveFunctionGrid probability_grid(const ModulusContext& ctx, std::size_t k, complex_t alpha, double x_min,
                                         double x_max, std::size_t samples = kDefaultGridSamples) {
    ctx.check_index(k);
    if (samples < 3 || samples % 2 == 0)
        throw invalid_argument("probability_grid: samples must be odd and >= 3, got " + std::to_string(samples));
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw invalid_argument("probability_grid: need finite x_min < x_max");

    WaveFunctionGrid g;
    g.n = ctx.n();
    g.k = k;
    g.alpha = alpha;
    g.dim = auto_dim(alpha).value();
    g.x.resize(samples);
    g.psi.resize(samples);
    g.prob.resize(samples);
    const double h = (x_max - x_min) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double xi = (i + 1 == samples) ? x_max : x_min + static_cast<double>(i) * h;
        g.x[i] = xi;
        g.psi[i] = wavefunction(ctx, k, alpha, xi);
        g.prob[i] = std::norm(g.psi[i]);
    }
    g.integral = simpson(g.prob, h);
    g.certified = std::abs(g.integral - 1.0) <= kGridCertifyTolerance;
    return g;
}

} // namespace kaleido
