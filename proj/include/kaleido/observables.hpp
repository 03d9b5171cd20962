#pragma once

// Photon numbers and quadrature uncertainties of kaleidoscope states, each
// available from a closed formula in mod-n exponentials and from the Fock
// amplitudes. Units: hbar = 1, q = (a + a+)/sqrt(2), p = (a - a+)/(i sqrt(2)).

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include "kaleido/error.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/modn.hpp"

namespace kaleido {

/// |alpha|^2 _(k-1)e^(|alpha|^2) / _k e^(|alpha|^2), index k-1 taken mod n.
///
/// Both exponentials are factored into leading term times modn_exp_scaled, which
/// turns the ratio into k R_(k-1)/R_k for k >= 1 and x^n/(n-1)! R_(n-1)/R_0 for
/// k = 0. Neither form divides by |alpha|, so the kitten limit is exact.
inline double photon_number_formula(const ModulusContext& ctx, std::size_t k, complex_t alpha) {
    ctx.check_index(k);
    const std::size_t n = ctx.n();
    const double x = std::norm(alpha);
    if (x == 0.0 && k != 0)
        throw degenerate_normalization("photon_number_formula: normalization vanishes at alpha = 0 for k >= 1");
    if (n == 1) return x;
    if (k == 0) {
        double lead = 1.0; // x^n / (n-1)!
        for (std::size_t j = 1; j < n; ++j) lead *= x / static_cast<double>(j);
        lead *= x;
        return lead * modn_exp_scaled(ctx, n - 1, x) / modn_exp_scaled(ctx, 0, x);
    }
    return static_cast<double>(k) * modn_exp_scaled(ctx, k - 1, x) / modn_exp_scaled(ctx, k, x);
}

inline constexpr double kNormalizationTolerance = 1e-9;

inline void require_normalized(const StateVector& state, const char* what) {
    const double defect = std::abs(state.norm_squared() - 1.0);
    if (defect > kNormalizationTolerance)
        throw invalid_argument(std::string(what) + ": state is not normalized (|norm^2 - 1| = " +
                               std::to_string(defect) + ")");
}

/// sum_m m |amp_m|^2.
inline double photon_number_fock(const StateVector& state) {
    require_normalized(state, "photon_number_fock");
    double mean = 0.0;
    for (Eigen::Index m = 0; m < state.amps.size(); ++m) mean += static_cast<double>(m) * std::norm(state.amps(m));
    return mean;
}

struct Uncertainty {
    double delta_q = 0.0;
    double delta_p = 0.0;
    double product = 0.0;
};

/// Quadrature spreads from the truncated operator matrices.
inline Uncertainty uncertainty_product(const StateVector& state) {
    require_normalized(state, "uncertainty_product");
    certify_tail(state, 2, "uncertainty_product");
    const FockDim dim(state.dim());
    const auto [a, a_dag] = ladder_operators(dim);
    const double rt2 = std::sqrt(2.0);
    const OperatorMatrix q = (a + a_dag) / rt2;
    const OperatorMatrix p = (a - a_dag) / complex_t(0.0, rt2);
    // The truncated q*q misses the a a+ term at the top level; tail certification bounds it.
    auto spread = [&state](const OperatorMatrix& op) {
        const AmplitudeVector v = op * state.amps;
        const double mean = state.amps.dot(v).real();
        const double second = v.squaredNorm();
        return std::sqrt(std::max(second - mean * mean, 0.0));
    };
    Uncertainty u;
    u.delta_q = spread(q);
    u.delta_p = spread(p);
    u.product = u.delta_q * u.delta_p;
    return u;
}

/// Closed form (1 + 2 <N>)/2 for n >= 3. Cat states (n = 2) are eigenstates of a^2
/// and need the separate cat path.
inline double uncertainty_formula(const ModulusContext& ctx, std::size_t k, complex_t alpha) {
    if (ctx.n() < 3)
        throw unsupported_formula("uncertainty_formula holds for n >= 3 only; use cat_uncertainty_check for n = 2");
    return 0.5 * (1.0 + 2.0 * photon_number_formula(ctx, k, alpha));
}

struct CatUncertainty {
    double product_fock = 0.0;
    double mean_photons = 0.0;
    /// (1/2) sqrt((1 + 2<N>) - (alpha^2 + conj(alpha)^2)^2), absent where the radicand is negative.
    std::optional<double> printed_expression_value;
    /// (1/2) sqrt((1 + 2<N>)^2 - (alpha^2 + conj(alpha)^2)^2), the form the Fock amplitudes satisfy.
    std::optional<double> squared_expression_value;
};

inline CatUncertainty cat_uncertainty_check(complex_t alpha, std::size_t k, std::optional<FockDim> dim = {}) {
    if (k > 1) throw index_error("cat_uncertainty_check: k must be 0 or 1");
    const ModulusContext mod2(2);
    const StateVector state = kaleidoscope_state(mod2, k, alpha, dim.value_or(auto_dim(alpha)));
    CatUncertainty out;
    out.product_fock = uncertainty_product(state).product;
    out.mean_photons = photon_number_formula(mod2, k, alpha);
    const double two_re_sq = 2.0 * (alpha * alpha).real(); // alpha^2 + conj(alpha)^2
    const double lead = 1.0 + 2.0 * out.mean_photons;
    const double literal = lead - two_re_sq * two_re_sq;
    if (literal >= 0.0) out.printed_expression_value = 0.5 * std::sqrt(literal);
    const double squared = lead * lead - two_re_sq * two_re_sq;
    if (squared >= 0.0) out.squared_expression_value = 0.5 * std::sqrt(squared);
    return out;
}

struct ObservableReport {
    std::size_t n = 1;
    std::size_t k = 0;
    complex_t alpha;
    std::size_t dim = 0;
    double mean_photons_formula = 0.0;
    double mean_photons_fock = 0.0;
    double delta_q = 0.0;
    double delta_p = 0.0;
    double product = 0.0;
    std::optional<double> product_formula;
};

inline ObservableReport observe(const ModulusContext& ctx, std::size_t k, complex_t alpha, const StateVector& state) {
    ObservableReport r;
    r.n = ctx.n();
    r.k = k;
    r.alpha = alpha;
    r.dim = state.dim();
    r.mean_photons_formula = photon_number_formula(ctx, k, alpha);
    r.mean_photons_fock = photon_number_fock(state);
    const Uncertainty u = uncertainty_product(state);
    r.delta_q = u.delta_q;
    r.delta_p = u.delta_p;
    r.product = u.product;
    if (ctx.n() >= 3) r.product_formula = uncertainty_formula(ctx, k, alpha);
    return r;
}

} // namespace kaleido
