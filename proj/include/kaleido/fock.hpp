#pragma once

// Truncated Fock space {|0>, ..., |N>}: ladder operators, coherent states,
// displacement operators and the kaleidoscope states
//
//     |k>_alpha = _k e^(alpha a+) |0> / sqrt(_k e^(|alpha|^2))     (mod n).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "kaleido/error.hpp"
#include "kaleido/modn.hpp"

namespace kaleido {

using OperatorMatrix = Eigen::MatrixXcd;
using AmplitudeVector = Eigen::VectorXcd;

/// Basis size N + 1 of the truncated Fock space.
class FockDim {
public:
    explicit FockDim(std::size_t dim) : dim_(dim) {
        if (dim < 2) throw invalid_argument("Fock dimension must be >= 2, got " + std::to_string(dim));
    }
    std::size_t value() const noexcept { return dim_; }
    Eigen::Index index() const noexcept { return static_cast<Eigen::Index>(dim_); }
    friend bool operator==(FockDim, FockDim) = default;

private:
    std::size_t dim_;
};

/// Tail mass above which a truncated state is rejected.
inline constexpr double kTailTolerance = 1e-10;
inline constexpr std::size_t kMinAutoDim = 16;
inline constexpr std::size_t kMaxAutoDim = 512;

/// ceil(|alpha|^2 + 8|alpha| + 16) clamped to [16, 512]: mean plus eight
/// Poisson standard deviations of the displaced vacuum.
inline FockDim auto_dim(complex_t alpha, std::size_t cap = kMaxAutoDim) {
    const double r = std::abs(alpha);
    const double want = std::ceil(r * r + 8.0 * r + 16.0);
    const double hi = static_cast<double>(std::min(cap, kMaxAutoDim));
    const double clamped = std::clamp(want, static_cast<double>(kMinAutoDim), std::max(hi, 2.0));
    return FockDim(static_cast<std::size_t>(clamped));
}

struct StateVector {
    AmplitudeVector amps;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps.size()); }
    double norm_squared() const { return amps.squaredNorm(); }

    /// Probability carried by the top `levels` basis states.
    double tail_mass(std::size_t levels = 2) const {
        const Eigen::Index count = std::min<Eigen::Index>(static_cast<Eigen::Index>(levels), amps.size());
        return amps.tail(count).squaredNorm();
    }

    static StateVector basis(std::size_t m, FockDim dim) {
        if (m >= dim.value()) throw index_error("basis level " + std::to_string(m) + " outside truncated space");
        StateVector v{AmplitudeVector::Zero(dim.index())};
        v.amps(static_cast<Eigen::Index>(m)) = 1.0;
        return v;
    }
};

inline void certify_tail(const StateVector& state, std::size_t levels, const char* what) {
    const double tail = state.tail_mass(levels);
    if (tail > kTailTolerance)
        throw truncation_error(std::string(what) + ": tail mass " + std::to_string(tail) +
                                   " exceeds tolerance at dim " + std::to_string(state.dim()) +
                                   "; increase the Fock dimension",
                               tail);
}

/// Annihilation and creation matrices: a|m> = sqrt(m)|m-1>, a+|m> = sqrt(m+1)|m+1>.
inline std::pair<OperatorMatrix, OperatorMatrix> ladder_operators(FockDim dim) {
    const Eigen::Index d = dim.index();
    OperatorMatrix a = OperatorMatrix::Zero(d, d);
    for (Eigen::Index m = 1; m < d; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
    OperatorMatrix a_dag = a.adjoint();
    return {std::move(a), std::move(a_dag)};
}

inline OperatorMatrix number_operator(FockDim dim) {
    OperatorMatrix nop = OperatorMatrix::Zero(dim.index(), dim.index());
    for (Eigen::Index m = 0; m < dim.index(); ++m) nop(m, m) = static_cast<double>(m);
    return nop;
}

/// out = x * s, one column axpy per stored entry of s.
inline void times_sparse(const OperatorMatrix& x, const Eigen::SparseMatrix<complex_t>& s, OperatorMatrix& out) {
    out.setZero(x.rows(), s.cols());
    for (Eigen::Index j = 0; j < s.outerSize(); ++j)
        for (Eigen::SparseMatrix<complex_t>::InnerIterator it(s, j); it; ++it) out.col(j) += x.col(it.row()) * it.value();
}

/// exp(M) for a nilpotent M by its terminating series. Products use the sparse
/// pattern of M, so the cost stays at O(dim^2) per term for banded operators.
inline OperatorMatrix nilpotent_exp(const OperatorMatrix& m) {
    const Eigen::Index d = m.rows();
    const Eigen::SparseMatrix<complex_t> sparse = m.sparseView();
    OperatorMatrix result = OperatorMatrix::Identity(d, d);
    OperatorMatrix term = OperatorMatrix::Identity(d, d);
    OperatorMatrix next(d, d);
    for (Eigen::Index j = 1; j <= d; ++j) {
        times_sparse(term, sparse, next);
        term.swap(next);
        term /= static_cast<double>(j);
        if (term.isZero(0.0)) break;
        result += term;
    }
    return result;
}

/// |alpha> with amplitudes e^(-|alpha|^2/2) alpha^m / sqrt(m!), built by recurrence.
inline StateVector coherent_state(complex_t alpha, FockDim dim) {
    const Eigen::Index d = dim.index();
    StateVector state{AmplitudeVector::Zero(d)};
    complex_t amp = std::exp(-0.5 * std::norm(alpha));
    state.amps(0) = amp;
    for (Eigen::Index m = 1; m < d; ++m) {
        amp *= alpha / std::sqrt(static_cast<double>(m));
        state.amps(m) = amp;
    }
    certify_tail(state, 2, "coherent_state");
    return state;
}

/// D(alpha) = e^(-|alpha|^2/2) exp(alpha a+) exp(-conj(alpha) a).
///
/// Both factors are nilpotent on the truncated space. The product is not exactly
/// unitary; the defect lives in the top rows and is left visible.
inline OperatorMatrix displacement_operator(complex_t alpha, FockDim dim) {
    const auto [a, a_dag] = ladder_operators(dim);
    const OperatorMatrix up = nilpotent_exp(alpha * a_dag);
    const OperatorMatrix down = nilpotent_exp(-std::conj(alpha) * a);
    return std::exp(-0.5 * std::norm(alpha)) * (up * down);
}

/// _k D(alpha) = (1/n) sum_j conj(q^2j)^k D(q^2j alpha). Not unitary.
inline OperatorMatrix modn_displacement(const ModulusContext& ctx, std::size_t k, complex_t alpha, FockDim dim) {
    ctx.check_index(k);
    const std::size_t n = ctx.n();
    OperatorMatrix acc = OperatorMatrix::Zero(dim.index(), dim.index());
    for (std::size_t j = 0; j < n; ++j) acc += ctx.q2bar(j * k) * displacement_operator(ctx.q2(j) * alpha, dim);
    return acc / static_cast<double>(n);
}

/// Normalized kaleidoscope state |k>_alpha (mod n).
///
/// The normalization _k e^(|alpha|^2) is taken from the scalar series, factored
/// as (|alpha|^2)^k / k! times modn_exp_scaled, so that
///
///     amp_(ns+k) = (alpha/|alpha|)^k alpha^(ns) sqrt(k!/(ns+k)!) / sqrt(R_k).
///
/// The vector is not renormalized: its norm checks the formula. The top
/// max(2, n) levels are certified, since for n > 2 the top two levels can both
/// lie outside the support class.
inline StateVector kaleidoscope_state(const ModulusContext& ctx, std::size_t k, complex_t alpha, FockDim dim) {
    ctx.check_index(k);
    const std::size_t n = ctx.n();
    const double r = std::abs(alpha);
    const Eigen::Index d = dim.index();
    StateVector state{AmplitudeVector::Zero(d)};

    if (r == 0.0) {
        if (k != 0)
            throw degenerate_normalization("kaleidoscope_state: normalization _" + std::to_string(k) +
                                           "e^(|alpha|^2) vanishes at alpha = 0");
        state.amps(0) = 1.0;
        return state;
    }
    if (static_cast<Eigen::Index>(k) >= d)
        throw truncation_error("kaleidoscope_state: component " + std::to_string(k) + " outside truncated space", 1.0);

    const double scaled_norm = modn_exp_scaled(ctx, k, r * r);
    const complex_t phase = alpha / r;
    complex_t amp = 1.0 / std::sqrt(scaled_norm);
    for (std::size_t j = 0; j < k; ++j) amp *= phase;
    state.amps(static_cast<Eigen::Index>(k)) = amp;
    for (Eigen::Index m = static_cast<Eigen::Index>(k) + 1; m < d; ++m) {
        amp *= alpha / std::sqrt(static_cast<double>(m));
        if (static_cast<std::size_t>(m) % n == k) state.amps(m) = amp;
    }
    certify_tail(state, std::max<std::size_t>(2, n), "kaleidoscope_state");
    return state;
}

} // namespace kaleido
