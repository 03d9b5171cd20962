#pragma once

// Numerical certification of the c-commutative operator identities for mod-2
// exponentials on the realization A = alpha a+, B = beta a, where
// [A, B] = -alpha beta (times the identity away from the truncation boundary).
//
// Residuals are Frobenius norms of LHS - RHS on the sub-block spanned by
// |0> .. |dim/4>; the top rows of the truncated space are polluted by the cut.

#include <cmath>
#include <complex>
#include <cstddef>
#include <iterator>
#include <string>
#include <vector>

#include "kaleido/error.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/modn.hpp"
#include "kaleido/operator_exp.hpp"

namespace kaleido {

inline constexpr double kIdentityTolerance = 1e-8;
inline constexpr double kMaxIdentityAmplitude = 2.0;
inline constexpr std::size_t kMinIdentityDim = 64;

struct IdentityReport {
    std::string identity_name;
    double residual_norm = 0.0;
    double tolerance = kIdentityTolerance;
    bool passed = false;
    FockDim dim{2};
    complex_t alpha;
    complex_t beta;
};

inline Eigen::Index certified_block_size(FockDim dim) { return dim.index() / 4 + 1; }

inline double block_residual(const OperatorMatrix& lhs, const OperatorMatrix& rhs, Eigen::Index block) {
    return (lhs - rhs).topLeftCorner(block, block).norm();
}

inline void check_identity_parameters(complex_t alpha, complex_t beta, FockDim dim) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(beta.real()) ||
        !std::isfinite(beta.imag()))
        throw invalid_argument("identity parameters must be finite");
    if (std::abs(alpha) > kMaxIdentityAmplitude || std::abs(beta) > kMaxIdentityAmplitude)
        throw unsafe_parameters("identity checks require |alpha|, |beta| <= 2 so that e^(A+B) is resolved "
                                "by the truncated space");
    if (dim.value() < kMinIdentityDim)
        throw unsafe_parameters("identity checks require dim >= 64 (certified block is the lowest quarter)");
}

/// The operators of one identity check together with their mod-2 pieces.
/// cosh/sinh of A and B come from the terminating nilpotent series.
struct CCommutingPair {
    complex_t alpha, beta;
    FockDim dim;
    OperatorMatrix a_op, b_op;
    OperatorMatrix cosh_a, sinh_a, cosh_b, sinh_b;
    complex_t commutator; // [A, B] as a scalar

    CCommutingPair(complex_t alpha_, complex_t beta_, FockDim dim_) : alpha(alpha_), beta(beta_), dim(dim_) {
        const auto [a, a_dag] = ladder_operators(dim);
        a_op = alpha * a_dag;
        b_op = beta * a;
        const ModulusContext mod2(2);
        auto ca = operator_modn_exp_all(a_op, mod2);
        auto cb = operator_modn_exp_all(b_op, mod2);
        cosh_a = std::move(ca[0]);
        sinh_a = std::move(ca[1]);
        cosh_b = std::move(cb[0]);
        sinh_b = std::move(cb[1]);
        commutator = -alpha * beta;
    }
};

enum class IdentitySuite { mod2_identities, addition, q_commutation, all };

namespace detail {

/// Every identity of the suite for one (alpha, beta, dim), residuals on |0>..|block-1>.
/// No range checks; the public entry points below validate first.
inline std::vector<IdentityReport> evaluate_identities(IdentitySuite suite, complex_t alpha, complex_t beta,
                                                       FockDim dim, Eigen::Index block) {
    const CCommutingPair p(alpha, beta, dim);
    const ModulusContext mod2(2);
    const complex_t down = std::exp(-0.5 * p.commutator);
    const complex_t up = std::exp(0.5 * p.commutator);

    // Only the leading block x block corner of each product is ever compared.
    auto corner = [block](const OperatorMatrix& x, const OperatorMatrix& y) -> OperatorMatrix {
        return x.topRows(block) * y.leftCols(block);
    };
    const OperatorMatrix ca_cb = corner(p.cosh_a, p.cosh_b), cb_ca = corner(p.cosh_b, p.cosh_a);
    const OperatorMatrix sa_sb = corner(p.sinh_a, p.sinh_b), sb_sa = corner(p.sinh_b, p.sinh_a);
    const OperatorMatrix ca_sb = corner(p.cosh_a, p.sinh_b), sb_ca = corner(p.sinh_b, p.cosh_a);
    const OperatorMatrix sa_cb = corner(p.sinh_a, p.cosh_b), cb_sa = corner(p.cosh_b, p.sinh_a);

    std::vector<IdentityReport> out;
    auto add = [&](const char* name, const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
        IdentityReport r;
        r.identity_name = name;
        r.residual_norm = (lhs - rhs).norm();
        r.tolerance = kIdentityTolerance;
        r.passed = r.residual_norm <= r.tolerance;
        r.dim = dim;
        r.alpha = alpha;
        r.beta = beta;
        out.push_back(std::move(r));
    };

    const bool mod2_rules = suite == IdentitySuite::mod2_identities || suite == IdentitySuite::all;
    const bool addition = suite == IdentitySuite::addition || suite == IdentitySuite::all;
    OperatorMatrix plus0, plus1;
    if (mod2_rules || addition) {
        const auto plus = operator_modn_exp_all(p.a_op + p.b_op, mod2);
        plus0 = plus[0].topLeftCorner(block, block);
        plus1 = plus[1].topLeftCorner(block, block);
    }

    if (mod2_rules) {
        add("mod2_factorization_s0", plus0, (ca_cb + sa_sb) * down);
        add("mod2_factorization_s1", plus1, (ca_sb + sa_cb) * down);
        const complex_t ch = std::cosh(p.commutator);
        const complex_t sh = std::sinh(p.commutator);
        add("exchange_cosh_cosh", ca_cb, ch * cb_ca + sh * sb_sa);
        add("exchange_sinh_sinh", sa_sb, ch * sb_sa + sh * cb_ca);
        add("exchange_cosh_sinh", ca_sb, ch * sb_ca + sh * cb_sa);
        add("exchange_sinh_cosh", sa_cb, ch * cb_sa + sh * sb_ca);
    }
    if (suite == IdentitySuite::q_commutation || suite == IdentitySuite::all) {
        // e^A e^B and e^B e^A expanded into the cosh/sinh products.
        add("q_commutation", ca_cb + ca_sb + sa_cb + sa_sb, std::exp(p.commutator) * (cb_ca + cb_sa + sb_ca + sb_sa));
    }
    if (addition) {
        // In the sinh rules the cosh A factor multiplies sinh B from the left.
        const auto minus = operator_modn_exp_all(p.a_op - p.b_op, mod2);
        add("addition_cosh_plus", plus0, (ca_cb + sa_sb) * down);
        add("addition_cosh_minus", minus[0].topLeftCorner(block, block), (ca_cb - sa_sb) * up);
        add("addition_sinh_plus", plus1, (sa_cb + ca_sb) * down);
        add("addition_sinh_minus", minus[1].topLeftCorner(block, block), (sa_cb - ca_sb) * up);
    }
    return out;
}

inline std::vector<IdentityReport> pick(std::vector<IdentityReport> all, std::size_t first, std::size_t count) {
    return {std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(first)),
            std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(first + count))};
}

} // namespace detail

/// The suite with residuals on the certified block |0>..|dim/4>.
inline std::vector<IdentityReport> run_identity_suite(IdentitySuite suite, complex_t alpha, complex_t beta,
                                                      FockDim dim) {
    check_identity_parameters(alpha, beta, dim);
    return detail::evaluate_identities(suite, alpha, beta, dim, certified_block_size(dim));
}

/// _0 e^(A+B) = (_0e^A _0e^B + _1e^A _1e^B) e^(-[A,B]/2) and the s = 1 analogue.
inline std::vector<IdentityReport> verify_mod2_factorization(complex_t alpha, complex_t beta, FockDim dim) {
    return detail::pick(run_identity_suite(IdentitySuite::mod2_identities, alpha, beta, dim), 0, 2);
}

/// cosh A cosh B = cosh B cosh A cosh[A,B] + sinh B sinh A sinh[A,B] and the other three.
inline std::vector<IdentityReport> verify_exchange_identities(complex_t alpha, complex_t beta, FockDim dim) {
    return detail::pick(run_identity_suite(IdentitySuite::mod2_identities, alpha, beta, dim), 2, 4);
}

/// e^A e^B = e^([A,B]) e^B e^A.
inline IdentityReport verify_q_commutation(complex_t alpha, complex_t beta, FockDim dim) {
    return run_identity_suite(IdentitySuite::q_commutation, alpha, beta, dim).front();
}

/// cosh(A +- B), sinh(A +- B) with the e^(-+[A,B]/2) factors.
inline std::vector<IdentityReport> verify_addition_formulas(complex_t alpha, complex_t beta, FockDim dim) {
    return run_identity_suite(IdentitySuite::addition, alpha, beta, dim);
}

/// The factorized mod-2 displacement operators
///
///     _0D(alpha) = e^(-|alpha|^2/2) (cosh(alpha a+) cosh(conj(alpha) a) - sinh(alpha a+) sinh(conj(alpha) a)),
///     _1D(alpha) = e^(-|alpha|^2/2) (sinh(alpha a+) cosh(conj(alpha) a) - cosh(alpha a+) sinh(conj(alpha) a)),
///
/// obtained from the mod-2 factorization with A = alpha a+, B = -conj(alpha) a.
inline OperatorMatrix factorized_cat_displacement(std::size_t k, complex_t alpha, FockDim dim) {
    if (k > 1) throw index_error("factorized_cat_displacement: k must be 0 or 1");
    const CCommutingPair p(alpha, -std::conj(alpha), dim);
    const complex_t bch = std::exp(-0.5 * p.commutator);
    if (k == 0) return (p.cosh_a * p.cosh_b + p.sinh_a * p.sinh_b) * bch;
    return (p.cosh_a * p.sinh_b + p.sinh_a * p.cosh_b) * bch;
}

} // namespace kaleido
