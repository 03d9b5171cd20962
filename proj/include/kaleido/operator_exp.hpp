#pragma once

// mod-n components of the exponential of a dense operator,
//
//     _s e^M = sum_k M^(nk+s)/(nk+s)!,
//
// summed term by term. The series terminates exactly for nilpotent M.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "kaleido/error.hpp"
#include "kaleido/fock.hpp"
#include "kaleido/modn.hpp"

namespace kaleido {

inline double norm_1(const OperatorMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

/// All n components. A component is finished once a term added to it has norm
/// <= rel_tol times the component's norm; the series stops when n consecutive
/// terms are finished in that sense (and the term index has passed ||M||_1,
/// so the terms are already shrinking).
inline std::vector<OperatorMatrix> operator_modn_exp_all(const OperatorMatrix& m, const ModulusContext& ctx,
                                                         double rel_tol = 1e-16, std::size_t max_terms = 10000) {
    if (m.rows() != m.cols()) throw invalid_argument("operator_modn_exp: matrix must be square");
    if (!m.allFinite()) throw invalid_argument("operator_modn_exp: matrix has non-finite entries");
    const std::size_t n = ctx.n();
    const Eigen::Index d = m.rows();
    const bool sparse = static_cast<double>((m.array() != complex_t{0.0, 0.0}).count()) <= 0.25 * d * d;
    const Eigen::SparseMatrix<complex_t> ms = m.sparseView();
    const double theta = norm_1(m);

    std::vector<OperatorMatrix> comps(n, OperatorMatrix::Zero(d, d));
    OperatorMatrix term = OperatorMatrix::Identity(d, d);
    OperatorMatrix next(d, d);
    comps[0] = term;
    std::size_t quiet = 0;
    for (std::size_t k = 1; k <= max_terms * n; ++k) {
        if (sparse)
            times_sparse(term, ms, next);
        else
            next.noalias() = term * m;
        term.swap(next);
        term /= static_cast<double>(k);
        const double tn = term.norm();
        if (tn == 0.0) return comps;
        if (!std::isfinite(tn))
            throw non_convergence("operator_modn_exp: terms overflow; reduce |alpha| or the dimension", tn);
        const std::size_t s = k % n;
        comps[s] += term;
        if (static_cast<double>(k) > theta && tn <= rel_tol * comps[s].norm()) {
            if (++quiet >= n) return comps;
        } else {
            quiet = 0;
        }
    }
    throw non_convergence("operator_modn_exp: series did not converge; reduce |alpha| or raise the order",
                          term.norm());
}

/// _s e^M (mod n) with operator argument.
inline OperatorMatrix operator_modn_exp(const OperatorMatrix& m, const ModulusContext& ctx, std::size_t s,
                                        double rel_tol = 1e-16, std::size_t max_terms = 10000) {
    ctx.check_index(s);
    return operator_modn_exp_all(m, ctx, rel_tol, max_terms)[s];
}

} // namespace kaleido
