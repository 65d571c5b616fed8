#pragma once

// Least-squares kernels behind the dictionary update (D(z) = Y(z) X^T (X X^T)^-1)
// and the greedy coefficient refit (x = (D^T D)^-1 D^T y).
//
// Both are solved with a column-pivoted Householder QR of the design matrix
// rather than by forming and inverting the Gram matrix. When the Gram
// condition estimate exceeds kSingularGramCondition the solve falls back to a
// ridge-regularised system and the report is flagged rank_deficient.

#include <polydict/error.hpp>
#include <polydict/polymat.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace polydict {

inline constexpr double kSingularGramCondition = 1e12;
inline constexpr double kRidgeScale = 1e-10;

template <typename Solution>
struct SolveReport {
    Solution solution;
    double residual_fnorm = 0.0;
    bool rank_deficient = false;
    /// Estimated condition number of the Gram matrix (squared ratio of extreme |R_ii|).
    double gram_condition = 1.0;
    /// Ridge actually applied (0 unless rank_deficient).
    double ridge = 0.0;
};

namespace detail {

/// Column-wise min ||A Z - B||_F.
inline SolveReport<Eigen::MatrixXd> least_squares(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const Index n = a.cols();
    SolveReport<Eigen::MatrixXd> rep;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    const auto r_diag = qr.matrixQR().diagonal().cwiseAbs();
    if (a.rows() < n || r_diag.size() == 0 || r_diag(r_diag.size() - 1) == 0.0) {
        rep.gram_condition = std::numeric_limits<double>::infinity();
    } else {
        const double ratio = r_diag(0) / r_diag(r_diag.size() - 1);
        rep.gram_condition = ratio * ratio;
    }

    if (rep.gram_condition <= kSingularGramCondition) {
        rep.solution = qr.solve(b);
    } else {
        rep.rank_deficient = true;
        // trace(A^T A) = ||A||_F^2
        rep.ridge = kRidgeScale * a.squaredNorm() / static_cast<double>(n);
        if (rep.ridge == 0.0) {
            rep.solution = Eigen::MatrixXd::Zero(n, b.cols());
        } else {
            Eigen::MatrixXd aug(a.rows() + n, n);
            aug.topRows(a.rows()) = a;
            aug.bottomRows(n) = std::sqrt(rep.ridge) * Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(a.rows() + n, b.cols());
            rhs.topRows(a.rows()) = b;
            rep.solution = aug.householderQr().solve(rhs);
        }
    }
    rep.residual_fnorm = (a * rep.solution - b).norm();
    return rep;
}

} // namespace detail

///
/// Dictionary update: the p x K polynomial matrix D(z) minimising
/// ||Y(z) - D(z) X||_F^2 for fixed scalar codes X (K x N).
///
/// The polynomial F-norm separates over lags and every lag shares the same X,
/// so all lags are solved against one factorisation of X^T, with the lag
/// slices Y(l)^T as right-hand sides.
///
inline SolveReport<PolyMatrix> solve_right(const PolyMatrix& y, const Eigen::MatrixXd& x)
{
    if (x.cols() != y.cols()) {
        throw ShapeError("solve_right: Y(z) has " + std::to_string(y.cols()) + " columns but X has " +
                         std::to_string(x.cols()));
    }
    if (x.rows() < 1) {
        throw ShapeError("solve_right: X must have at least one row");
    }
    const Index p = y.rows();
    const Index lags = y.lags();

    Eigen::MatrixXd rhs(y.cols(), p * lags);
    for (Index l = 0; l < lags; ++l) {
        rhs.middleCols(l * p, p) = y.lag_slice(l).transpose();
    }
    auto ls = detail::least_squares(x.transpose(), rhs);

    std::vector<Eigen::MatrixXd> slices;
    slices.reserve(static_cast<std::size_t>(lags));
    for (Index l = 0; l < lags; ++l) {
        slices.emplace_back(ls.solution.middleCols(l * p, p).transpose());
    }
    return {PolyMatrix::from_lag_slices(slices), ls.residual_fnorm, ls.rank_deficient, ls.gram_condition,
            ls.ridge};
}

/// Coefficient refit over a support: x minimising ||y - D x||_2 for a stacked
/// signal y (length nL) and stacked sub-dictionary D (nL x s).
inline SolveReport<Eigen::VectorXd> solve_stacked(const Eigen::VectorXd& y, const Eigen::MatrixXd& d)
{
    if (d.cols() < 1) {
        throw ShapeError("solve_stacked: empty sub-dictionary");
    }
    if (d.rows() != y.size()) {
        throw ShapeError("solve_stacked: signal length " + std::to_string(y.size()) +
                         " does not match dictionary rows " + std::to_string(d.rows()));
    }
    auto ls = detail::least_squares(d, y);
    return {ls.solution.col(0), ls.residual_fnorm, ls.rank_deficient, ls.gram_condition, ls.ridge};
}

} // namespace polydict
