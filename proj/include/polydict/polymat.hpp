#pragma once

///
/// \file polymat.hpp
///
/// Real polynomial matrices A(z) = sum_l A(l) z^{-l} and their stacked
/// (lag-concatenated) scalar form.
///
/// A p x q polynomial matrix with L lags can be read two ways: as L scalar
/// coefficient matrices A(0), ..., A(L-1) (the lag slices), or as p x q
/// polynomial elements a_ij(z), each a length-L FIR. Storage is lag-major
/// (lag, then row, then column), so a lag slice is one contiguous row-major
/// block and an element is a strided read.
///

#include <polydict/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polydict {

using Index = Eigen::Index;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class PolyMatrix {
public:
    using ConstSlice = Eigen::Map<const RowMajorMatrix>;

    PolyMatrix() = default;

    /// Takes ownership of lag-major coefficients `coeffs[(l*rows + i)*cols + j] = a_ij(l)`.
    PolyMatrix(Index rows, Index cols, Index lags, std::vector<double> coeffs)
        : rows_(rows), cols_(cols), lags_(lags), coeffs_(std::move(coeffs))
    {
        if (rows < 1 || cols < 1 || lags < 1) {
            throw ShapeError("PolyMatrix: rows, cols and lags must all be >= 1 (got " +
                             std::to_string(rows) + "x" + std::to_string(cols) + ", " +
                             std::to_string(lags) + " lags)");
        }
        if (static_cast<Index>(coeffs_.size()) != rows * cols * lags) {
            throw ShapeError("PolyMatrix: expected " + std::to_string(rows * cols * lags) +
                             " coefficients, got " + std::to_string(coeffs_.size()));
        }
        for (double v : coeffs_) {
            if (!std::isfinite(v)) {
                throw ShapeError("PolyMatrix: coefficients must be finite");
            }
        }
    }

    static PolyMatrix zeros(Index rows, Index cols, Index lags)
    {
        return PolyMatrix(rows, cols, lags,
                          std::vector<double>(static_cast<std::size_t>(std::max<Index>(rows * cols * lags, 0)), 0.0));
    }

    /// Builds from L scalar matrices of identical shape; slice l becomes A(l).
    static PolyMatrix from_lag_slices(std::span<const Eigen::MatrixXd> slices)
    {
        if (slices.empty()) {
            throw ShapeError("PolyMatrix::from_lag_slices: need at least one lag");
        }
        const Index p = slices.front().rows();
        const Index q = slices.front().cols();
        const auto lags = static_cast<Index>(slices.size());
        std::vector<double> c(static_cast<std::size_t>(std::max<Index>(p * q * lags, 0)));
        for (Index l = 0; l < lags; ++l) {
            const auto& s = slices[static_cast<std::size_t>(l)];
            if (s.rows() != p || s.cols() != q) {
                throw ShapeError("PolyMatrix::from_lag_slices: lag slices differ in shape");
            }
            Eigen::Map<RowMajorMatrix>(c.data() + l * p * q, p, q) = s;
        }
        return PolyMatrix(p, q, lags, std::move(c));
    }

    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }
    Index lags() const noexcept { return lags_; }
    Index size() const noexcept { return rows_ * cols_ * lags_; }

    double operator()(Index i, Index j, Index l) const
    {
        return coeffs_[static_cast<std::size_t>((l * rows_ + i) * cols_ + j)];
    }

    /// Scalar coefficient matrix A(l).
    ConstSlice lag_slice(Index l) const
    {
        if (l < 0 || l >= lags_) {
            throw ShapeError("PolyMatrix::lag_slice: lag " + std::to_string(l) + " out of range");
        }
        return ConstSlice(coeffs_.data() + l * rows_ * cols_, rows_, cols_);
    }

    /// Coefficients a_ij(0..L-1) of element (i, j).
    Eigen::VectorXd element(Index i, Index j) const
    {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
            throw ShapeError("PolyMatrix::element: index out of range");
        }
        Eigen::VectorXd e(lags_);
        for (Index l = 0; l < lags_; ++l) {
            e(l) = (*this)(i, j, l);
        }
        return e;
    }

    std::span<const double> coefficients() const noexcept { return coeffs_; }

    bool same_shape(const PolyMatrix& other) const noexcept
    {
        return rows_ == other.rows_ && cols_ == other.cols_ && lags_ == other.lags_;
    }

    /// Bit-exact comparison of shape and coefficients.
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b)
    {
        return a.same_shape(b) && a.coeffs_ == b.coeffs_;
    }

private:
    Index rows_ = 0;
    Index cols_ = 0;
    Index lags_ = 0;
    std::vector<double> coeffs_;
};

/// The (rows_per_lag * lags) x cols scalar matrix [A(0); A(1); ...; A(L-1)].
struct StackedMatrix {
    Eigen::MatrixXd data;
    Index rows_per_lag = 0;
    Index lags = 0;
};

namespace detail {

inline void require_same_shape(const PolyMatrix& a, const PolyMatrix& b, const char* what)
{
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + "x" + std::to_string(a.lags()) + " vs " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + "x" +
                         std::to_string(b.lags()) + ")");
    }
}

template <typename Op>
PolyMatrix zip(const PolyMatrix& a, const PolyMatrix& b, const char* what, Op op)
{
    require_same_shape(a, b, what);
    auto ca = a.coefficients();
    auto cb = b.coefficients();
    std::vector<double> out(ca.size());
    std::transform(ca.begin(), ca.end(), cb.begin(), out.begin(), op);
    return PolyMatrix(a.rows(), a.cols(), a.lags(), std::move(out));
}

} // namespace detail

inline double fnorm_squared(const PolyMatrix& m)
{
    double acc = 0.0;
    for (double v : m.coefficients()) {
        acc += v * v;
    }
    return acc;
}

/// Polynomial Frobenius norm: sqrt of the sum of squared coefficients over all
/// elements and lags.
inline double fnorm(const PolyMatrix& m)
{
    return std::sqrt(fnorm_squared(m));
}

inline StackedMatrix stack(const PolyMatrix& m)
{
    const Index p = m.rows();
    StackedMatrix s{Eigen::MatrixXd(p * m.lags(), m.cols()), p, m.lags()};
    for (Index l = 0; l < m.lags(); ++l) {
        s.data.middleRows(l * p, p) = m.lag_slice(l);
    }
    return s;
}

inline PolyMatrix unstack(const StackedMatrix& s)
{
    if (s.rows_per_lag < 1 || s.lags < 1 || s.data.rows() % s.rows_per_lag != 0 ||
        s.data.rows() / s.rows_per_lag != s.lags) {
        throw ShapeError("unstack: " + std::to_string(s.data.rows()) + " stacked rows cannot be split into " +
                         std::to_string(s.lags) + " lags of " + std::to_string(s.rows_per_lag) + " rows");
    }
    const Index p = s.rows_per_lag;
    const Index q = s.data.cols();
    std::vector<double> c(static_cast<std::size_t>(s.data.size()));
    for (Index l = 0; l < s.lags; ++l) {
        Eigen::Map<RowMajorMatrix>(c.data() + l * p * q, p, q) = s.data.middleRows(l * p, p);
    }
    return PolyMatrix(p, q, s.lags, std::move(c));
}

/// D(z) X: every lag slice is multiplied on the right by the same scalar matrix.
inline PolyMatrix mul_scalar_right(const PolyMatrix& m, const Eigen::MatrixXd& x)
{
    if (x.rows() != m.cols()) {
        throw ShapeError("mul_scalar_right: polynomial matrix has " + std::to_string(m.cols()) +
                         " columns but scalar matrix has " + std::to_string(x.rows()) + " rows");
    }
    if (!x.allFinite()) {
        throw ShapeError("mul_scalar_right: scalar matrix has non-finite entries");
    }
    const Index p = m.rows();
    const Index r = x.cols();
    std::vector<double> c(static_cast<std::size_t>(p * r * m.lags()));
    for (Index l = 0; l < m.lags(); ++l) {
        Eigen::Map<RowMajorMatrix>(c.data() + l * p * r, p, r).noalias() = m.lag_slice(l) * x;
    }
    return PolyMatrix(p, r, m.lags(), std::move(c));
}

inline PolyMatrix add(const PolyMatrix& a, const PolyMatrix& b)
{
    return detail::zip(a, b, "add", [](double u, double v) { return u + v; });
}

inline PolyMatrix sub(const PolyMatrix& a, const PolyMatrix& b)
{
    return detail::zip(a, b, "sub", [](double u, double v) { return u - v; });
}

inline PolyMatrix scale(const PolyMatrix& m, double c)
{
    auto src = m.coefficients();
    std::vector<double> out(src.size());
    std::transform(src.begin(), src.end(), out.begin(), [c](double v) { return c * v; });
    return PolyMatrix(m.rows(), m.cols(), m.lags(), std::move(out));
}

/// Column j as a p x 1 polynomial matrix (one "signal" or one atom).
inline PolyMatrix column(const PolyMatrix& m, Index j)
{
    if (j < 0 || j >= m.cols()) {
        throw ShapeError("column: index " + std::to_string(j) + " out of range for " +
                         std::to_string(m.cols()) + " columns");
    }
    std::vector<double> c(static_cast<std::size_t>(m.rows() * m.lags()));
    std::size_t k = 0;
    for (Index l = 0; l < m.lags(); ++l) {
        for (Index i = 0; i < m.rows(); ++i) {
            c[k++] = m(i, j, l);
        }
    }
    return PolyMatrix(m.rows(), 1, m.lags(), std::move(c));
}

/// Horizontal concatenation [a, b, ...]; all parts share rows and lags.
inline PolyMatrix hcat(std::span<const PolyMatrix> parts)
{
    if (parts.empty()) {
        throw ShapeError("hcat: nothing to concatenate");
    }
    const Index p = parts.front().rows();
    const Index lags = parts.front().lags();
    Index q = 0;
    for (const auto& part : parts) {
        if (part.rows() != p || part.lags() != lags) {
            throw ShapeError("hcat: parts differ in rows or lags");
        }
        q += part.cols();
    }
    std::vector<double> c(static_cast<std::size_t>(p * q * lags));
    for (Index l = 0; l < lags; ++l) {
        Eigen::Map<RowMajorMatrix> dst(c.data() + l * p * q, p, q);
        Index offset = 0;
        for (const auto& part : parts) {
            dst.middleCols(offset, part.cols()) = part.lag_slice(l);
            offset += part.cols();
        }
    }
    return PolyMatrix(p, q, lags, std::move(c));
}

/// Columns [first, first + count) as a new polynomial matrix.
inline PolyMatrix column_range(const PolyMatrix& m, Index first, Index count)
{
    if (first < 0 || count < 1 || first + count > m.cols()) {
        throw ShapeError("column_range: [" + std::to_string(first) + ", " + std::to_string(first + count) +
                         ") out of range for " + std::to_string(m.cols()) + " columns");
    }
    const Index p = m.rows();
    std::vector<double> c(static_cast<std::size_t>(p * count * m.lags()));
    for (Index l = 0; l < m.lags(); ++l) {
        Eigen::Map<RowMajorMatrix>(c.data() + l * p * count, p, count) = m.lag_slice(l).middleCols(first, count);
    }
    return PolyMatrix(p, count, m.lags(), std::move(c));
}

} // namespace polydict
