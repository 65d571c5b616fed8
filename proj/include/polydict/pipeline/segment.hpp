#pragma once

// Layout of a 1-D signal as a polynomial matrix: the signal is cut into
// consecutive chunks of segment_len samples, each chunk becomes one
// polynomial element (sample t -> lag t), and chunks fill the matrix
// column-major (chunk s -> row s % rows, column s / rows).

#include <polydict/error.hpp>
#include <polydict/polymat.hpp>

#include <span>
#include <string>
#include <vector>

namespace polydict {

struct SegmentationSpec {
    Index rows = 10;
    Index segment_len = 20;

    Index samples_per_column() const noexcept { return rows * segment_len; }

    void validate() const
    {
        if (rows < 1 || segment_len < 1) {
            throw ConfigError("SegmentationSpec: rows and segment_len must be >= 1");
        }
    }
};

inline PolyMatrix segment(std::span<const double> signal, const SegmentationSpec& spec)
{
    spec.validate();
    const auto n = static_cast<Index>(signal.size());
    const Index per_col = spec.samples_per_column();
    if (n == 0 || n % per_col != 0) {
        throw ShapeError("segment: signal length " + std::to_string(n) + " is not a positive multiple of rows*segment_len = " +
                         std::to_string(per_col));
    }
    const Index p = spec.rows;
    const Index q = n / per_col;
    const Index lags = spec.segment_len;
    std::vector<double> c(signal.size());
    for (Index s = 0; s < p * q; ++s) {
        const Index i = s % p;
        const Index j = s / p;
        for (Index t = 0; t < lags; ++t) {
            c[static_cast<std::size_t>((t * p + i) * q + j)] = signal[static_cast<std::size_t>(s * lags + t)];
        }
    }
    return PolyMatrix(p, q, lags, std::move(c));
}

/// Inverse of segment(): rows and segment length are taken from the matrix.
inline std::vector<double> desegment(const PolyMatrix& m)
{
    const Index p = m.rows();
    const Index lags = m.lags();
    std::vector<double> out(static_cast<std::size_t>(m.size()));
    for (Index s = 0; s < p * m.cols(); ++s) {
        for (Index t = 0; t < lags; ++t) {
            out[static_cast<std::size_t>(s * lags + t)] = m(s % p, s / p, t);
        }
    }
    return out;
}

/// Horizontal concatenation of segment(signal) over all signals, in order.
inline PolyMatrix build_training_matrix(std::span<const std::vector<double>> signals, const SegmentationSpec& spec)
{
    if (signals.empty()) {
        throw ShapeError("build_training_matrix: no signals");
    }
    const std::size_t len = signals.front().size();
    std::vector<PolyMatrix> parts;
    parts.reserve(signals.size());
    for (std::size_t k = 0; k < signals.size(); ++k) {
        if (signals[k].size() != len) {
            throw ShapeError("build_training_matrix: signal " + std::to_string(k) + " has length " +
                             std::to_string(signals[k].size()) + ", expected " + std::to_string(len));
        }
        parts.push_back(segment(signals[k], spec));
    }
    return hcat(parts);
}

/// Inverse of build_training_matrix for `count` equal-length signals.
inline std::vector<std::vector<double>> split_signals(const PolyMatrix& m, Index count)
{
    if (count < 1 || m.cols() % count != 0) {
        throw ShapeError("split_signals: " + std::to_string(m.cols()) + " columns cannot be split into " +
                         std::to_string(count) + " signals");
    }
    const Index per = m.cols() / count;
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index k = 0; k < count; ++k) {
        out.push_back(desegment(column_range(m, k * per, per)));
    }
    return out;
}

} // namespace polydict
