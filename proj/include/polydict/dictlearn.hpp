#pragma once

///
/// \file dictlearn.hpp
///
/// Polynomial dictionary learning.
///
/// pmod_train alternates sparse coding of every training column with the
/// polynomial least-squares dictionary update D(z) = Y(z) X^T (X X^T)^-1,
/// starting from the first K training columns.
///
/// ksvd_stacked_train is the baseline: ordinary K-SVD on the stacked
/// coefficient matrix [Y(0); ...; Y(L-1)], unstacked at the end.
///

#include <polydict/error.hpp>
#include <polydict/lstsq.hpp>
#include <polydict/metrics.hpp>
#include <polydict/plym_io.hpp>
#include <polydict/polymat.hpp>
#include <polydict/sparsecode.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace polydict {

enum class Method { pmod, ksvd };

inline std::string_view to_string(Method m)
{
    return m == Method::ksvd ? "ksvd" : "pmod";
}

inline Method parse_method(std::string_view s)
{
    if (s == "pmod") {
        return Method::pmod;
    }
    if (s == "ksvd" || s == "ksvd_stacked") {
        return Method::ksvd;
    }
    throw ConfigError("unknown training method '" + std::string(s) + "' (expected pmod or ksvd)");
}

struct TrainConfig {
    Index atom_count = 400;
    Index iterations = 80;
    CodeConfig code{3, 1e-6};
    /// Unset means: on for coder == pomp, off for coder == omp_stacked.
    std::optional<bool> normalize_atoms;
    /// Coder used inside the training loop. omp_stacked is the standard choice;
    /// pomp in the loop is an experimental extension.
    Coder coder = Coder::omp_stacked;
    std::uint64_t seed = 0;

    bool normalize() const { return normalize_atoms.value_or(coder == Coder::pomp); }

    void validate(Index training_columns) const
    {
        if (atom_count < 1) {
            throw ConfigError("TrainConfig: atom_count must be >= 1");
        }
        if (atom_count > training_columns) {
            throw ConfigError("TrainConfig: atom_count (" + std::to_string(atom_count) +
                              ") exceeds the number of training columns (" + std::to_string(training_columns) + ")");
        }
        if (iterations < 1) {
            throw ConfigError("TrainConfig: iterations must be >= 1");
        }
        code.validate(atom_count);
    }
};

struct TraceEntry {
    Index iteration = 0;
    /// Relative training error after the dictionary update, using the latest codes.
    double error = 0.0;
    bool rank_deficient = false;
    /// Atoms no training column used this iteration (kept in PMOD, replaced in K-SVD).
    Index unused_atoms = 0;
    /// Atoms whose update came out with zero norm (previous atom kept).
    Index zero_norm_atoms = 0;
    double millis = 0.0;
};

struct TrainTrace {
    std::vector<TraceEntry> entries;

    bool all_finite() const
    {
        return std::all_of(entries.begin(), entries.end(),
                           [](const TraceEntry& e) { return std::isfinite(e.error) && std::isfinite(e.millis); });
    }
};

inline void write_trace_csv(std::ostream& os, const TrainTrace& trace)
{
    os << "iteration,error,rank_deficient,unused_atoms,zero_norm_atoms,millis\n";
    for (const auto& e : trace.entries) {
        os << e.iteration << ',' << format_double(e.error) << ',' << (e.rank_deficient ? 1 : 0) << ','
           << e.unused_atoms << ',' << e.zero_norm_atoms << ',' << format_double(e.millis) << '\n';
    }
}

struct TrainResult {
    PolyMatrix dict;
    SparseCodeMatrix codes;
    TrainTrace trace;
};

/// State handed to an observer after each PMOD update.
struct PmodIterate {
    Index iteration;
    const PolyMatrix& dict_before;
    const Eigen::MatrixXd& codes; // X used for the update, before any atom rescaling
    const SolveReport<PolyMatrix>& update;
    const PolyMatrix& dict_after;
};

using PmodObserver = std::function<void(const PmodIterate&)>;

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline Eigen::MatrixXd initial_stacked_atoms(const Eigen::MatrixXd& ys, Index k)
{
    Eigen::MatrixXd d = ys.leftCols(k);
    for (Index j = 0; j < k; ++j) {
        if (d.col(j).norm() < kZeroAtomNorm) {
            throw ZeroAtomError("initial dictionary: training column " + std::to_string(j) +
                                " is zero and cannot seed an atom");
        }
    }
    return d;
}

} // namespace detail

inline TrainResult pmod_train(const PolyMatrix& y, const TrainConfig& cfg, const PmodObserver& observer = {})
{
    cfg.validate(y.cols());
    const Index k = cfg.atom_count;
    const bool normalize = cfg.normalize();

    PolyMatrix dict = column_range(y, 0, k);
    detail::initial_stacked_atoms(stack(dict).data, k);

    TrainResult out;
    out.trace.entries.reserve(static_cast<std::size_t>(cfg.iterations));
    for (Index it = 1; it <= cfg.iterations; ++it) {
        const auto start = std::chrono::steady_clock::now();
        TraceEntry entry;
        entry.iteration = it;

        SparseCodeMatrix codes = code_matrix(y, dict, cfg.code, cfg.coder);
        const Eigen::MatrixXd x_used = codes.coeffs;
        const auto update = solve_right(y, x_used);
        entry.rank_deficient = update.rank_deficient;

        // Unused atoms (zero rows of X) and degenerate updates keep the previous atom.
        StackedMatrix next = stack(update.solution);
        const Eigen::MatrixXd prev = stack(dict).data;
        for (Index a = 0; a < k; ++a) {
            if (codes.coeffs.row(a).isZero(0.0)) {
                ++entry.unused_atoms;
                next.data.col(a) = prev.col(a);
            } else if (next.data.col(a).norm() < detail::kZeroAtomNorm) {
                ++entry.zero_norm_atoms;
                next.data.col(a) = prev.col(a);
            }
        }
        if (normalize) {
            for (Index a = 0; a < k; ++a) {
                const double n = next.data.col(a).norm();
                if (n >= detail::kZeroAtomNorm) {
                    next.data.col(a) /= n;
                    codes.coeffs.row(a) *= n;
                }
            }
        }
        PolyMatrix updated = unstack(next);
        if (observer) {
            observer(PmodIterate{it, dict, x_used, update, updated});
        }
        dict = std::move(updated);

        entry.error = reconstruction_error(y, reconstruct(dict, codes));
        entry.millis = detail::elapsed_ms(start);
        out.trace.entries.push_back(entry);
        out.codes = std::move(codes);
    }
    out.dict = std::move(dict);
    return out;
}

namespace detail {

// Dominant singular pair with a fixed sign: the largest-magnitude entry of u is positive.
inline void rank_one(const Eigen::MatrixXd& e, Eigen::VectorXd& u, double& sigma, Eigen::VectorXd& v)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU().col(0);
    v = svd.matrixV().col(0);
    sigma = svd.singularValues()(0);
    Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u(imax) < 0.0) {
        u = -u;
        v = -v;
    }
}

} // namespace detail

inline TrainResult ksvd_stacked_train(const PolyMatrix& y, const TrainConfig& cfg)
{
    cfg.validate(y.cols());
    const Index k = cfg.atom_count;
    const Index n = y.cols();
    const Eigen::MatrixXd ys = stack(y).data;

    Eigen::MatrixXd d = detail::initial_stacked_atoms(ys, k);
    d.colwise().normalize();

    TrainResult out;
    out.trace.entries.reserve(static_cast<std::size_t>(cfg.iterations));
    for (Index it = 1; it <= cfg.iterations; ++it) {
        const auto start = std::chrono::steady_clock::now();
        TraceEntry entry;
        entry.iteration = it;

        SparseCodeMatrix codes = code_matrix(y, unstack({d, y.rows(), y.lags()}), cfg.code, cfg.coder);
        Eigen::MatrixXd& x = codes.coeffs;
        Eigen::MatrixXd residual = ys - d * x;

        // Replacement candidates, worst represented first (lowest index on ties).
        std::vector<Index> worst(static_cast<std::size_t>(n));
        std::iota(worst.begin(), worst.end(), Index{0});
        const Eigen::VectorXd col_err = residual.colwise().squaredNorm().transpose();
        std::stable_sort(worst.begin(), worst.end(), [&](Index a, Index b) { return col_err(a) > col_err(b); });
        std::size_t next_candidate = 0;

        for (Index a = 0; a < k; ++a) {
            std::vector<Index> omega;
            for (Index j = 0; j < n; ++j) {
                if (x(a, j) != 0.0) {
                    omega.push_back(j);
                }
            }
            if (omega.empty()) {
                ++entry.unused_atoms;
                while (next_candidate < worst.size()) {
                    const Index j = worst[next_candidate++];
                    const double norm = ys.col(j).norm();
                    if (norm >= detail::kZeroAtomNorm) {
                        d.col(a) = ys.col(j) / norm;
                        break;
                    }
                }
                continue;
            }
            const auto m = static_cast<Index>(omega.size());
            Eigen::MatrixXd e(ys.rows(), m);
            for (Index i = 0; i < m; ++i) {
                const Index j = omega[static_cast<std::size_t>(i)];
                e.col(i) = residual.col(j) + d.col(a) * x(a, j);
            }
            Eigen::VectorXd u;
            Eigen::VectorXd v;
            double sigma = 0.0;
            detail::rank_one(e, u, sigma, v);
            d.col(a) = u;
            for (Index i = 0; i < m; ++i) {
                const Index j = omega[static_cast<std::size_t>(i)];
                x(a, j) = sigma * v(i);
                residual.col(j) = e.col(i) - u * x(a, j);
            }
        }

        entry.error = (ys - d * x).squaredNorm() / ys.squaredNorm();
        entry.millis = detail::elapsed_ms(start);
        out.trace.entries.push_back(entry);
        out.codes = std::move(codes);
    }
    out.dict = unstack({d, y.rows(), y.lags()});
    return out;
}

inline TrainResult train(const PolyMatrix& y, const TrainConfig& cfg, Method method)
{
    return method == Method::ksvd ? ksvd_stacked_train(y, cfg) : pmod_train(y, cfg);
}

} // namespace polydict
