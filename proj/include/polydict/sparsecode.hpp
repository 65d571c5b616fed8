#pragma once

///
/// \file sparsecode.hpp
///
/// Greedy sparse coding of polynomial signals y(z) (p x 1) against a
/// polynomial dictionary D(z) (p x K).
///
/// Two coders are provided:
///
///  - omp_stacked: classic OMP on the stacked model. Atoms are picked by the
///    largest |<r, d_k>| / ||d_k|| over stacked vectors; atoms already in the
///    support are not candidates.
///  - pomp: polynomial OMP. The atom picked is the one with the smallest
///    F-norm distance ||d_k(z) - r(z)||_F^2 to the polynomial residual. The
///    distance is unnormalised, so selection depends on atom scale. All atoms
///    stay candidates; if the winner is already in the support, coding stops.
///
/// Both refit the coefficients over the whole support by least squares on the
/// stacked quantities after every selection, and stop after k_max atoms or
/// once the squared residual F-norm is <= epsilon. Ties go to the lowest index.
///

#include <polydict/error.hpp>
#include <polydict/lstsq.hpp>
#include <polydict/polymat.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polydict {

enum class Coder { omp_stacked, pomp };

inline std::string_view to_string(Coder c)
{
    return c == Coder::pomp ? "pomp" : "omp";
}

inline Coder parse_coder(std::string_view s)
{
    if (s == "omp" || s == "omp_stacked") {
        return Coder::omp_stacked;
    }
    if (s == "pomp") {
        return Coder::pomp;
    }
    throw ConfigError("unknown coder '" + std::string(s) + "' (expected omp or pomp)");
}

struct CodeConfig {
    Index k_max = 3;
    /// Threshold on the squared residual F-norm.
    double epsilon = 1e-6;

    void validate(Index atom_count) const
    {
        if (k_max < 1) {
            throw ConfigError("CodeConfig: k_max must be >= 1");
        }
        if (k_max > atom_count) {
            throw ConfigError("CodeConfig: k_max (" + std::to_string(k_max) + ") exceeds atom count (" +
                              std::to_string(atom_count) + ")");
        }
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
            throw ConfigError("CodeConfig: epsilon must be finite and >= 0");
        }
    }
};

/// Selected atom indices in selection order; no duplicates.
class SupportSet {
public:
    bool contains(Index k) const { return std::find(idx_.begin(), idx_.end(), k) != idx_.end(); }

    void add(Index k)
    {
        if (contains(k)) {
            throw Error("SupportSet: atom " + std::to_string(k) + " already selected");
        }
        idx_.push_back(k);
    }

    std::size_t size() const noexcept { return idx_.size(); }
    bool empty() const noexcept { return idx_.empty(); }
    Index operator[](std::size_t i) const { return idx_[i]; }
    std::span<const Index> indices() const noexcept { return idx_; }
    auto begin() const noexcept { return idx_.begin(); }
    auto end() const noexcept { return idx_.end(); }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    std::vector<Index> idx_;
};

/// One greedy iteration: the atom added, the refit coefficients (in support
/// order) and the squared residual F-norm after the refit.
struct CodeStep {
    Index atom = -1;
    Eigen::VectorXd coefficients;
    double residual_fnorm_sq = 0.0;
    bool rank_deficient = false;
};

struct CodeResult {
    Eigen::VectorXd coeffs; // length K, zero off the support
    SupportSet support;
    double residual_fnorm_sq = 0.0;
    std::vector<CodeStep> steps;
};

/// Scalar codes X (K x N) with the support of every column.
struct SparseCodeMatrix {
    Eigen::MatrixXd coeffs;
    std::vector<SupportSet> supports;
    Index k_max = 0;

    Index atoms() const noexcept { return coeffs.rows(); }
    Index signals() const noexcept { return coeffs.cols(); }
};

namespace detail {

inline constexpr double kZeroAtomNorm = 1e-14;

// Stacked dictionary shared by every column of a coding run.
struct StackedDictionary {
    Eigen::MatrixXd atoms;
    Eigen::VectorXd norms;
    Index rows_per_lag = 0;
    Index lags = 0;

    explicit StackedDictionary(const PolyMatrix& dict)
        : atoms(stack(dict).data), norms(atoms.colwise().norm().transpose()), rows_per_lag(dict.rows()),
          lags(dict.lags())
    {
        for (Index k = 0; k < norms.size(); ++k) {
            if (norms(k) < kZeroAtomNorm) {
                throw ZeroAtomError("dictionary atom " + std::to_string(k) + " has zero norm");
            }
        }
    }

    Index atom_count() const noexcept { return atoms.cols(); }

    Eigen::MatrixXd columns(const SupportSet& s) const
    {
        Eigen::MatrixXd sub(atoms.rows(), static_cast<Index>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            sub.col(static_cast<Index>(i)) = atoms.col(s[i]);
        }
        return sub;
    }
};

inline void check_signal(const PolyMatrix& y, const PolyMatrix& dict)
{
    if (y.rows() != dict.rows() || y.lags() != dict.lags()) {
        throw ShapeError("sparse coding: signal is " + std::to_string(y.rows()) + " rows x " +
                         std::to_string(y.lags()) + " lags but dictionary is " + std::to_string(dict.rows()) +
                         " rows x " + std::to_string(dict.lags()) + " lags");
    }
}

// Stacked column vector of a p x 1 polynomial matrix.
inline Eigen::VectorXd stacked_signal(const PolyMatrix& y)
{
    return Eigen::Map<const Eigen::VectorXd>(y.coefficients().data(), y.size());
}

// Refit over the current support, update the residual and record the step.
inline void refit(const Eigen::VectorXd& y, const StackedDictionary& dict, CodeResult& out, Eigen::VectorXd& residual,
                  Eigen::VectorXd& support_coeffs, bool record)
{
    const Eigen::MatrixXd sub = dict.columns(out.support);
    auto ls = solve_stacked(y, sub);
    support_coeffs = std::move(ls.solution);
    residual = y - sub * support_coeffs;
    out.residual_fnorm_sq = residual.squaredNorm();
    if (record) {
        out.steps.push_back({out.support[out.support.size() - 1], support_coeffs, out.residual_fnorm_sq,
                             ls.rank_deficient});
    }
}

inline void scatter(CodeResult& out, const Eigen::VectorXd& support_coeffs, Index atom_count)
{
    out.coeffs = Eigen::VectorXd::Zero(atom_count);
    for (std::size_t i = 0; i < out.support.size(); ++i) {
        out.coeffs(out.support[i]) = support_coeffs(static_cast<Index>(i));
    }
}

inline CodeResult omp_stacked(const Eigen::VectorXd& y, const StackedDictionary& dict, const CodeConfig& cfg,
                              bool record)
{
    CodeResult out;
    Eigen::VectorXd residual = y;
    Eigen::VectorXd support_coeffs;
    out.residual_fnorm_sq = residual.squaredNorm();

    while (static_cast<Index>(out.support.size()) < cfg.k_max && out.residual_fnorm_sq > cfg.epsilon) {
        const Eigen::VectorXd corr = (dict.atoms.transpose() * residual).cwiseAbs().cwiseQuotient(dict.norms);
        Index best = -1;
        double best_corr = 0.0;
        for (Index k = 0; k < corr.size(); ++k) {
            if (!out.support.contains(k) && (best < 0 || corr(k) > best_corr)) {
                best = k;
                best_corr = corr(k);
            }
        }
        // Residual orthogonal to every candidate: nothing left to gain.
        if (best < 0 || best_corr == 0.0) {
            break;
        }
        out.support.add(best);
        refit(y, dict, out, residual, support_coeffs, record);
    }
    scatter(out, support_coeffs, dict.atom_count());
    return out;
}

inline CodeResult pomp(const Eigen::VectorXd& y, const StackedDictionary& dict, const CodeConfig& cfg, bool record)
{
    CodeResult out;
    Eigen::VectorXd residual = y;
    Eigen::VectorXd support_coeffs;
    out.residual_fnorm_sq = residual.squaredNorm();

    for (Index j = 0; j < cfg.k_max; ++j) {
        Index best = 0;
        double best_dist = (dict.atoms.col(0) - residual).squaredNorm();
        for (Index k = 1; k < dict.atom_count(); ++k) {
            const double dist = (dict.atoms.col(k) - residual).squaredNorm();
            if (dist < best_dist) {
                best = k;
                best_dist = dist;
            }
        }
        // The refit already minimised over this support; another pass is a no-op.
        if (out.support.contains(best)) {
            break;
        }
        out.support.add(best);
        refit(y, dict, out, residual, support_coeffs, record);
        if (out.residual_fnorm_sq <= cfg.epsilon) {
            break;
        }
    }
    scatter(out, support_coeffs, dict.atom_count());
    return out;
}

inline CodeResult run_coder(Coder coder, const Eigen::VectorXd& y, const StackedDictionary& dict,
                            const CodeConfig& cfg, bool record)
{
    return coder == Coder::pomp ? pomp(y, dict, cfg, record) : omp_stacked(y, dict, cfg, record);
}

} // namespace detail

/// OMP on stack(y) against stack(dict). Records every iteration in `steps`.
inline CodeResult omp_stacked(const PolyMatrix& y, const PolyMatrix& dict, const CodeConfig& cfg)
{
    detail::check_signal(y, dict);
    if (y.cols() != 1) {
        throw ShapeError("omp_stacked: signal must be a single column");
    }
    cfg.validate(dict.cols());
    const detail::StackedDictionary sd(dict);
    return detail::omp_stacked(detail::stacked_signal(y), sd, cfg, true);
}

/// Polynomial OMP with F-norm distance selection. Records every iteration in `steps`.
inline CodeResult pomp(const PolyMatrix& y, const PolyMatrix& dict, const CodeConfig& cfg)
{
    detail::check_signal(y, dict);
    if (y.cols() != 1) {
        throw ShapeError("pomp: signal must be a single column");
    }
    cfg.validate(dict.cols());
    const detail::StackedDictionary sd(dict);
    return detail::pomp(detail::stacked_signal(y), sd, cfg, true);
}

inline CodeResult code_signal(const PolyMatrix& y, const PolyMatrix& dict, const CodeConfig& cfg, Coder coder)
{
    return coder == Coder::pomp ? pomp(y, dict, cfg) : omp_stacked(y, dict, cfg);
}

/// Codes every column of Y(z) independently.
inline SparseCodeMatrix code_matrix(const PolyMatrix& y, const PolyMatrix& dict, const CodeConfig& cfg, Coder coder)
{
    detail::check_signal(y, dict);
    cfg.validate(dict.cols());
    const detail::StackedDictionary sd(dict);
    const Eigen::MatrixXd ys = stack(y).data;

    SparseCodeMatrix out{Eigen::MatrixXd::Zero(dict.cols(), y.cols()), {}, cfg.k_max};
    out.supports.resize(static_cast<std::size_t>(y.cols()));
    for (Index j = 0; j < y.cols(); ++j) {
        try {
            auto r = detail::run_coder(coder, ys.col(j), sd, cfg, false);
            out.coeffs.col(j) = r.coeffs;
            out.supports[static_cast<std::size_t>(j)] = std::move(r.support);
        } catch (const ShapeError& e) {
            throw ShapeError("column " + std::to_string(j) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("column " + std::to_string(j) + ": " + e.what());
        }
    }
    return out;
}

/// D(z) X.
inline PolyMatrix reconstruct(const PolyMatrix& dict, const SparseCodeMatrix& codes)
{
    return mul_scalar_right(dict, codes.coeffs);
}

} // namespace polydict
