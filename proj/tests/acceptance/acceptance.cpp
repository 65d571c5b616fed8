// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <polydict/polydict.hpp>

#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace polydict;
using oracle::Mat;
using oracle::Vec;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double budget_s; // 0 = no runtime bound
    std::function<Outcome()> run;
};

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

// 1. stack(D(z) X) == stack(D(z)) X.
Outcome stacked_equivalence()
{
    Outcome o;
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> pd(1, 5), qd(1, 8), ld(1, 4), nd(1, 8);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Index p = pd(rng), q = qd(rng), lags = ld(rng), n = nd(rng);
        const auto d = oracle::random_poly(rng, p, q, lags);
        const Eigen::MatrixXd x = oracle::random_matrix(rng, q, n);
        worst = std::max(worst, oracle::rel_diff(stack(mul_scalar_right(d, x)).data, stack(d).data * x));
    }
    o.require(worst <= 1e-12, "max relative diff " + fmt(worst));
    o.detail = o.pass ? "max relative diff " + fmt(worst) : o.detail;
    return o;
}

// 2. solve_right against the per-lag normal equations, plus residual orthogonality.
Outcome pmod_update_oracle()
{
    Outcome o;
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> pd(2, 6), kd(2, 8), ld(1, 4);
    double worst = 0.0;
    double worst_orth = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Index p = pd(rng), k = kd(rng), lags = ld(rng);
        const Index n = k + 5 + pd(rng);
        const auto y = oracle::random_poly(rng, p, n, lags);
        const Eigen::MatrixXd x = oracle::random_matrix(rng, k, n);
        const auto rep = solve_right(y, x);
        o.require(!rep.rank_deficient, "full-rank X reported rank deficient");
        for (Index l = 0; l < lags; ++l) {
            const Eigen::MatrixXd ref = oracle::per_lag_update(y.lag_slice(l), x, 0.0);
            worst = std::max(worst, oracle::rel_diff(rep.solution.lag_slice(l), ref));
        }
        // Residual R = Y - D X is orthogonal to the codes: R X^T = 0 in every lag.
        const auto r = sub(y, mul_scalar_right(rep.solution, x));
        const Eigen::MatrixXd rs = stack(r).data * x.transpose();
        worst_orth = std::max(worst_orth, rs.norm() / fnorm(y));
    }
    o.require(worst <= 1e-9, "per-lag relative diff " + fmt(worst));
    o.require(worst_orth <= 1e-9, "orthogonality " + fmt(worst_orth));
    if (o.pass) {
        o.detail = "relative diff " + fmt(worst) + ", orthogonality " + fmt(worst_orth);
    }
    return o;
}

struct BruteStep {
    std::size_t atom;
    Vec coeffs;
    double residual_sq;
};

// Literal POMP on plain arrays: argmin ||d_k - r||^2 over all atoms (lowest
// index on ties), stop if it is already selected, refit, stop at k_max or eps.
std::vector<BruteStep> brute_force_pomp(const Mat& d, const Vec& y, std::size_t k_max, double eps)
{
    const std::size_t m = d.size();
    const std::size_t k = d.front().size();
    std::vector<BruteStep> steps;
    std::vector<std::size_t> support;
    Vec r = y;
    while (support.size() < k_max) {
        std::size_t best = 0;
        double best_d = INFINITY;
        for (std::size_t a = 0; a < k; ++a) {
            double dist = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                dist += (d[i][a] - r[i]) * (d[i][a] - r[i]);
            }
            if (dist < best_d) {
                best_d = dist;
                best = a;
            }
        }
        bool seen = false;
        for (auto s : support) {
            seen = seen || s == best;
        }
        if (seen) {
            break;
        }
        support.push_back(best);
        Mat sub(m, Vec(support.size()));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t s = 0; s < support.size(); ++s) {
                sub[i][s] = d[i][support[s]];
            }
        }
        const Vec x = oracle::normal_equations(sub, y);
        double sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double v = y[i];
            for (std::size_t s = 0; s < x.size(); ++s) {
                v -= sub[i][s] * x[s];
            }
            r[i] = v;
            sq += v * v;
        }
        steps.push_back({best, x, sq});
        if (sq <= eps) {
            break;
        }
    }
    return steps;
}

// 3. POMP step-by-step trace on a 3-atom, p = 2, L = 2 dictionary.
Outcome pomp_trace()
{
    Outcome o;
    Eigen::MatrixXd ds(4, 3);
    ds << 1.0, 0.0, 0.6,  //
        0.0, 1.0, 0.6,    //
        0.5, 0.0, 0.3,    //
        0.0, 0.5, -0.2;
    const auto dict = unstack({ds, 2, 2});
    const Mat dm = oracle::to_mat(ds);

    struct Case {
        Vec y;
        double eps;
    };
    const std::vector<Case> cases{{{1.0, 0.5, 0.5, 0.25}, 1e-6},
                                  {{0.9, 0.2, -0.4, 0.7}, 0.0},
                                  {{-0.3, 1.2, 0.1, 0.8}, 1e-6},
                                  {{0.6, 0.6, 0.3, -0.2}, 1e-6}};
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& cs = cases[c];
        const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(cs.y.data(), 4);
        const auto got = pomp(unstack({yv, 2, 2}), dict, {3, cs.eps});
        const auto want = brute_force_pomp(dm, cs.y, 3, cs.eps);
        const std::string tag = "case " + std::to_string(c) + ": ";
        o.require(got.steps.size() == want.size(), tag + "step count differs");
        if (!o.pass) {
            return o;
        }
        for (std::size_t s = 0; s < want.size(); ++s) {
            o.require(got.steps[s].atom == static_cast<Index>(want[s].atom), tag + "selection differs");
            o.require(got.support[s] == static_cast<Index>(want[s].atom), tag + "support differs");
            for (std::size_t a = 0; a < want[s].coeffs.size(); ++a) {
                o.require(std::abs(got.steps[s].coefficients(static_cast<Index>(a)) - want[s].coeffs[a]) <= 1e-10,
                          tag + "coefficient differs");
            }
            o.require(std::abs(got.steps[s].residual_fnorm_sq - want[s].residual_sq) <= 1e-10,
                      tag + "residual differs");
        }
    }

    // Hand-executed values for the first case: d0 first (residual 0.3125), then {d0, d1} exactly.
    const auto hand = pomp(unstack({Eigen::Vector4d(1.0, 0.5, 0.5, 0.25), 2, 2}), dict, {3, 1e-6});
    o.require(hand.steps.size() == 2 && hand.steps[0].atom == 0 && hand.steps[1].atom == 1, "hand trace support");
    o.require(std::abs(hand.steps[0].residual_fnorm_sq - 0.3125) <= 1e-12, "hand trace residual");
    o.require(std::abs(hand.coeffs(0) - 1.0) <= 1e-10 && std::abs(hand.coeffs(1) - 0.5) <= 1e-10,
              "hand trace coefficients");

    for (Index a = 0; a < 3; ++a) {
        const auto r = pomp(column(dict, a), dict, {3, 1e-6});
        o.require(r.steps.size() == 1 && r.steps[0].atom == a && r.residual_fnorm_sq <= 1e-20,
                  "exact atom " + std::to_string(a) + " not selected first with zero residual");
    }
    if (o.pass) {
        o.detail = std::to_string(cases.size()) + " traces match the brute-force execution";
    }
    return o;
}

// 4. OMP exact recovery of 3-sparse signals over a 40 x 100 stacked dictionary.
Outcome omp_recovery()
{
    Outcome o;
    std::mt19937_64 rng(404);
    Eigen::MatrixXd d = oracle::random_matrix(rng, 40, 100);
    d.colwise().normalize();
    const auto dict = unstack({d, 10, 4});
    std::uniform_int_distribution<Index> atom(0, 99);
    std::uniform_real_distribution<double> mag(1.0, 2.0);
    std::bernoulli_distribution sign(0.5);
    int recovered = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<Index> support;
        while (support.size() < 3) {
            const Index a = atom(rng);
            if (std::find(support.begin(), support.end(), a) == support.end()) {
                support.push_back(a);
            }
        }
        Eigen::VectorXd y = Eigen::VectorXd::Zero(40);
        for (Index a : support) {
            y += (sign(rng) ? 1.0 : -1.0) * mag(rng) * d.col(a);
        }
        const auto r = omp_stacked(unstack({y, 10, 4}), dict, {3, 0.0});
        bool ok = r.support.size() == 3;
        for (Index a : support) {
            ok = ok && r.support.contains(a);
        }
        ok = ok && std::sqrt(r.residual_fnorm_sq) <= 1e-8 * y.norm();
        recovered += ok ? 1 : 0;
    }
    o.require(recovered >= 95, std::to_string(recovered) + "/100 recovered");
    if (o.pass) {
        o.detail = std::to_string(recovered) + "/100 recovered";
    }
    return o;
}

// 5. Residual norms never increase across coder iterations.
Outcome residual_monotonicity()
{
    Outcome o;
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> dim(1, 5);
    int runs = 0;
    for (int t = 0; t < 100; ++t) {
        const Index p = dim(rng) + 1, lags = dim(rng), k = 4 + 3 * dim(rng);
        const auto dict = oracle::random_poly(rng, p, k, lags);
        const auto y = oracle::random_poly(rng, p, 1, lags);
        const CodeConfig cfg{std::min<Index>(k, dim(rng) + 1), 1e-12};
        for (Coder coder : {Coder::omp_stacked, Coder::pomp}) {
            try {
                const auto r = code_signal(y, dict, cfg, coder);
                double prev = fnorm_squared(y);
                for (const auto& st : r.steps) {
                    o.require(st.residual_fnorm_sq <= prev * (1.0 + 1e-12),
                              std::string(to_string(coder)) + " residual increased in run " + std::to_string(runs));
                    prev = st.residual_fnorm_sq;
                }
            } catch (const std::exception& e) {
                o.require(false, std::string("exception: ") + e.what());
            }
            ++runs;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(runs) + " runs";
    }
    return o;
}

PolyMatrix desk_training_matrix(const ExperimentConfig& cfg)
{
    return build_training_matrix(detail::make_corpus(cfg, detail::kTrainStream, cfg.train_signals),
                                 cfg.segmentation);
}

// 6. Desk-scale PMOD training reduces the error and stays finite.
Outcome training_progress()
{
    Outcome o;
    ExperimentConfig cfg = ExperimentConfig::desk();
    cfg.iterations = 20;
    const auto y = desk_training_matrix(cfg);
    o.require(y.rows() == 10 && y.cols() == 600 && y.lags() == 20, "unexpected training matrix shape");
    const auto r = train(y, cfg.train_config(), Method::pmod);
    const auto& e = r.trace.entries;
    o.require(e.size() == 20, "trace length " + std::to_string(e.size()));
    o.require(r.trace.all_finite(), "trace has non-finite values");
    o.require(e.back().error < e.front().error,
              "final " + fmt(e.back().error) + " not below first " + fmt(e.front().error));
    if (o.pass) {
        o.detail = "error " + fmt(e.front().error) + " -> " + fmt(e.back().error);
    }
    return o;
}

// 7. Denoising error falls with SNR and plateaus at high SNR for every method.
Outcome table_trend()
{
    Outcome o;
    const auto report = run_experiment(ExperimentConfig::desk());
    const auto& snrs = report.config.snr_db;
    std::ostringstream summary;
    for (std::size_t m = 0; m < report.config.methods.size(); ++m) {
        auto at = [&](double snr) {
            for (std::size_t s = 0; s < snrs.size(); ++s) {
                if (snrs[s] == snr) {
                    return report.cells[m * snrs.size() + s].mean_error;
                }
            }
            return std::nan("");
        };
        const std::string name = report.config.methods[m].name();
        const double e_m10 = at(-10), e0 = at(0), e10 = at(10), e20 = at(20), e30 = at(30);
        o.require(e_m10 > e0 && e0 > e10, name + ": ordering -10 > 0 > 10 dB fails");
        o.require(std::abs(e20 - e30) < 0.1 * e10, name + ": 20/30 dB gap not below 10% of the 10 dB value");
        o.require(e30 <= e_m10, name + ": 30 dB error above -10 dB error");
        summary << (m ? "; " : "") << name << " " << fmt(e_m10) << "/" << fmt(e0) << "/" << fmt(e10) << "/"
                << fmt(e20) << "/" << fmt(e30);
    }
    if (o.pass) {
        o.detail = summary.str();
    } else {
        o.detail += " [" + summary.str() + "]";
    }
    return o;
}

// 8. Reconstruction error identities.
Outcome metric_identities()
{
    Outcome o;
    std::mt19937_64 rng(808);
    for (int t = 0; t < 20; ++t) {
        const auto y = oracle::random_poly(rng, 3, 4, 5);
        o.require(std::abs(reconstruction_error(y, y)) <= 1e-12, "error(Y, Y) != 0");
        o.require(std::abs(reconstruction_error(y, PolyMatrix::zeros(3, 4, 5)) - 1.0) <= 1e-12, "error(Y, 0) != 1");
        o.require(std::abs(reconstruction_error(y, scale(y, 2.0)) - 1.0) <= 1e-12, "error(Y, 2Y) != 1");
    }
    return o;
}

// 9. Bit-exact round trips.
Outcome round_trips()
{
    Outcome o;
    std::mt19937_64 rng(909);
    std::uniform_int_distribution<int> dim(1, 6);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const auto m = oracle::random_poly(rng, dim(rng), dim(rng), dim(rng));
        o.require(parse_plym(to_plym_string(m)) == m, "PLYM1 round trip");
        o.require(unstack(stack(m)) == m, "stack round trip");
        const SegmentationSpec spec{dim(rng), dim(rng)};
        std::vector<double> v(static_cast<std::size_t>(spec.samples_per_column() * dim(rng)));
        for (auto& x : v) {
            x = g(rng);
        }
        o.require(desegment(segment(v, spec)) == v, "segment round trip");
    }
    return o;
}

// 10. Same config, same report bytes.
Outcome determinism()
{
    Outcome o;
    std::istringstream text("train_signals = 20\nsignal_length = 400\natoms = 12\niterations = 5\n"
                            "realizations = 2\nseed = 7\n");
    const auto cfg = parse_experiment_config(text);
    const auto a = report_csv(run_experiment(cfg));
    const auto b = report_csv(run_experiment(cfg));
    o.require(a == b, "reports differ");
    if (o.pass) {
        o.detail = std::to_string(a.size()) + " identical bytes";
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "stacked equivalence", 1.0, stacked_equivalence},
        {2, "PMOD update oracle", 5.0, pmod_update_oracle},
        {3, "POMP trace oracle", 0.0, pomp_trace},
        {4, "OMP exact recovery", 10.0, omp_recovery},
        {5, "coder residual monotonicity", 0.0, residual_monotonicity},
        {6, "training progress", 120.0, training_progress},
        {7, "denoising trend", 600.0, table_trend},
        {8, "metric identities", 0.0, metric_identities},
        {9, "round trips", 0.0, round_trips},
        {10, "determinism", 0.0, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && secs >= c.budget_s) {
            o.pass = false;
            o.detail = "took " + fmt(secs) + " s, budget " + fmt(c.budget_s) + " s; " + o.detail;
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.name << "  ("
                  << std::fixed << std::setprecision(3) << secs << " s)";
        std::cout.unsetf(std::ios::fixed);
        if (!o.detail.empty()) {
            std::cout << "  " << o.detail;
        }
        std::cout << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
