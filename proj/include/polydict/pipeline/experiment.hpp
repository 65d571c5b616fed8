#pragma once

///
/// \file experiment.hpp
///
/// Denoising experiment driver: generate a training corpus and a test signal,
/// learn one dictionary per training method, then for every SNR level and
/// realization add noise to the test matrix, denoise it with every
/// (training method, coder) pair and average the relative reconstruction
/// error.
///
/// Configs are plain `key = value` text (`#` starts a comment, arrays are
/// written `[a, b, c]`). `preset = desk|full` selects the base values; any
/// other key overrides them regardless of its position in the file.
///

#include <polydict/dictlearn.hpp>
#include <polydict/error.hpp>
#include <polydict/metrics.hpp>
#include <polydict/pipeline/denoise.hpp>
#include <polydict/pipeline/noise.hpp>
#include <polydict/pipeline/rir.hpp>
#include <polydict/pipeline/segment.hpp>
#include <polydict/plym_io.hpp>
#include <polydict/polymat.hpp>
#include <polydict/sparsecode.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace polydict {

enum class Corpus { synthetic, image };

/// A (training method, coder) pair, written "pmod+omp", "ksvd+omp", ...
struct MethodSpec {
    Method train = Method::pmod;
    Coder coder = Coder::omp_stacked;

    std::string name() const { return std::string(to_string(train)) + "+" + std::string(to_string(coder)); }

    static MethodSpec parse(std::string_view s)
    {
        const auto plus = s.find('+');
        if (plus == std::string_view::npos) {
            throw ConfigError("method '" + std::string(s) + "' must look like <pmod|ksvd>+<omp|pomp>");
        }
        return {parse_method(s.substr(0, plus)), parse_coder(s.substr(plus + 1))};
    }

    friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

struct ExperimentConfig {
    Corpus corpus = Corpus::synthetic;
    Index train_signals = 100;
    Index test_signals = 1;
    Index signal_length = 1200;
    double fs = 8000.0;
    double decay_s = 0.2;
    SegmentationSpec segmentation{10, 20};
    Index atoms = 40;
    Index sparsity = 3;
    Index iterations = 80;
    double epsilon = 1e-6;
    /// PMOD atom normalisation; unset follows TrainConfig's default for the OMP training coder.
    std::optional<bool> normalize;
    std::vector<double> snr_db{-10.0, 0.0, 10.0, 20.0, 30.0};
    Index realizations = 5;
    std::uint64_t seed = 1;
    std::vector<MethodSpec> methods{{Method::ksvd, Coder::omp_stacked},
                                    {Method::pmod, Coder::omp_stacked},
                                    {Method::pmod, Coder::pomp}};

    /// 100 training signals of 1200 samples, K = 40, 5 realizations.
    static ExperimentConfig desk() { return {}; }

    /// 1000 training signals of 14400 samples (10 x 72000 matrix, 20 lags), K = 400, 20 realizations.
    static ExperimentConfig full()
    {
        ExperimentConfig c;
        c.train_signals = 1000;
        c.signal_length = 14400;
        c.fs = 16000.0;
        c.decay_s = 0.6;
        c.atoms = 400;
        c.realizations = 20;
        return c;
    }

    TrainConfig train_config() const
    {
        TrainConfig t;
        t.atom_count = atoms;
        t.iterations = iterations;
        t.code = {sparsity, epsilon};
        t.normalize_atoms = normalize;
        t.coder = Coder::omp_stacked;
        t.seed = seed;
        return t;
    }

    void validate() const
    {
        segmentation.validate();
        if (train_signals < 1 || test_signals < 1 || realizations < 1 || iterations < 1) {
            throw ConfigError("experiment: train_signals, test_signals, realizations and iterations must be >= 1");
        }
        if (signal_length < 1 || signal_length % segmentation.samples_per_column() != 0) {
            throw ConfigError("experiment: signal_length must be a positive multiple of rows*seglen");
        }
        if (!(fs > 0.0) || !(decay_s > 0.0)) {
            throw ConfigError("experiment: fs and decay_s must be positive");
        }
        if (snr_db.empty() || methods.empty()) {
            throw ConfigError("experiment: snr_db and methods must be non-empty");
        }
        train_config().validate(train_signals * (signal_length / segmentation.samples_per_column()));
    }
};

struct ReportCell {
    std::string method;
    double snr_db = 0.0;
    double mean_error = 0.0;
    Index realizations = 0;
};

struct ExperimentReport {
    std::vector<ReportCell> cells; // method-major, SNR in config order
    Index realizations = 0;
    ExperimentConfig config;
    /// Final training error per training method name.
    std::map<std::string, double> training_error;
    double wall_ms = 0.0;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

inline std::vector<std::string> parse_array(const std::string& key, const std::string& value)
{
    if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        throw ParseError("config: '" + key + "' expects an array like [a, b]");
    }
    std::vector<std::string> out;
    std::stringstream ss(value.substr(1, value.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto t = unquote(trim(item));
        if (!t.empty()) {
            out.push_back(t);
        }
    }
    return out;
}

inline Index parse_index(const std::string& key, const std::string& value)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError("config: '" + key + "' expects an integer, got '" + value + "'");
    }
    return static_cast<Index>(v);
}

inline double parse_real(const std::string& key, const std::string& value)
{
    try {
        return parse_double(value);
    } catch (const ParseError&) {
        throw ParseError("config: '" + key + "' expects a number, got '" + value + "'");
    }
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(std::istream& is)
{
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto body = detail::trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        auto key = detail::trim(std::string_view(body).substr(0, eq));
        auto value = detail::unquote(detail::trim(std::string_view(body).substr(eq + 1)));
        for (const auto& [k, v] : entries) {
            if (k == key) {
                throw ParseError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            }
        }
        entries.emplace_back(std::move(key), std::move(value));
    }

    ExperimentConfig c = ExperimentConfig::desk();
    for (const auto& [k, v] : entries) {
        if (k == "preset") {
            if (v == "desk") {
                c = ExperimentConfig::desk();
            } else if (v == "full") {
                c = ExperimentConfig::full();
            } else {
                throw ConfigError("config: unknown preset '" + v + "' (expected desk or full)");
            }
        }
    }
    for (const auto& [k, v] : entries) {
        if (k == "preset") {
            continue;
        } else if (k == "corpus") {
            if (v == "synthetic") {
                c.corpus = Corpus::synthetic;
            } else if (v == "image") {
                c.corpus = Corpus::image;
            } else {
                throw ConfigError("config: corpus must be synthetic or image");
            }
        } else if (k == "train_signals") {
            c.train_signals = detail::parse_index(k, v);
        } else if (k == "test_signals") {
            c.test_signals = detail::parse_index(k, v);
        } else if (k == "signal_length") {
            c.signal_length = detail::parse_index(k, v);
        } else if (k == "fs") {
            c.fs = detail::parse_real(k, v);
        } else if (k == "decay_s") {
            c.decay_s = detail::parse_real(k, v);
        } else if (k == "rows") {
            c.segmentation.rows = detail::parse_index(k, v);
        } else if (k == "seglen") {
            c.segmentation.segment_len = detail::parse_index(k, v);
        } else if (k == "atoms") {
            c.atoms = detail::parse_index(k, v);
        } else if (k == "sparsity") {
            c.sparsity = detail::parse_index(k, v);
        } else if (k == "iterations") {
            c.iterations = detail::parse_index(k, v);
        } else if (k == "epsilon") {
            c.epsilon = detail::parse_real(k, v);
        } else if (k == "normalize") {
            if (v == "auto") {
                c.normalize.reset();
            } else if (v == "on") {
                c.normalize = true;
            } else if (v == "off") {
                c.normalize = false;
            } else {
                throw ConfigError("config: normalize must be auto, on or off");
            }
        } else if (k == "snr_db") {
            c.snr_db.clear();
            for (const auto& item : detail::parse_array(k, v)) {
                c.snr_db.push_back(detail::parse_real(k, item));
            }
        } else if (k == "realizations") {
            c.realizations = detail::parse_index(k, v);
        } else if (k == "seed") {
            const Index s = detail::parse_index(k, v);
            if (s < 0) {
                throw ConfigError("config: seed must be >= 0");
            }
            c.seed = static_cast<std::uint64_t>(s);
        } else if (k == "methods") {
            c.methods.clear();
            for (const auto& item : detail::parse_array(k, v)) {
                c.methods.push_back(MethodSpec::parse(item));
            }
        } else {
            throw ParseError("config: unknown key '" + k + "'");
        }
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    return parse_experiment_config(in);
}

/// Signal `index` of a corpus; unit peak magnitude for both generators.
inline std::vector<double> corpus_signal(Corpus corpus, std::size_t length, double fs, double decay_s,
                                         std::uint64_t seed)
{
    if (corpus == Corpus::synthetic) {
        return gen_synthetic_rir(length, decay_s, fs, seed);
    }
    auto h = gen_image_rir(random_image_room(seed), length, fs);
    double peak = 0.0;
    for (double v : h) {
        peak = std::max(peak, std::abs(v));
    }
    if (peak > 0.0) {
        for (auto& v : h) {
            v /= peak;
        }
    }
    return h;
}

namespace detail {

// Stream tags for derive_seed.
inline constexpr std::uint64_t kTrainStream = 1;
inline constexpr std::uint64_t kTestStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

inline std::vector<std::vector<double>> make_corpus(const ExperimentConfig& c, std::uint64_t stream, Index count)
{
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        out.push_back(corpus_signal(c.corpus, static_cast<std::size_t>(c.signal_length), c.fs, c.decay_s,
                                    derive_seed(c.seed, {stream, static_cast<std::uint64_t>(i)})));
    }
    return out;
}

template <typename F>
auto with_stage(const std::string& stage, std::uint64_t seed, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Error& e) {
        throw Error("experiment stage '" + stage + "' (seed " + std::to_string(seed) + "): " + e.what());
    }
}

// Order-independent mean: sum in sorted order.
inline double mean_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    double acc = 0.0;
    for (double x : v) {
        acc += x;
    }
    return acc / static_cast<double>(v.size());
}

} // namespace detail

/// Noise seed of realization r at SNR index s. Shared by all methods so they
/// are compared on identical noisy inputs.
inline std::uint64_t realization_seed(std::uint64_t seed, std::size_t snr_index, Index realization)
{
    return derive_seed(seed + static_cast<std::uint64_t>(realization), {detail::kNoiseStream, snr_index});
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    const PolyMatrix train_y = detail::with_stage("corpus", cfg.seed, [&] {
        return build_training_matrix(detail::make_corpus(cfg, detail::kTrainStream, cfg.train_signals),
                                     cfg.segmentation);
    });
    const PolyMatrix test = detail::with_stage("corpus", cfg.seed, [&] {
        return build_training_matrix(detail::make_corpus(cfg, detail::kTestStream, cfg.test_signals),
                                     cfg.segmentation);
    });

    ExperimentReport report;
    report.config = cfg;
    report.realizations = cfg.realizations;

    std::map<Method, PolyMatrix> dicts;
    for (const auto& m : cfg.methods) {
        if (dicts.count(m.train) != 0) {
            continue;
        }
        auto result = detail::with_stage("train " + std::string(to_string(m.train)), cfg.seed,
                                         [&] { return polydict::train(train_y, cfg.train_config(), m.train); });
        report.training_error[std::string(to_string(m.train))] = result.trace.entries.back().error;
        dicts.emplace(m.train, std::move(result.dict));
    }

    const CodeConfig code{cfg.sparsity, cfg.epsilon};
    // errors[method][snr] over realizations
    std::vector<std::vector<std::vector<double>>> errors(
        cfg.methods.size(), std::vector<std::vector<double>>(cfg.snr_db.size()));
    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
        for (Index r = 0; r < cfg.realizations; ++r) {
            const std::uint64_t noise_seed = realization_seed(cfg.seed, s, r);
            const PolyMatrix noisy =
                detail::with_stage("noise", noise_seed, [&] { return add_noise(test, {cfg.snr_db[s], noise_seed}); });
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                const auto& spec = cfg.methods[m];
                const double err = detail::with_stage("denoise " + spec.name(), noise_seed, [&] {
                    return reconstruction_error(test, denoise(noisy, dicts.at(spec.train), code, spec.coder));
                });
                errors[m][s].push_back(err);
            }
        }
    }

    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
            report.cells.push_back(
                {cfg.methods[m].name(), cfg.snr_db[s], detail::mean_of(errors[m][s]), cfg.realizations});
        }
    }
    report.wall_ms = detail::elapsed_ms(start);
    return report;
}

/// Deterministic CSV: method,snr_db,mean_error,realizations. Wall time is not written.
inline void write_report_csv(std::ostream& os, const ExperimentReport& report)
{
    os << "method,snr_db,mean_error,realizations\n";
    for (const auto& c : report.cells) {
        os << c.method << ',' << format_double(c.snr_db) << ',' << format_double(c.mean_error) << ','
           << c.realizations << '\n';
    }
}

inline std::string report_csv(const ExperimentReport& report)
{
    std::ostringstream os;
    write_report_csv(os, report);
    return os.str();
}

/// Human-readable table, errors in units of 1e-2 (methods as rows, SNR as columns).
inline void print_report_table(std::ostream& os, const ExperimentReport& report)
{
    const auto& snrs = report.config.snr_db;
    os << std::left << std::setw(12) << "method";
    for (double s : snrs) {
        os << std::right << std::setw(10) << (format_double(s) + " dB");
    }
    os << '\n';
    for (std::size_t m = 0; m < report.config.methods.size(); ++m) {
        os << std::left << std::setw(12) << report.config.methods[m].name();
        for (std::size_t s = 0; s < snrs.size(); ++s) {
            os << std::right << std::setw(10) << std::fixed << std::setprecision(2)
               << 100.0 * report.cells[m * snrs.size() + s].mean_error;
        }
        os << '\n';
    }
    os.unsetf(std::ios::fixed);
}

} // namespace polydict
