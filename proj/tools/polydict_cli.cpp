// polydict: command-line front end for corpus generation, training, coding,
// denoising, evaluation and the SNR sweep experiment.

#include <polydict/polydict.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace polydict;

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    return out;
}

std::optional<bool> parse_normalize(const std::string& s)
{
    if (s == "on") {
        return true;
    }
    if (s == "off") {
        return false;
    }
    return std::nullopt;
}

std::string signal_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "signal_%04zu.txt", i);
    return buf;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polynomial dictionary learning and sparse coding"};
    app.require_subcommand(1);

    // gen
    std::string gen_kind = "synthetic";
    std::size_t gen_count = 1;
    std::size_t gen_length = 1200;
    double gen_fs = 8000.0;
    double gen_decay = 0.2;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate room impulse responses, one text file per signal");
    gen->add_option("--kind", gen_kind, "synthetic or image")->check(CLI::IsMember({"synthetic", "image"}));
    gen->add_option("--count", gen_count, "Number of signals")->check(CLI::PositiveNumber);
    gen->add_option("--length", gen_length, "Samples per signal")->check(CLI::PositiveNumber);
    gen->add_option("--fs", gen_fs, "Sample rate in Hz")->check(CLI::PositiveNumber);
    gen->add_option("--decay", gen_decay, "Synthetic decay time to -60 dB, seconds")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    // pack
    Index pack_rows = 10;
    Index pack_seglen = 20;
    std::string pack_out;
    std::vector<std::string> pack_inputs;
    auto* pack = app.add_subcommand("pack", "Segment signal files into one PLYM1 training matrix");
    pack->add_option("--rows", pack_rows, "Rows p of the matrix")->check(CLI::PositiveNumber);
    pack->add_option("--seglen", pack_seglen, "Segment length, i.e. number of lags")->check(CLI::PositiveNumber);
    pack->add_option("--out", pack_out, "Output PLYM1 file")->required();
    pack->add_option("inputs", pack_inputs, "Signal files")->required()->check(CLI::ExistingFile);

    // unpack
    std::string unpack_in;
    std::string unpack_out;
    std::size_t unpack_count = 1;
    auto* unpack = app.add_subcommand("unpack", "Split a packed PLYM1 matrix back into signal files");
    unpack->add_option("--in", unpack_in, "PLYM1 file")->required()->check(CLI::ExistingFile);
    unpack->add_option("--count", unpack_count, "Number of signals packed in the matrix")->check(CLI::PositiveNumber);
    unpack->add_option("--out", unpack_out, "Output directory")->required();

    // train
    std::string train_method = "pmod";
    std::string train_coder = "omp";
    Index train_atoms = 40;
    Index train_sparsity = 3;
    Index train_iters = 80;
    double train_eps = 1e-6;
    std::string train_normalize = "auto";
    std::uint64_t train_seed = 1;
    std::string train_in;
    std::string train_out;
    std::string train_trace;
    auto* trn = app.add_subcommand("train", "Learn a polynomial dictionary");
    trn->add_option("--method", train_method, "pmod or ksvd")->check(CLI::IsMember({"pmod", "ksvd"}));
    trn->add_option("--coder", train_coder, "Coder used inside PMOD: omp or pomp")
        ->check(CLI::IsMember({"omp", "pomp"}));
    trn->add_option("--atoms", train_atoms, "Dictionary size K")->check(CLI::PositiveNumber);
    trn->add_option("--sparsity", train_sparsity, "Maximum atoms per signal")->check(CLI::PositiveNumber);
    trn->add_option("--iters", train_iters, "Training iterations")->check(CLI::PositiveNumber);
    trn->add_option("--epsilon", train_eps, "Coder residual threshold")->check(CLI::NonNegativeNumber);
    trn->add_option("--normalize", train_normalize, "Normalise PMOD atoms: on, off or auto")
        ->check(CLI::IsMember({"on", "off", "auto"}));
    trn->add_option("--seed", train_seed, "Seed recorded with the run");
    trn->add_option("--in", train_in, "Training PLYM1 matrix")->required()->check(CLI::ExistingFile);
    trn->add_option("--out", train_out, "Dictionary PLYM1 output")->required();
    trn->add_option("--trace", train_trace, "Per-iteration trace CSV");

    // code / denoise share options
    std::string code_coder = "omp";
    Index code_sparsity = 3;
    double code_eps = 1e-6;
    std::string code_dict;
    std::string code_in;
    std::string code_out;
    auto add_code_options = [&](CLI::App* sub) {
        sub->add_option("--coder", code_coder, "omp or pomp")->check(CLI::IsMember({"omp", "pomp"}));
        sub->add_option("--sparsity", code_sparsity, "Maximum atoms per signal")->check(CLI::PositiveNumber);
        sub->add_option("--epsilon", code_eps, "Residual threshold")->check(CLI::NonNegativeNumber);
        sub->add_option("--dict", code_dict, "Dictionary PLYM1 file")->required()->check(CLI::ExistingFile);
        sub->add_option("--in", code_in, "Signals PLYM1 file")->required()->check(CLI::ExistingFile);
    };
    auto* code = app.add_subcommand("code", "Sparse-code every column; writes column,order,atom,coefficient CSV");
    add_code_options(code);
    code->add_option("--out", code_out, "Output CSV")->required();
    auto* den = app.add_subcommand("denoise", "Sparse-code and reconstruct every column");
    add_code_options(den);
    den->add_option("--out", code_out, "Output PLYM1 file")->required();

    // noise
    double noise_snr = 10.0;
    std::uint64_t noise_seed = 1;
    std::string noise_in;
    std::string noise_out;
    auto* noise = app.add_subcommand("noise", "Add white Gaussian noise at a given SNR");
    noise->add_option("--snr", noise_snr, "SNR in dB")->required();
    noise->add_option("--seed", noise_seed, "Noise seed");
    noise->add_option("--in", noise_in, "Clean PLYM1 file")->required()->check(CLI::ExistingFile);
    noise->add_option("--out", noise_out, "Noisy PLYM1 file")->required();

    // eval
    std::string eval_ref;
    std::string eval_est;
    auto* eval = app.add_subcommand("eval", "Print the relative squared reconstruction error");
    eval->add_option("--ref", eval_ref, "Reference PLYM1 file")->required()->check(CLI::ExistingFile);
    eval->add_option("--est", eval_est, "Estimate PLYM1 file")->required()->check(CLI::ExistingFile);

    // experiment
    std::string exp_config;
    std::string exp_out;
    auto* exp = app.add_subcommand("experiment", "Run the SNR sweep and print the error table");
    exp->add_option("--config", exp_config, "Config file (key = value); defaults to the desk preset")
        ->check(CLI::ExistingFile);
    exp->add_option("--out", exp_out, "Report CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            fs::create_directories(gen_out);
            const Corpus corpus = gen_kind == "image" ? Corpus::image : Corpus::synthetic;
            for (std::size_t i = 0; i < gen_count; ++i) {
                const auto sig = corpus_signal(corpus, gen_length, gen_fs, gen_decay, derive_seed(gen_seed, {i}));
                save_signal((fs::path(gen_out) / signal_name(i)).string(), sig);
            }
        } else if (pack->parsed()) {
            std::vector<std::vector<double>> signals;
            for (const auto& path : pack_inputs) {
                signals.push_back(load_signal(path));
            }
            save_plym(pack_out, build_training_matrix(signals, {pack_rows, pack_seglen}));
        } else if (unpack->parsed()) {
            fs::create_directories(unpack_out);
            const auto signals = split_signals(load_plym(unpack_in), static_cast<Index>(unpack_count));
            for (std::size_t i = 0; i < signals.size(); ++i) {
                save_signal((fs::path(unpack_out) / signal_name(i)).string(), signals[i]);
            }
        } else if (trn->parsed()) {
            TrainConfig cfg;
            cfg.atom_count = train_atoms;
            cfg.iterations = train_iters;
            cfg.code = {train_sparsity, train_eps};
            cfg.coder = parse_coder(train_coder);
            cfg.normalize_atoms = parse_normalize(train_normalize);
            cfg.seed = train_seed;
            const auto result = train(load_plym(train_in), cfg, parse_method(train_method));
            save_plym(train_out, result.dict);
            if (!train_trace.empty()) {
                auto out = open_out(train_trace);
                write_trace_csv(out, result.trace);
            }
            std::cout << "final training error " << format_double(result.trace.entries.back().error) << '\n';
        } else if (code->parsed()) {
            const auto codes = code_matrix(load_plym(code_in), load_plym(code_dict), {code_sparsity, code_eps},
                                           parse_coder(code_coder));
            auto out = open_out(code_out);
            out << "column,order,atom,coefficient\n";
            for (Index j = 0; j < codes.signals(); ++j) {
                const auto& support = codes.supports[static_cast<std::size_t>(j)];
                for (std::size_t s = 0; s < support.size(); ++s) {
                    out << j << ',' << s << ',' << support[s] << ',' << format_double(codes.coeffs(support[s], j))
                        << '\n';
                }
            }
        } else if (den->parsed()) {
            save_plym(code_out, denoise(load_plym(code_in), load_plym(code_dict), {code_sparsity, code_eps},
                                        parse_coder(code_coder)));
        } else if (noise->parsed()) {
            save_plym(noise_out, add_noise(load_plym(noise_in), {noise_snr, noise_seed}));
        } else if (eval->parsed()) {
            std::cout << format_double(reconstruction_error(load_plym(eval_ref), load_plym(eval_est))) << '\n';
        } else if (exp->parsed()) {
            const auto cfg = exp_config.empty() ? ExperimentConfig::desk() : load_experiment_config(exp_config);
            const auto report = run_experiment(cfg);
            print_report_table(std::cout, report);
            for (const auto& [method, err] : report.training_error) {
                std::cout << "final training error (" << method << "): " << format_double(err) << '\n';
            }
            std::cout << "wall time " << static_cast<long long>(report.wall_ms) << " ms\n";
            if (!exp_out.empty()) {
                auto out = open_out(exp_out);
                write_report_csv(out, report);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "polydict: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
