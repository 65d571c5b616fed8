#pragma once

#include <polydict/error.hpp>
#include <polydict/polymat.hpp>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace polydict {

/// splitmix64 finaliser; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t s = mix_seed(base);
    for (auto k : keys) {
        s = mix_seed(s ^ mix_seed(k));
    }
    return s;
}

struct NoiseSpec {
    /// +infinity means no noise.
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    bool clean() const noexcept { return std::isinf(snr_db) && snr_db > 0; }
};

inline double mean_power(std::span<const double> v)
{
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return acc / static_cast<double>(v.size());
}

/// Adds white Gaussian noise scaled so that the realised noise gives exactly
/// snr_db over the whole coefficient set (power = mean squared coefficient).
inline PolyMatrix add_noise(const PolyMatrix& m, const NoiseSpec& spec)
{
    if (spec.clean()) {
        return m;
    }
    if (!std::isfinite(spec.snr_db)) {
        throw ConfigError("add_noise: snr_db must be finite or +inf");
    }
    const double signal_power = mean_power(m.coefficients());
    if (signal_power == 0.0) {
        throw ZeroSignalError("add_noise: SNR is undefined for an all-zero signal");
    }
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(static_cast<std::size_t>(m.size()));
    for (auto& v : noise) {
        v = gauss(rng);
    }
    const double noise_power = mean_power(noise);
    const double gain = std::sqrt(signal_power / (noise_power * std::pow(10.0, spec.snr_db / 10.0)));

    auto src = m.coefficients();
    for (std::size_t i = 0; i < noise.size(); ++i) {
        noise[i] = src[i] + gain * noise[i];
    }
    return PolyMatrix(m.rows(), m.cols(), m.lags(), std::move(noise));
}

/// 10 log10(P_clean / P_(noisy - clean)).
inline double measured_snr_db(const PolyMatrix& clean, const PolyMatrix& noisy)
{
    return 10.0 * std::log10(mean_power(clean.coefficients()) / mean_power(sub(noisy, clean).coefficients()));
}

} // namespace polydict
