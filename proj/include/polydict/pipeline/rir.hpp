#pragma once

///
/// \file rir.hpp
///
/// Room impulse response generators.
///
/// gen_synthetic_rir: seeded white Gaussian sequence under a T60-style
/// exponential envelope exp(-3 ln(10) t / decay_s), normalised to unit peak.
///
/// gen_image_rir: shoebox image-source model with frequency-independent wall
/// reflection coefficients. Each image contributes an impulse at sample
/// floor(d / c * fs) with amplitude (product of wall reflection coefficients
/// met on the way) / (4 pi d).
///

#include <polydict/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace polydict {

/// Amplitude envelope at time t seconds; reaches 1e-3 (-60 dB) at t = decay_s.
inline double rir_envelope(double t, double decay_s)
{
    return std::exp(-3.0 * std::numbers::ln10 * t / decay_s);
}

inline std::vector<double> gen_synthetic_rir(std::size_t length, double decay_s, double fs, std::uint64_t seed)
{
    if (length == 0 || !(decay_s > 0.0) || !(fs > 0.0)) {
        throw ConfigError("gen_synthetic_rir: length, decay_s and fs must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> h(length);
    double peak = 0.0;
    for (std::size_t n = 0; n < length; ++n) {
        h[n] = gauss(rng) * rir_envelope(static_cast<double>(n) / fs, decay_s);
        peak = std::max(peak, std::abs(h[n]));
    }
    if (peak > 0.0) {
        for (auto& v : h) {
            v /= peak;
        }
    }
    return h;
}

struct ImageRoom {
    std::array<double, 3> size{5.0, 4.0, 3.0}; // metres
    std::array<double, 3> source{1.0, 1.0, 1.5};
    std::array<double, 3> mic{3.5, 2.5, 1.5};
    /// Reflection coefficients of walls x=0, x=Lx, y=0, y=Ly, z=0, z=Lz.
    std::array<double, 6> beta{0.9, 0.9, 0.9, 0.9, 0.9, 0.9};
    double c = 343.0; // m/s

    void validate() const
    {
        for (int a = 0; a < 3; ++a) {
            if (!(size[a] > 0.0)) {
                throw GeometryError("ImageRoom: room dimensions must be positive");
            }
            if (!(source[a] >= 0.0 && source[a] <= size[a]) || !(mic[a] >= 0.0 && mic[a] <= size[a])) {
                throw GeometryError("ImageRoom: source and microphone must lie inside the room");
            }
        }
        if (source == mic) {
            throw GeometryError("ImageRoom: source and microphone coincide");
        }
        for (double b : beta) {
            if (!(b >= 0.0 && b <= 1.0)) {
                throw GeometryError("ImageRoom: reflection coefficients must lie in [0, 1]");
            }
        }
        if (!(c > 0.0)) {
            throw GeometryError("ImageRoom: speed of sound must be positive");
        }
    }
};

inline std::vector<double> gen_image_rir(const ImageRoom& room, std::size_t length, double fs)
{
    room.validate();
    if (length == 0 || !(fs > 0.0)) {
        throw ConfigError("gen_image_rir: length and fs must be positive");
    }
    std::vector<double> h(length, 0.0);
    // Any image with |n_a| > bound lies farther than the longest representable path.
    const double max_dist = static_cast<double>(length) * room.c / fs;
    std::array<int, 3> bound{};
    for (int a = 0; a < 3; ++a) {
        bound[a] = static_cast<int>(std::ceil(max_dist / (2.0 * room.size[a]))) + 1;
    }

    const auto& [lx, ly, lz] = room.size;
    const auto& s = room.source;
    const auto& r = room.mic;
    const auto& b = room.beta;
    for (int nx = -bound[0]; nx <= bound[0]; ++nx) {
        for (int ny = -bound[1]; ny <= bound[1]; ++ny) {
            for (int nz = -bound[2]; nz <= bound[2]; ++nz) {
                for (int qx = 0; qx <= 1; ++qx) {
                    for (int qy = 0; qy <= 1; ++qy) {
                        for (int qz = 0; qz <= 1; ++qz) {
                            const double dx = (1 - 2 * qx) * s[0] + 2.0 * nx * lx - r[0];
                            const double dy = (1 - 2 * qy) * s[1] + 2.0 * ny * ly - r[1];
                            const double dz = (1 - 2 * qz) * s[2] + 2.0 * nz * lz - r[2];
                            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                            const double delay = std::floor(d / room.c * fs);
                            if (delay >= static_cast<double>(length)) {
                                continue;
                            }
                            const double gain = std::pow(b[0], std::abs(nx - qx)) * std::pow(b[1], std::abs(nx)) *
                                                std::pow(b[2], std::abs(ny - qy)) * std::pow(b[3], std::abs(ny)) *
                                                std::pow(b[4], std::abs(nz - qz)) * std::pow(b[5], std::abs(nz));
                            if (gain == 0.0) {
                                continue;
                            }
                            h[static_cast<std::size_t>(delay)] += gain / (4.0 * std::numbers::pi * d);
                        }
                    }
                }
            }
        }
    }
    return h;
}

/// Room with source and microphone drawn uniformly at least `margin` metres
/// from every wall and at least `margin` apart.
inline ImageRoom random_image_room(std::uint64_t seed, const ImageRoom& base = {}, double margin = 0.3)
{
    for (double extent : base.size) {
        if (!(extent > 2.0 * margin)) {
            throw GeometryError("random_image_room: room too small for the requested margin");
        }
    }
    std::mt19937_64 rng(seed);
    ImageRoom room = base;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int a = 0; a < 3; ++a) {
            std::uniform_real_distribution<double> u(margin, base.size[a] - margin);
            room.source[a] = u(rng);
            room.mic[a] = u(rng);
        }
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            d2 += (room.source[a] - room.mic[a]) * (room.source[a] - room.mic[a]);
        }
        if (d2 >= margin * margin) {
            return room;
        }
    }
    throw GeometryError("random_image_room: room too small for the requested margin");
}

} // namespace polydict
