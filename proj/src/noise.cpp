#include "towerplan/noise.hpp"

#include <cmath>

namespace towerplan {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

} // namespace

double lattice_value(std::uint64_t seed, std::int64_t xi, std::int64_t yi) {
    std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(xi)));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(yi)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(std::uint64_t seed, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto xi = static_cast<std::int64_t>(fx);
    const auto yi = static_cast<std::int64_t>(fy);
    const double tx = smoothstep(x - fx);
    const double ty = smoothstep(y - fy);

    const double v00 = lattice_value(seed, xi, yi);
    const double v10 = lattice_value(seed, xi + 1, yi);
    const double v01 = lattice_value(seed, xi, yi + 1);
    const double v11 = lattice_value(seed, xi + 1, yi + 1);

    const double top = v00 + tx * (v10 - v00);
    const double bottom = v01 + tx * (v11 - v01);
    return top + ty * (bottom - top);
}

double fbm_noise(std::uint64_t seed, double x, double y, int octaves) {
    double sum = 0.0;
    double amplitude = 1.0;
    double frequency = 1.0;
    double total_amplitude = 0.0;
    for (int o = 0; o < octaves; ++o) {
        sum += amplitude * value_noise(seed + 1000ULL * static_cast<std::uint64_t>(o),
                                       x * frequency, y * frequency);
        total_amplitude += amplitude;
        amplitude *= 0.5;
        frequency *= 2.0;
    }
    return total_amplitude > 0.0 ? sum / total_amplitude : 0.0;
}

} // namespace towerplan
