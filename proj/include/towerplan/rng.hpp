#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace towerplan {

// Deterministic random draws on top of std::mt19937_64. The standard pins
// that engine's output sequence exactly, so all mappings from raw 64-bit
// words to doubles/ints are written out here instead of going through
// std::*_distribution (whose algorithms are implementation-defined).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in [0, bound). bound must be >= 1.
    std::uint64_t uniform_index(std::uint64_t bound) { return engine_() % bound; }

    // Gaussian via Box-Muller, one fresh pair of uniforms per draw (no
    // cached second value, keeping the draw count per call fixed).
    double normal(double mean, double sigma) {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return mean + sigma * z;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace towerplan
