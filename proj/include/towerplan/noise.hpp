#pragma once

#include <cstdint>

namespace towerplan {

// Seeded 2D value noise. Every function is a pure function of its
// arguments, so equal inputs give bit-equal outputs on any platform.
//
// The exact procedure (normative, used by scenario generation):
//  - lattice_value(seed, xi, yi) mixes seed and the integer lattice
//    coordinates through the splitmix64 finalizer and maps the top 53 bits
//    to [0, 1).
//  - value_noise(seed, x, y) bilinearly interpolates the four surrounding
//    lattice values with smoothstep weights t*t*(3 - 2t).
//  - fbm_noise(seed, x, y, octaves) sums octave o in [0, octaves) sampled
//    at frequency 2^o and amplitude 0.5^o with per-octave seed
//    (seed + 1000*o), then divides by the summed amplitudes so the result
//    stays in [0, 1).

double lattice_value(std::uint64_t seed, std::int64_t xi, std::int64_t yi);
double value_noise(std::uint64_t seed, double x, double y);
double fbm_noise(std::uint64_t seed, double x, double y, int octaves);

} // namespace towerplan
