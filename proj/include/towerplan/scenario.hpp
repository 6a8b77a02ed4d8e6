#pragma once

#include "towerplan/grid.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace towerplan {

// Min/max ranges used by feature normalization. pop_density comes from the
// generated field; the frequency and EIRP ranges are generation knobs
// recorded here so features stay reproducible from the scenario alone.
struct NormStats {
    double pop_density_min = 0.0;
    double pop_density_max = 1.0;
    double frequency_mhz_min = 700.0;
    double frequency_mhz_max = 3500.0;
    double eirp_dbm_min = 10.0;
    double eirp_dbm_max = 60.0;

    bool operator==(const NormStats&) const = default;
};

// Knobs for synthetic-world generation. Scales are in noise periods across
// the grid; clutter fractions are quantile cuts on the development field.
struct TerrainParams {
    int octaves = 4;
    double elevation_scale = 4.0;
    double clutter_scale = 3.0;
    double elevation_min_m = 0.0;
    double elevation_max_m = 120.0;
    double water_fraction = 0.10;
    double urban_fraction = 0.15;
    double suburban_fraction = 0.30;
    double pop_urban_per_km2 = 4000.0;
    double pop_suburban_per_km2 = 1200.0;
    double pop_rural_per_km2 = 150.0;
    double frequency_norm_min_mhz = 700.0;
    double frequency_norm_max_mhz = 3500.0;
    double eirp_norm_min_dbm = 10.0;
    double eirp_norm_max_dbm = 60.0;
};

// Synthetic world: per-point elevation, clutter class and population
// density, all deterministic functions of (seed, grid, params).
struct Scenario {
    GridSpec grid;
    std::uint64_t seed = 0;
    Eigen::VectorXd elevation_m;
    std::vector<Clutter> clutter;
    Eigen::VectorXd pop_density;
    NormStats norm_stats;
};

// Generation procedure (normative; tests re-derive it independently):
//  1. elevation field: e_i = fbm_noise(seed, col*s/n, row*s/n, octaves)
//     with s = elevation_scale, then one 3x3 mean-smoothing pass (averaging
//     only in-grid neighbours), then affine mapping of [0,1] onto
//     [elevation_min_m, elevation_max_m].
//  2. development field: d_i = fbm_noise(seed + 0x9e37, col*c/n, row*c/n,
//     octaves) with c = clutter_scale.
//  3. clutter by quantile thresholding of d (ascending sorted copy q):
//     water  where d_i <  q[floor(water_fraction * n^2)],
//     urban  where d_i >= q[floor((1 - urban_fraction) * n^2)],
//     suburban where d_i >= q[floor((1 - urban_fraction - suburban_fraction) * n^2)],
//     rural otherwise. A fraction <= 0 assigns no points to that band.
//  4. pop_density_i = base(clutter_i) * (0.25 + 1.5 * d_i^2), with
//     base(water) = 0 so population over water is exactly zero.
//  5. norm_stats: pop min/max over the generated field (max bumped to
//     min + 1 if the field is constant); frequency/EIRP ranges copied from
//     params.
Scenario generate_scenario(std::uint64_t seed, const GridSpec& grid,
                           const TerrainParams& params = {});

// Log-distance path-loss model with per-clutter exponent and additive
// clutter loss. Array order matches the Clutter enum.
struct RadioParams {
    double pl0_db = 40.0;
    double d0_m = 1.0;
    std::array<double, kClutterCount> exponent{3.5, 3.0, 2.5, 2.0};
    std::array<double, kClutterCount> clutter_loss_db{15.0, 8.0, 0.0, 0.0};
    double noise_sigma_db = 2.0;
    double rssi_floor_dbm = -150.0;
};

void validate(const RadioParams& params);

// pl0 + 10 * exponent(clutter) * log10(d / d0) + clutter_loss(clutter),
// with d clamped below at d0_m (so non-positive distances are well-defined).
double path_loss_db(double distance_m, const RadioParams& params, Clutter clutter);

// Directional rolloff for sector antennas: 12 dB * (1 - alignment) / 2.
// Zero for omni antennas.
double sector_penalty_db(const Site& site, int point, const GridSpec& grid);

// Ground-truth coverage: per point the best received power over all sites,
//   rssi_i = max_t (eirp_t - path_loss(dist(i,t), clutter_i) - penalty_t),
// clamped below at rssi_floor_dbm. Deterministic; an empty configuration
// yields the floor everywhere.
CoverageMap oracle_coverage(const SiteConfiguration& config, const Scenario& scenario,
                            const RadioParams& params);

// Seeded initial configuration: `count` omni sites at distinct random grid
// points, using the configuration-default EIRP/frequency.
SiteConfiguration random_initial_sites(const Scenario& scenario, int count, std::uint64_t seed,
                                       double default_eirp_dbm, double default_frequency_mhz);

} // namespace towerplan
