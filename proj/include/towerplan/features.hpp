#pragma once

#include "towerplan/grid.hpp"
#include "towerplan/scenario.hpp"

namespace towerplan {

// Raw per-point inputs the feature layout is assembled from. These are the
// fields a measurement record stores; assemble_features turns them into
// the fixed 11-entry layout.
struct RawFeatures {
    double dist_nearest_m = 0.0;
    double elevation_m = 0.0;
    Clutter clutter = Clutter::rural;
    double pop_density = 0.0;
    double frequency_mhz = 0.0; // nearest site's
    double eirp_dbm = 0.0;      // nearest site's
    double alignment = 1.0;     // nearest site's boresight alignment
};

// Min/max scaling used for the normalized entries; a degenerate range
// (max <= min) maps every value to 0.
double min_max_norm(double value, double lo, double hi);

// Raw inputs for one grid point under the given configuration. The nearest
// site supplies the radio attributes (ties resolve to the lowest point
// index).
RawFeatures raw_features(int index, const SiteConfiguration& config, const Scenario& scenario);

// Fixed layout [dist_m, log10(dist), elevation_m, clutter one-hot x4,
// pop_norm, freq_norm, eirp_norm, alignment]. The log10 argument is floored
// at cell_size_m / 10 so colocated points stay finite.
FeatureVector assemble_features(const RawFeatures& raw, const NormStats& stats,
                                double cell_size_m);

// raw_features + assemble_features for one point. Throws DimensionError if
// the configuration and scenario grids differ, ConfigError if the
// configuration has no sites.
FeatureVector build_feature_vector(int index, const SiteConfiguration& config,
                                   const Scenario& scenario);

} // namespace towerplan
