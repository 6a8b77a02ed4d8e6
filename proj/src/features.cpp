#include "towerplan/features.hpp"

#include "towerplan/errors.hpp"

#include <cmath>

namespace towerplan {

double min_max_norm(double value, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    return (value - lo) / (hi - lo);
}

RawFeatures raw_features(int index, const SiteConfiguration& config, const Scenario& scenario) {
    if (config.grid != scenario.grid)
        throw DimensionError("configuration grid does not match scenario grid");
    const Site& nearest = config.sites[nearest_site_position(index, config)];
    RawFeatures raw;
    raw.dist_nearest_m = point_distance_m(index, nearest.index, config.grid);
    raw.elevation_m = scenario.elevation_m[index];
    raw.clutter = scenario.clutter[index];
    raw.pop_density = scenario.pop_density[index];
    raw.frequency_mhz = nearest.frequency_mhz;
    raw.eirp_dbm = nearest.eirp_dbm;
    raw.alignment = boresight_alignment(nearest, index, config.grid);
    return raw;
}

FeatureVector assemble_features(const RawFeatures& raw, const NormStats& stats,
                                double cell_size_m) {
    FeatureVector f = FeatureVector::Zero();
    f[feat::kDistNearestM] = raw.dist_nearest_m;
    f[feat::kLog10Dist] = std::log10(std::max(raw.dist_nearest_m, cell_size_m / 10.0));
    f[feat::kElevationM] = raw.elevation_m;
    f[feat::kClutterOneHot + static_cast<int>(raw.clutter)] = 1.0;
    f[feat::kPopDensityNorm] =
        min_max_norm(raw.pop_density, stats.pop_density_min, stats.pop_density_max);
    f[feat::kFrequencyNorm] =
        min_max_norm(raw.frequency_mhz, stats.frequency_mhz_min, stats.frequency_mhz_max);
    f[feat::kEirpNorm] = min_max_norm(raw.eirp_dbm, stats.eirp_dbm_min, stats.eirp_dbm_max);
    f[feat::kAlignment] = raw.alignment;
    return f;
}

FeatureVector build_feature_vector(int index, const SiteConfiguration& config,
                                   const Scenario& scenario) {
    return assemble_features(raw_features(index, config, scenario), scenario.norm_stats,
                             scenario.grid.cell_size_m);
}

} // namespace towerplan
