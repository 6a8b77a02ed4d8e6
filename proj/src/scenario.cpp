#include "towerplan/scenario.hpp"

#include "towerplan/errors.hpp"
#include "towerplan/noise.hpp"
#include "towerplan/rng.hpp"

#include <algorithm>
#include <cmath>

namespace towerplan {

namespace {

Eigen::VectorXd smooth_3x3(const Eigen::VectorXd& field, const GridSpec& grid) {
    Eigen::VectorXd out(field.size());
    for (int r = 0; r < grid.n; ++r) {
        for (int c = 0; c < grid.n; ++c) {
            double sum = 0.0;
            int count = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = r + dr;
                    const int cc = c + dc;
                    if (rr < 0 || rr >= grid.n || cc < 0 || cc >= grid.n) continue;
                    sum += field[rr * grid.n + cc];
                    ++count;
                }
            }
            out[r * grid.n + c] = sum / count;
        }
    }
    return out;
}

// Quantile cut: the value q[floor(f * N)] of the ascending sorted field,
// or +inf when the cut index falls past the end (fraction >= 1 of points).
double quantile_cut(const std::vector<double>& sorted, double fraction) {
    const auto n = static_cast<std::ptrdiff_t>(sorted.size());
    const auto k = static_cast<std::ptrdiff_t>(std::floor(fraction * static_cast<double>(n)));
    if (k >= n) return std::numeric_limits<double>::infinity();
    if (k < 0) return -std::numeric_limits<double>::infinity();
    return sorted[k];
}

} // namespace

Scenario generate_scenario(std::uint64_t seed, const GridSpec& grid, const TerrainParams& params) {
    validate(grid);
    if (params.octaves < 1) throw ConfigError("terrain octaves must be >= 1");
    if (!(params.elevation_max_m >= params.elevation_min_m))
        throw ConfigError("elevation_max_m must be >= elevation_min_m");

    const int count = grid.point_count();
    Scenario scenario;
    scenario.grid = grid;
    scenario.seed = seed;

    Eigen::VectorXd raw_elevation(count);
    Eigen::VectorXd development(count);
    const std::uint64_t dev_seed = seed + 0x9e37ULL;
    for (int r = 0; r < grid.n; ++r) {
        for (int c = 0; c < grid.n; ++c) {
            const int i = r * grid.n + c;
            const double ex = c * params.elevation_scale / grid.n;
            const double ey = r * params.elevation_scale / grid.n;
            raw_elevation[i] = fbm_noise(seed, ex, ey, params.octaves);
            const double cx = c * params.clutter_scale / grid.n;
            const double cy = r * params.clutter_scale / grid.n;
            development[i] = fbm_noise(dev_seed, cx, cy, params.octaves);
        }
    }

    const Eigen::VectorXd smoothed = smooth_3x3(raw_elevation, grid);
    scenario.elevation_m =
        (params.elevation_min_m +
         smoothed.array() * (params.elevation_max_m - params.elevation_min_m))
            .matrix();

    std::vector<double> sorted(development.data(), development.data() + count);
    std::sort(sorted.begin(), sorted.end());
    const double water_cut = quantile_cut(sorted, params.water_fraction);
    const double urban_cut = quantile_cut(sorted, 1.0 - params.urban_fraction);
    const double suburban_cut =
        quantile_cut(sorted, 1.0 - params.urban_fraction - params.suburban_fraction);

    scenario.clutter.resize(count);
    scenario.pop_density.resize(count);
    const std::array<double, kClutterCount> pop_base{params.pop_urban_per_km2,
                                                     params.pop_suburban_per_km2,
                                                     params.pop_rural_per_km2, 0.0};
    for (int i = 0; i < count; ++i) {
        const double d = development[i];
        Clutter cl;
        if (params.water_fraction > 0.0 && d < water_cut) cl = Clutter::water;
        else if (d >= urban_cut) cl = Clutter::urban;
        else if (d >= suburban_cut) cl = Clutter::suburban;
        else cl = Clutter::rural;
        scenario.clutter[i] = cl;
        scenario.pop_density[i] = pop_base[static_cast<int>(cl)] * (0.25 + 1.5 * d * d);
    }

    scenario.norm_stats.pop_density_min = scenario.pop_density.minCoeff();
    scenario.norm_stats.pop_density_max = scenario.pop_density.maxCoeff();
    if (scenario.norm_stats.pop_density_max <= scenario.norm_stats.pop_density_min)
        scenario.norm_stats.pop_density_max = scenario.norm_stats.pop_density_min + 1.0;
    scenario.norm_stats.frequency_mhz_min = params.frequency_norm_min_mhz;
    scenario.norm_stats.frequency_mhz_max = params.frequency_norm_max_mhz;
    scenario.norm_stats.eirp_dbm_min = params.eirp_norm_min_dbm;
    scenario.norm_stats.eirp_dbm_max = params.eirp_norm_max_dbm;
    return scenario;
}

void validate(const RadioParams& params) {
    if (!(params.d0_m > 0.0)) throw ConfigError("radio d0_m must be > 0");
    for (double e : params.exponent)
        if (!(e > 0.0)) throw ConfigError("radio path-loss exponents must be > 0");
    for (double l : params.clutter_loss_db)
        if (l < 0.0) throw ConfigError("radio clutter losses must be >= 0");
    if (params.noise_sigma_db < 0.0) throw ConfigError("radio noise_sigma_db must be >= 0");
}

double path_loss_db(double distance_m, const RadioParams& params, Clutter clutter) {
    const double d = std::max(distance_m, params.d0_m);
    const int c = static_cast<int>(clutter);
    return params.pl0_db + 10.0 * params.exponent[c] * std::log10(d / params.d0_m) +
           params.clutter_loss_db[c];
}

double sector_penalty_db(const Site& site, int point, const GridSpec& grid) {
    if (site.kind == AntennaKind::omni) return 0.0;
    return 12.0 * (1.0 - boresight_alignment(site, point, grid)) / 2.0;
}

CoverageMap oracle_coverage(const SiteConfiguration& config, const Scenario& scenario,
                            const RadioParams& params) {
    if (config.grid != scenario.grid)
        throw DimensionError("configuration grid does not match scenario grid");
    CoverageMap map;
    map.grid = scenario.grid;
    map.values_dbm = Eigen::VectorXd::Constant(scenario.grid.point_count(), params.rssi_floor_dbm);
    for (int i = 0; i < scenario.grid.point_count(); ++i) {
        double best = params.rssi_floor_dbm;
        for (const Site& site : config.sites) {
            const double dist = point_distance_m(i, site.index, scenario.grid);
            const double rssi = site.eirp_dbm - path_loss_db(dist, params, scenario.clutter[i]) -
                                sector_penalty_db(site, i, scenario.grid);
            best = std::max(best, rssi);
        }
        map.values_dbm[i] = best;
    }
    return map;
}

SiteConfiguration random_initial_sites(const Scenario& scenario, int count, std::uint64_t seed,
                                       double default_eirp_dbm, double default_frequency_mhz) {
    if (count < 0) throw ConfigError("initial site count must be >= 0");
    if (count > scenario.grid.point_count())
        throw ConfigError("initial site count exceeds grid point count");
    SiteConfiguration config = make_configuration(scenario.grid);
    config.default_eirp_dbm = default_eirp_dbm;
    config.default_frequency_mhz = default_frequency_mhz;
    SeededRng rng(seed);
    while (static_cast<int>(config.sites.size()) < count) {
        const int index = static_cast<int>(
            rng.uniform_index(static_cast<std::uint64_t>(scenario.grid.point_count())));
        if (config.has_site(index)) continue;
        add_site(config, make_default_site(config, index));
    }
    return config;
}

} // namespace towerplan
