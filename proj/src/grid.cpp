#include "towerplan/grid.hpp"

#include "towerplan/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace towerplan {

const char* clutter_name(Clutter c) {
    switch (c) {
    case Clutter::urban: return "urban";
    case Clutter::suburban: return "suburban";
    case Clutter::rural: return "rural";
    case Clutter::water: return "water";
    }
    throw ConfigError("invalid clutter value");
}

Clutter clutter_from_name(const std::string& name) {
    if (name == "urban") return Clutter::urban;
    if (name == "suburban") return Clutter::suburban;
    if (name == "rural") return Clutter::rural;
    if (name == "water") return Clutter::water;
    throw ParseError("unknown clutter class '" + name + "'");
}

const char* antenna_kind_name(AntennaKind k) {
    return k == AntennaKind::omni ? "omni" : "sector";
}

AntennaKind antenna_kind_from_name(const std::string& name) {
    if (name == "omni") return AntennaKind::omni;
    if (name == "sector") return AntennaKind::sector;
    throw ParseError("unknown antenna kind '" + name + "'");
}

void validate(const GridSpec& grid) {
    if (grid.n < 2) throw ConfigError("grid n must be >= 2, got " + std::to_string(grid.n));
    if (!(grid.cell_size_m > 0.0))
        throw ConfigError("grid cell_size_m must be > 0, got " + std::to_string(grid.cell_size_m));
}

int point_index(int row, int col, const GridSpec& grid) {
    if (row < 0 || row >= grid.n)
        throw std::out_of_range("row " + std::to_string(row) + " outside [0, " + std::to_string(grid.n) + ")");
    if (col < 0 || col >= grid.n)
        throw std::out_of_range("col " + std::to_string(col) + " outside [0, " + std::to_string(grid.n) + ")");
    return row * grid.n + col;
}

std::pair<int, int> index_to_coords(int index, const GridSpec& grid) {
    if (index < 0 || index >= grid.point_count())
        throw std::out_of_range("point index " + std::to_string(index) + " outside [0, " +
                                std::to_string(grid.point_count()) + ")");
    return {index / grid.n, index % grid.n};
}

Site make_site(int index, double eirp_dbm, double frequency_mhz, double azimuth_deg,
               AntennaKind kind, const GridSpec& grid) {
    if (index < 0 || index >= grid.point_count())
        throw ConfigError("site index " + std::to_string(index) + " outside grid");
    if (!(frequency_mhz > 0.0)) throw ConfigError("site frequency_mhz must be > 0");
    Site site;
    site.index = index;
    site.eirp_dbm = eirp_dbm;
    site.frequency_mhz = frequency_mhz;
    site.kind = kind;
    if (kind == AntennaKind::omni) {
        site.azimuth_deg = 0.0; // ignored by all consumers; canonical form
    } else {
        double az = std::fmod(azimuth_deg, 360.0);
        if (az < 0.0) az += 360.0;
        site.azimuth_deg = az;
    }
    return site;
}

SiteConfiguration make_configuration(const GridSpec& grid, const std::vector<Site>& sites) {
    validate(grid);
    SiteConfiguration config;
    config.grid = grid;
    config.cell_vector = Eigen::VectorXi::Zero(grid.point_count());
    for (const Site& s : sites) add_site(config, s);
    return config;
}

void add_site(SiteConfiguration& config, const Site& site) {
    if (site.index < 0 || site.index >= config.grid.point_count())
        throw ConfigError("site index " + std::to_string(site.index) + " outside grid");
    if (config.has_site(site.index))
        throw ConfigError("site index " + std::to_string(site.index) + " already occupied");
    config.cell_vector[site.index] = 1;
    config.sites.push_back(site);
}

Site make_default_site(const SiteConfiguration& config, int index) {
    return make_site(index, config.default_eirp_dbm, config.default_frequency_mhz, 0.0,
                     AntennaKind::omni, config.grid);
}

long covered_count(const CoverageMap& map, double tau_dbm) {
    return (map.values_dbm.array() >= tau_dbm).count();
}

double covered_fraction(const CoverageMap& map, double tau_dbm) {
    return static_cast<double>(covered_count(map, tau_dbm)) / static_cast<double>(map.grid.point_count());
}

double point_distance_m(int index_a, int index_b, const GridSpec& grid) {
    const auto [ra, ca] = index_to_coords(index_a, grid);
    const auto [rb, cb] = index_to_coords(index_b, grid);
    const double dr = static_cast<double>(ra - rb);
    const double dc = static_cast<double>(ca - cb);
    return grid.cell_size_m * std::sqrt(dr * dr + dc * dc);
}

double distance_to_nearest_site(int index, const SiteConfiguration& config) {
    return point_distance_m(index, config.sites[nearest_site_position(index, config)].index,
                            config.grid);
}

int nearest_site_position(int index, const SiteConfiguration& config) {
    if (config.sites.empty()) throw ConfigError("no sites in configuration");
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    int best_index = std::numeric_limits<int>::max();
    for (int pos = 0; pos < static_cast<int>(config.sites.size()); ++pos) {
        const double d = point_distance_m(index, config.sites[pos].index, config.grid);
        if (d < best_dist || (d == best_dist && config.sites[pos].index < best_index)) {
            best = pos;
            best_dist = d;
            best_index = config.sites[pos].index;
        }
    }
    return best;
}

double bearing_deg(int from_index, int to_index, const GridSpec& grid) {
    const auto [rf, cf] = index_to_coords(from_index, grid);
    const auto [rt, ct] = index_to_coords(to_index, grid);
    const double east = static_cast<double>(ct - cf);
    const double north = static_cast<double>(rf - rt); // row grows southward
    if (east == 0.0 && north == 0.0) return 0.0;
    double deg = std::atan2(east, north) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    return deg;
}

double boresight_alignment(const Site& site, int point, const GridSpec& grid) {
    if (site.kind == AntennaKind::omni || site.index == point) return 1.0;
    const double bearing = bearing_deg(site.index, point, grid);
    return std::cos((bearing - site.azimuth_deg) * std::numbers::pi / 180.0);
}

} // namespace towerplan
