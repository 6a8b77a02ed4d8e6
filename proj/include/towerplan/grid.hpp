#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace towerplan {

// Land-cover class at a grid point. Enum order is the one-hot layout order
// in FeatureVector and the index order of the per-clutter radio parameters.
enum class Clutter : std::uint8_t { urban = 0, suburban = 1, rural = 2, water = 3 };

inline constexpr int kClutterCount = 4;

const char* clutter_name(Clutter c);
Clutter clutter_from_name(const std::string& name); // throws ParseError

// Square planning grid: n points per axis, row-major indexing with the
// origin at the top-left corner. Point (row, col) sits at metric
// coordinates (col * cell_size_m, row * cell_size_m).
struct GridSpec {
    int n = 2;
    double cell_size_m = 100.0;

    int point_count() const { return n * n; }
    bool operator==(const GridSpec&) const = default;
};

void validate(const GridSpec& grid); // throws ConfigError

int point_index(int row, int col, const GridSpec& grid); // throws std::out_of_range
std::pair<int, int> index_to_coords(int index, const GridSpec& grid);

enum class AntennaKind : std::uint8_t { omni = 0, sector = 1 };

const char* antenna_kind_name(AntennaKind k);
AntennaKind antenna_kind_from_name(const std::string& name);

// A transmitter at one grid point. azimuth_deg is the boresight bearing in
// degrees clockwise from grid north (decreasing row); it is canonicalized
// to 0 for omni antennas.
struct Site {
    int index = 0;
    double eirp_dbm = 30.0;
    double frequency_mhz = 1800.0;
    double azimuth_deg = 0.0;
    AntennaKind kind = AntennaKind::omni;

    bool operator==(const Site&) const = default;
};

Site make_site(int index, double eirp_dbm, double frequency_mhz, double azimuth_deg,
               AntennaKind kind, const GridSpec& grid);

// Binary cell vector over the grid plus the per-site radio attributes.
// Invariant: cell_vector[i] == 1 exactly when some site has index i, and
// no two sites share an index. default_* are the attributes newly
// recommended sites adopt.
struct SiteConfiguration {
    GridSpec grid;
    Eigen::VectorXi cell_vector;
    std::vector<Site> sites;
    double default_eirp_dbm = 30.0;
    double default_frequency_mhz = 1800.0;

    bool has_site(int index) const { return cell_vector[index] != 0; }
};

SiteConfiguration make_configuration(const GridSpec& grid, const std::vector<Site>& sites = {});
void add_site(SiteConfiguration& config, const Site& site); // throws ConfigError on occupied index
Site make_default_site(const SiteConfiguration& config, int index);

// Real-valued coverage vector (dBm) over the grid.
struct CoverageMap {
    GridSpec grid;
    Eigen::VectorXd values_dbm;
};

long covered_count(const CoverageMap& map, double tau_dbm); // |{i : v_i >= tau}|
double covered_fraction(const CoverageMap& map, double tau_dbm);

// Fixed feature layout, m = 11 entries.
namespace feat {
inline constexpr int kDistNearestM = 0;
inline constexpr int kLog10Dist = 1;
inline constexpr int kElevationM = 2;
inline constexpr int kClutterOneHot = 3; // 4 entries, order = Clutter enum
inline constexpr int kPopDensityNorm = 7;
inline constexpr int kFrequencyNorm = 8;
inline constexpr int kEirpNorm = 9;
inline constexpr int kAlignment = 10;
inline constexpr int kCount = 11;
} // namespace feat

using FeatureVector = Eigen::Matrix<double, feat::kCount, 1>;

// Euclidean distance in meters between two grid points.
double point_distance_m(int index_a, int index_b, const GridSpec& grid);

// Distance in meters from a point to the closest site.
// Throws ConfigError when the configuration has no sites.
double distance_to_nearest_site(int index, const SiteConfiguration& config);

// Position (in config.sites) of the nearest site; equidistant sites
// resolve to the one with the lowest point index.
int nearest_site_position(int index, const SiteConfiguration& config);

// Bearing from one grid point towards another, degrees clockwise from grid
// north, in [0, 360). Undefined for identical points (returns 0).
double bearing_deg(int from_index, int to_index, const GridSpec& grid);

// cos(angle between the site's boresight and the bearing site->point).
// 1.0 for omni sites and for the site's own point.
double boresight_alignment(const Site& site, int point, const GridSpec& grid);

} // namespace towerplan
