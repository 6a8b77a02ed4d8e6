#pragma once

#include "towerplan/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace towerplan {

// One signal sample. Every field may be absent; absent values come from
// empty CSV fields or from the synthetic missingness spec.
struct Measurement {
    std::optional<int> row;
    std::optional<int> col;
    std::optional<int> cell_id; // point index of the serving site
    std::optional<double> dist_nearest_m;
    std::optional<double> elevation_m;
    std::optional<Clutter> clutter;
    std::optional<double> pop_density;
    std::optional<double> frequency_mhz;
    std::optional<double> eirp_dbm;
    std::optional<double> alignment;
    std::optional<double> rssi_dbm;

    bool operator==(const Measurement&) const = default;
};

struct MeasurementSet {
    std::vector<Measurement> records;
    std::string source;

    bool operator==(const MeasurementSet& other) const { return records == other.records; }
};

// CSV schema (header required, comma-separated, empty field = missing):
//   row,col,cell_id,dist_nearest_m,elevation_m,clutter,pop_density,freq_mhz,eirp_dbm,alignment,rssi_dbm
inline constexpr const char* kMeasurementCsvHeader =
    "row,col,cell_id,dist_nearest_m,elevation_m,clutter,pop_density,freq_mhz,eirp_dbm,alignment,rssi_dbm";

MeasurementSet ingest_measurements(const std::string& path); // throws ParseError/IoError
void write_measurements(const MeasurementSet& set, const std::string& path);

// Per-record blanking probabilities applied after synthesis. When the
// independent draw fires, one of the seven feature fields (dist, elevation,
// clutter, pop, freq, eirp, alignment) is blanked uniformly at random.
struct MissingnessSpec {
    double independent_rate = 0.0;
    double label_rate = 0.0;
    double cell_id_rate = 0.0;
};

// Seeded synthetic drive test: sample_count points drawn uniformly (with
// replacement), each labelled with the oracle RSSI plus Gaussian noise of
// std noise_sigma_db. cell_id is the serving (max-power) site; the feature
// fields come from the nearest site like raw_features. Per record the draw
// order is fixed: point index, noise, independent blanking (uniform, then
// field choice when it fires), label blanking, cell_id blanking.
MeasurementSet synthesize_measurements(const SiteConfiguration& config, const Scenario& scenario,
                                       const RadioParams& params, int sample_count,
                                       std::uint64_t seed,
                                       const MissingnessSpec& missing = {});

} // namespace towerplan
