#pragma once

#include "towerplan/measurement.hpp"
#include "towerplan/scenario.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace towerplan {

struct TrainingRow {
    FeatureVector features;
    double target_dbm = 0.0;

    bool operator==(const TrainingRow& other) const {
        return features == other.features && target_dbm == other.target_dbm;
    }
};

struct TrainingDataset {
    std::vector<TrainingRow> rows;
    std::string provenance; // source + cleaning policy, for audit output
};

// Per-rule audit counts from cleaning.
struct CleaningReport {
    int input_count = 0;
    int dropped_missing_independent = 0; // rule 1, incl. absent/out-of-grid coordinates
    int imputed_labels = 0;              // rule 2
    int dropped_unimputable = 0;         // rule 3
    int output_count = 0;

    bool operator==(const CleaningReport&) const = default;
};

// Record-level cleaning policy, order-preserving:
//   1. drop any record missing an independent variable -- coordinates or any
//      of the seven feature fields; out-of-grid coordinates count as missing;
//   2. impute a missing rssi_dbm with the mean rssi of the rule-1 survivors
//      sharing its cell_id;
//   3. drop records whose rssi_dbm is missing and unimputable (absent
//      cell_id, or no same-cell survivor has a label).
// Throws DataError ("empty dataset after cleaning", with the per-rule
// counts) when a non-empty input cleans down to nothing. Idempotent: a
// second pass over the output changes nothing.
MeasurementSet clean_measurements(const MeasurementSet& set, const GridSpec& grid,
                                  CleaningReport* report = nullptr);

// clean_measurements followed by feature assembly against the scenario's
// normalization stats; output rows are complete by construction.
TrainingDataset clean_dataset(const MeasurementSet& set, const Scenario& scenario,
                              CleaningReport* report = nullptr);

// Seeded shuffle (Fisher-Yates) then split: the test part takes the first
// round(test_fraction * N) shuffled rows, clamped so both parts keep at
// least one row. Requires N >= 2 and test_fraction in (0, 1).
std::pair<TrainingDataset, TrainingDataset> split_dataset(const TrainingDataset& dataset,
                                                          double test_fraction,
                                                          std::uint64_t seed);

} // namespace towerplan
