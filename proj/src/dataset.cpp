#include "towerplan/dataset.hpp"

#include "towerplan/errors.hpp"
#include "towerplan/features.hpp"
#include "towerplan/rng.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace towerplan {

namespace {

bool has_all_independents(const Measurement& m, const GridSpec& grid) {
    if (!m.row || !m.col) return false;
    if (*m.row < 0 || *m.row >= grid.n || *m.col < 0 || *m.col >= grid.n) return false;
    return m.dist_nearest_m && m.elevation_m && m.clutter && m.pop_density && m.frequency_mhz &&
           m.eirp_dbm && m.alignment;
}

} // namespace

MeasurementSet clean_measurements(const MeasurementSet& set, const GridSpec& grid,
                                  CleaningReport* report) {
    validate(grid);
    CleaningReport counts;
    counts.input_count = static_cast<int>(set.records.size());

    // Rule 1: records missing any independent variable never survive.
    std::vector<Measurement> survivors;
    survivors.reserve(set.records.size());
    for (const Measurement& m : set.records) {
        if (has_all_independents(m, grid)) survivors.push_back(m);
        else ++counts.dropped_missing_independent;
    }

    // Label means per cell over the survivors that carry one; imputation
    // peers come from this pool only.
    std::map<int, std::pair<double, int>> cell_sums;
    for (const Measurement& m : survivors) {
        if (m.cell_id && m.rssi_dbm) {
            auto& [sum, n] = cell_sums[*m.cell_id];
            sum += *m.rssi_dbm;
            ++n;
        }
    }

    MeasurementSet cleaned;
    cleaned.source = set.source;
    for (const Measurement& m : survivors) {
        if (m.rssi_dbm) {
            cleaned.records.push_back(m);
            continue;
        }
        if (m.cell_id) {
            const auto it = cell_sums.find(*m.cell_id);
            if (it != cell_sums.end()) {
                Measurement imputed = m;
                imputed.rssi_dbm = it->second.first / it->second.second;
                cleaned.records.push_back(imputed);
                ++counts.imputed_labels;
                continue;
            }
        }
        ++counts.dropped_unimputable;
    }

    counts.output_count = static_cast<int>(cleaned.records.size());
    if (report) *report = counts;
    if (counts.input_count > 0 && counts.output_count == 0)
        throw DataError("empty dataset after cleaning (input " +
                        std::to_string(counts.input_count) + ", dropped " +
                        std::to_string(counts.dropped_missing_independent) +
                        " missing-independent, imputed " + std::to_string(counts.imputed_labels) +
                        ", dropped " + std::to_string(counts.dropped_unimputable) +
                        " unimputable-label)");
    return cleaned;
}

TrainingDataset clean_dataset(const MeasurementSet& set, const Scenario& scenario,
                              CleaningReport* report) {
    const MeasurementSet cleaned = clean_measurements(set, scenario.grid, report);
    TrainingDataset dataset;
    dataset.provenance = (set.source.empty() ? std::string("<memory>") : set.source) +
                         "; drop missing independents, impute labels by cell mean";
    dataset.rows.reserve(cleaned.records.size());
    for (const Measurement& m : cleaned.records) {
        RawFeatures raw;
        raw.dist_nearest_m = *m.dist_nearest_m;
        raw.elevation_m = *m.elevation_m;
        raw.clutter = *m.clutter;
        raw.pop_density = *m.pop_density;
        raw.frequency_mhz = *m.frequency_mhz;
        raw.eirp_dbm = *m.eirp_dbm;
        raw.alignment = *m.alignment;
        TrainingRow row;
        row.features = assemble_features(raw, scenario.norm_stats, scenario.grid.cell_size_m);
        row.target_dbm = *m.rssi_dbm;
        dataset.rows.push_back(row);
    }
    return dataset;
}

std::pair<TrainingDataset, TrainingDataset> split_dataset(const TrainingDataset& dataset,
                                                          double test_fraction,
                                                          std::uint64_t seed) {
    const auto n = static_cast<int>(dataset.rows.size());
    if (n < 2) throw ConfigError("split needs at least 2 rows, got " + std::to_string(n));
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must lie in (0, 1)");

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    SeededRng rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
    }

    auto test_size = static_cast<int>(std::lround(test_fraction * n));
    test_size = std::max(1, std::min(n - 1, test_size));

    TrainingDataset train;
    TrainingDataset test;
    train.provenance = dataset.provenance + "; train split";
    test.provenance = dataset.provenance + "; test split";
    for (int i = 0; i < n; ++i) {
        (i < test_size ? test : train).rows.push_back(dataset.rows[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

} // namespace towerplan
