#include "towerplan/measurement.hpp"

#include "towerplan/errors.hpp"
#include "towerplan/features.hpp"
#include "towerplan/io.hpp"
#include "towerplan/rng.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace towerplan {

namespace {

constexpr int kColumnCount = 11;

const char* const kColumnNames[kColumnCount] = {
    "row",      "col",         "cell_id",  "dist_nearest_m", "elevation_m", "clutter",
    "pop_density", "freq_mhz", "eirp_dbm", "alignment",      "rssi_dbm"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

std::optional<double> parse_double_field(const std::string& field, int line, int column) {
    if (field.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("line " + std::to_string(line) + ", column '" + kColumnNames[column] +
                         "': expected a number, got '" + field + "'");
    return value;
}

std::optional<int> parse_int_field(const std::string& field, int line, int column) {
    if (field.empty()) return std::nullopt;
    int value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("line " + std::to_string(line) + ", column '" + kColumnNames[column] +
                         "': expected an integer, got '" + field + "'");
    return value;
}

} // namespace

MeasurementSet ingest_measurements(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open measurement file '" + path + "'");

    std::string line;
    if (!std::getline(file, line)) throw ParseError("line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kMeasurementCsvHeader)
        throw ParseError("line 1: expected header '" + std::string(kMeasurementCsvHeader) + "'");

    MeasurementSet set;
    set.source = path;
    int line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != kColumnCount)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(kColumnCount) + " fields, got " +
                             std::to_string(fields.size()));
        Measurement m;
        m.row = parse_int_field(fields[0], line_no, 0);
        m.col = parse_int_field(fields[1], line_no, 1);
        m.cell_id = parse_int_field(fields[2], line_no, 2);
        m.dist_nearest_m = parse_double_field(fields[3], line_no, 3);
        m.elevation_m = parse_double_field(fields[4], line_no, 4);
        if (fields[5].empty()) m.clutter = std::nullopt;
        else {
            try {
                m.clutter = clutter_from_name(fields[5]);
            } catch (const ParseError&) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ", column 'clutter': unknown class '" + fields[5] + "'");
            }
        }
        m.pop_density = parse_double_field(fields[6], line_no, 6);
        m.frequency_mhz = parse_double_field(fields[7], line_no, 7);
        m.eirp_dbm = parse_double_field(fields[8], line_no, 8);
        m.alignment = parse_double_field(fields[9], line_no, 9);
        m.rssi_dbm = parse_double_field(fields[10], line_no, 10);
        set.records.push_back(m);
    }
    return set;
}

void write_measurements(const MeasurementSet& set, const std::string& path) {
    std::ostringstream out;
    out << kMeasurementCsvHeader << '\n';
    auto put_int = [&out](const std::optional<int>& v) {
        if (v) out << *v;
    };
    auto put_double = [&out](const std::optional<double>& v) {
        if (v) out << format_double(*v);
    };
    for (const Measurement& m : set.records) {
        put_int(m.row);
        out << ',';
        put_int(m.col);
        out << ',';
        put_int(m.cell_id);
        out << ',';
        put_double(m.dist_nearest_m);
        out << ',';
        put_double(m.elevation_m);
        out << ',';
        if (m.clutter) out << clutter_name(*m.clutter);
        out << ',';
        put_double(m.pop_density);
        out << ',';
        put_double(m.frequency_mhz);
        out << ',';
        put_double(m.eirp_dbm);
        out << ',';
        put_double(m.alignment);
        out << ',';
        put_double(m.rssi_dbm);
        out << '\n';
    }
    write_text_file(path, out.str());
}

MeasurementSet synthesize_measurements(const SiteConfiguration& config, const Scenario& scenario,
                                       const RadioParams& params, int sample_count,
                                       std::uint64_t seed, const MissingnessSpec& missing) {
    if (config.grid != scenario.grid)
        throw DimensionError("configuration grid does not match scenario grid");
    if (sample_count < 1) throw ConfigError("sample_count must be >= 1");

    MeasurementSet set;
    set.source = "synthetic";
    set.records.reserve(sample_count);
    SeededRng rng(seed);
    const auto point_count = static_cast<std::uint64_t>(scenario.grid.point_count());

    for (int s = 0; s < sample_count; ++s) {
        const int index = static_cast<int>(rng.uniform_index(point_count));
        const auto [row, col] = index_to_coords(index, scenario.grid);

        Measurement m;
        m.row = row;
        m.col = col;

        // Serving site = max received power; feature fields come from the
        // nearest site, matching the feature construction convention.
        double best_rssi = params.rssi_floor_dbm;
        int serving = -1;
        for (const Site& site : config.sites) {
            const double dist = point_distance_m(index, site.index, scenario.grid);
            const double rssi = site.eirp_dbm -
                                path_loss_db(dist, params, scenario.clutter[index]) -
                                sector_penalty_db(site, index, scenario.grid);
            if (rssi > best_rssi) {
                best_rssi = rssi;
                serving = site.index;
            }
        }
        if (serving >= 0) m.cell_id = serving;

        if (!config.sites.empty()) {
            const RawFeatures raw = raw_features(index, config, scenario);
            m.dist_nearest_m = raw.dist_nearest_m;
            m.frequency_mhz = raw.frequency_mhz;
            m.eirp_dbm = raw.eirp_dbm;
            m.alignment = raw.alignment;
        }
        m.elevation_m = scenario.elevation_m[index];
        m.clutter = scenario.clutter[index];
        m.pop_density = scenario.pop_density[index];
        m.rssi_dbm = rng.normal(best_rssi, params.noise_sigma_db);

        if (missing.independent_rate > 0.0 && rng.uniform01() < missing.independent_rate) {
            switch (rng.uniform_index(7)) {
            case 0: m.dist_nearest_m.reset(); break;
            case 1: m.elevation_m.reset(); break;
            case 2: m.clutter.reset(); break;
            case 3: m.pop_density.reset(); break;
            case 4: m.frequency_mhz.reset(); break;
            case 5: m.eirp_dbm.reset(); break;
            default: m.alignment.reset(); break;
            }
        }
        if (missing.label_rate > 0.0 && rng.uniform01() < missing.label_rate) m.rssi_dbm.reset();
        if (missing.cell_id_rate > 0.0 && rng.uniform01() < missing.cell_id_rate) m.cell_id.reset();

        set.records.push_back(m);
    }
    return set;
}

} // namespace towerplan
