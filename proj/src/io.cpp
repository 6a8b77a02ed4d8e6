#include "towerplan/io.hpp"

#include "towerplan/errors.hpp"
#include "towerplan/planner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace towerplan {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string read_text_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream content;
    content << file.rdbuf();
    if (file.bad()) throw IoError("read failure on '" + path + "'");
    return content.str();
}

namespace {

void write_file(const std::string& path, const std::string& content, std::ios::openmode mode) {
    std::ofstream file(path, mode);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.flush();
    if (!file) throw IoError("write failure on '" + path + "'");
}

// Line-oriented reader with error positions for the structured text dumps.
class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    std::string next(const char* what) {
        std::string line;
        if (!std::getline(in_, line))
            throw CorruptionError(std::string("truncated file: missing ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no_;
        return line;
    }

    int line_no() const { return line_no_; }

private:
    std::istringstream in_;
    int line_no_ = 0;
};

double parse_double_token(std::istringstream& in, const char* what, int line_no) {
    std::string token;
    if (!(in >> token))
        throw CorruptionError(std::string("line ") + std::to_string(line_no) + ": missing " +
                              what);
    double v = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw CorruptionError(std::string("line ") + std::to_string(line_no) + ": bad " + what +
                              " '" + token + "'");
    return v;
}

long long parse_int_token(std::istringstream& in, const char* what, int line_no) {
    std::string token;
    if (!(in >> token))
        throw CorruptionError(std::string("line ") + std::to_string(line_no) + ": missing " +
                              what);
    long long v = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw CorruptionError(std::string("line ") + std::to_string(line_no) + ": bad " + what +
                              " '" + token + "'");
    return v;
}

std::string expect_keyword_line(LineReader& reader, const std::string& keyword) {
    const std::string line = reader.next(keyword.c_str());
    if (line.rfind(keyword + " ", 0) != 0)
        throw CorruptionError("line " + std::to_string(reader.line_no()) + ": expected '" +
                              keyword + " ...', got '" + line + "'");
    return line.substr(keyword.size() + 1);
}

} // namespace

void write_text_file(const std::string& path, const std::string& content) {
    write_file(path, content, std::ios::out | std::ios::trunc);
}

void write_binary_file(const std::string& path, const std::string& content) {
    write_file(path, content, std::ios::out | std::ios::trunc | std::ios::binary);
}

std::string serialize_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "TPSCEN 1\n";
    out << "n " << scenario.grid.n << '\n';
    out << "cell_size_m " << format_double(scenario.grid.cell_size_m) << '\n';
    out << "seed " << scenario.seed << '\n';
    out << "norm_stats " << format_double(scenario.norm_stats.pop_density_min) << ' '
        << format_double(scenario.norm_stats.pop_density_max) << ' '
        << format_double(scenario.norm_stats.frequency_mhz_min) << ' '
        << format_double(scenario.norm_stats.frequency_mhz_max) << ' '
        << format_double(scenario.norm_stats.eirp_dbm_min) << ' '
        << format_double(scenario.norm_stats.eirp_dbm_max) << '\n';
    out << "points " << scenario.grid.point_count() << '\n';
    for (int i = 0; i < scenario.grid.point_count(); ++i) {
        out << i << ' ' << format_double(scenario.elevation_m[i]) << ' '
            << clutter_name(scenario.clutter[i]) << ' ' << format_double(scenario.pop_density[i])
            << '\n';
    }
    return out.str();
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    write_text_file(path, serialize_scenario(scenario));
}

Scenario parse_scenario(const std::string& text) {
    LineReader reader(text);
    std::string magic;
    try {
        magic = reader.next("magic line");
    } catch (const CorruptionError&) {
        throw FormatError("not a TPSCEN 1 file (empty input)");
    }
    if (magic != "TPSCEN 1") throw FormatError("not a TPSCEN 1 file (got '" + magic + "')");

    Scenario scenario;
    {
        std::istringstream in(expect_keyword_line(reader, "n"));
        scenario.grid.n = static_cast<int>(parse_int_token(in, "grid size", reader.line_no()));
    }
    {
        std::istringstream in(expect_keyword_line(reader, "cell_size_m"));
        scenario.grid.cell_size_m = parse_double_token(in, "cell size", reader.line_no());
    }
    {
        std::istringstream in(expect_keyword_line(reader, "seed"));
        const long long seed = parse_int_token(in, "seed", reader.line_no());
        scenario.seed = static_cast<std::uint64_t>(seed);
    }
    {
        std::istringstream in(expect_keyword_line(reader, "norm_stats"));
        scenario.norm_stats.pop_density_min =
            parse_double_token(in, "pop min", reader.line_no());
        scenario.norm_stats.pop_density_max =
            parse_double_token(in, "pop max", reader.line_no());
        scenario.norm_stats.frequency_mhz_min =
            parse_double_token(in, "frequency min", reader.line_no());
        scenario.norm_stats.frequency_mhz_max =
            parse_double_token(in, "frequency max", reader.line_no());
        scenario.norm_stats.eirp_dbm_min = parse_double_token(in, "eirp min", reader.line_no());
        scenario.norm_stats.eirp_dbm_max = parse_double_token(in, "eirp max", reader.line_no());
    }
    try {
        validate(scenario.grid);
    } catch (const ConfigError& e) {
        throw CorruptionError(std::string("scenario file: ") + e.what());
    }

    long long count = 0;
    {
        std::istringstream in(expect_keyword_line(reader, "points"));
        count = parse_int_token(in, "point count", reader.line_no());
    }
    if (count != scenario.grid.point_count())
        throw CorruptionError("scenario file: point count " + std::to_string(count) +
                              " does not match n*n = " +
                              std::to_string(scenario.grid.point_count()));

    scenario.elevation_m.resize(count);
    scenario.clutter.resize(count);
    scenario.pop_density.resize(count);
    for (long long i = 0; i < count; ++i) {
        std::istringstream in(reader.next("point record"));
        const long long index = parse_int_token(in, "point index", reader.line_no());
        if (index != i)
            throw CorruptionError("line " + std::to_string(reader.line_no()) +
                                  ": point index out of order");
        scenario.elevation_m[i] = parse_double_token(in, "elevation", reader.line_no());
        std::string name;
        if (!(in >> name))
            throw CorruptionError("line " + std::to_string(reader.line_no()) +
                                  ": missing clutter class");
        try {
            scenario.clutter[i] = clutter_from_name(name);
        } catch (const ParseError& e) {
            throw CorruptionError("line " + std::to_string(reader.line_no()) + ": " + e.what());
        }
        scenario.pop_density[i] = parse_double_token(in, "pop density", reader.line_no());
    }
    return scenario;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

std::string serialize_sites(const SiteConfiguration& config) {
    std::ostringstream out;
    out << "TPSITES 1\n";
    out << "n " << config.grid.n << '\n';
    out << "cell_size_m " << format_double(config.grid.cell_size_m) << '\n';
    out << "default_eirp_dbm " << format_double(config.default_eirp_dbm) << '\n';
    out << "default_frequency_mhz " << format_double(config.default_frequency_mhz) << '\n';
    out << "sites " << config.sites.size() << '\n';
    for (const Site& site : config.sites) {
        out << site.index << ' ' << format_double(site.eirp_dbm) << ' '
            << format_double(site.frequency_mhz) << ' ' << format_double(site.azimuth_deg) << ' '
            << antenna_kind_name(site.kind) << '\n';
    }
    return out.str();
}

void save_sites(const SiteConfiguration& config, const std::string& path) {
    write_text_file(path, serialize_sites(config));
}

SiteConfiguration parse_sites(const std::string& text) {
    LineReader reader(text);
    std::string magic;
    try {
        magic = reader.next("magic line");
    } catch (const CorruptionError&) {
        throw FormatError("not a TPSITES 1 file (empty input)");
    }
    if (magic != "TPSITES 1") throw FormatError("not a TPSITES 1 file (got '" + magic + "')");

    GridSpec grid;
    {
        std::istringstream in(expect_keyword_line(reader, "n"));
        grid.n = static_cast<int>(parse_int_token(in, "grid size", reader.line_no()));
    }
    {
        std::istringstream in(expect_keyword_line(reader, "cell_size_m"));
        grid.cell_size_m = parse_double_token(in, "cell size", reader.line_no());
    }
    double default_eirp = 0.0;
    double default_frequency = 0.0;
    {
        std::istringstream in(expect_keyword_line(reader, "default_eirp_dbm"));
        default_eirp = parse_double_token(in, "default eirp", reader.line_no());
    }
    {
        std::istringstream in(expect_keyword_line(reader, "default_frequency_mhz"));
        default_frequency = parse_double_token(in, "default frequency", reader.line_no());
    }
    try {
        validate(grid);
    } catch (const ConfigError& e) {
        throw CorruptionError(std::string("sites file: ") + e.what());
    }

    long long count = 0;
    {
        std::istringstream in(expect_keyword_line(reader, "sites"));
        count = parse_int_token(in, "site count", reader.line_no());
    }
    if (count < 0 || count > grid.point_count())
        throw CorruptionError("sites file: impossible site count " + std::to_string(count));

    SiteConfiguration config = make_configuration(grid);
    config.default_eirp_dbm = default_eirp;
    config.default_frequency_mhz = default_frequency;
    for (long long i = 0; i < count; ++i) {
        std::istringstream in(reader.next("site record"));
        const auto index =
            static_cast<int>(parse_int_token(in, "site index", reader.line_no()));
        const double eirp = parse_double_token(in, "eirp", reader.line_no());
        const double frequency = parse_double_token(in, "frequency", reader.line_no());
        const double azimuth = parse_double_token(in, "azimuth", reader.line_no());
        std::string kind_name;
        if (!(in >> kind_name))
            throw CorruptionError("line " + std::to_string(reader.line_no()) +
                                  ": missing antenna kind");
        try {
            const AntennaKind kind = antenna_kind_from_name(kind_name);
            add_site(config, make_site(index, eirp, frequency, azimuth, kind, grid));
        } catch (const std::exception& e) {
            throw CorruptionError("line " + std::to_string(reader.line_no()) + ": " + e.what());
        }
    }
    return config;
}

SiteConfiguration load_sites(const std::string& path) {
    return parse_sites(read_text_file(path));
}

std::string serialize_plan(const PlanResult& result) {
    const GridSpec& grid = result.initial_config.grid;
    const double points = static_cast<double>(grid.point_count());
    std::ostringstream out;
    out << kPlanCsvHeader << '\n';

    // The per-site cost is not stored on the result; recover it from the
    // first spend movement so intermediate picks get cumulative spends.
    double cost_per_site = 0.0;
    {
        double previous_spend = 0.0;
        for (const IterationRecord& record : result.iterations) {
            if (!record.selected.empty()) {
                cost_per_site = (record.spend_after - previous_spend) /
                                static_cast<double>(record.selected.size());
                break;
            }
            previous_spend = record.spend_after;
        }
    }

    double total_gain = 0.0;
    int sites_added = 0;
    double previous_spend = 0.0;
    for (const IterationRecord& record : result.iterations) {
        // Cumulative per-pick values, reconstructed from the iteration's
        // base count via the recorded marginal gains. The last pick lands
        // exactly on the iteration's recorded after-state.
        long cum_count = std::lround(record.covered_fraction_before * points);
        for (std::size_t j = 0; j < record.selected.size(); ++j) {
            const CandidateSite& pick = record.selected[j];
            cum_count += std::lround(pick.predicted_gain);
            total_gain += pick.predicted_gain;
            ++sites_added;
            const bool last_of_iteration = j + 1 == record.selected.size();
            const double fraction = last_of_iteration
                                        ? record.covered_fraction_after
                                        : static_cast<double>(cum_count) / points;
            const double spend = last_of_iteration
                                     ? record.spend_after
                                     : previous_spend + static_cast<double>(j + 1) * cost_per_site;
            const auto [row, col] = index_to_coords(pick.index, grid);
            out << record.iteration << ',' << row << ',' << col << ',' << pick.cluster_id << ','
                << placement_strategy_name(pick.strategy) << ','
                << format_double(pick.predicted_gain) << ',' << format_double(fraction) << ','
                << format_double(spend) << '\n';
        }
        previous_spend = record.spend_after;
    }

    // Summary row: totals plus the stop reason in the strategy column.
    out << "-1," << sites_added << ",,," << stop_reason_name(result.stop_reason) << ','
        << format_double(total_gain) << ',';
    if (!result.iterations.empty())
        out << format_double(result.iterations.back().covered_fraction_after);
    out << ',' << format_double(result.iterations.empty() ? 0.0
                                                          : result.iterations.back().spend_after)
        << '\n';
    return out.str();
}

void export_plan(const PlanResult& result, const std::string& path) {
    write_text_file(path, serialize_plan(result));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
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

double field_double(const std::string& field, int line_no, const char* what) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("plan line " + std::to_string(line_no) + ": bad " + what + " '" +
                         field + "'");
    return v;
}

int field_int(const std::string& field, int line_no, const char* what) {
    int v = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("plan line " + std::to_string(line_no) + ": bad " + what + " '" +
                         field + "'");
    return v;
}

} // namespace

PlanCsv parse_plan_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("plan line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPlanCsvHeader)
        throw ParseError("plan line 1: expected header '" + std::string(kPlanCsvHeader) + "'");

    PlanCsv plan;
    bool saw_summary = false;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (saw_summary)
            throw ParseError("plan line " + std::to_string(line_no) +
                             ": data after the summary row");
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 8)
            throw ParseError("plan line " + std::to_string(line_no) + ": expected 8 fields, got " +
                             std::to_string(fields.size()));
        const int iteration = field_int(fields[0], line_no, "iteration");
        if (iteration == -1) {
            plan.sites_added = field_int(fields[1], line_no, "sites_added");
            plan.stop_reason = fields[4];
            plan.total_gain = field_double(fields[5], line_no, "total gain");
            if (!fields[6].empty())
                plan.final_covered_fraction = field_double(fields[6], line_no, "final fraction");
            plan.total_spend = field_double(fields[7], line_no, "total spend");
            saw_summary = true;
            continue;
        }
        PlanCsvPick pick;
        pick.iteration = iteration;
        pick.row = field_int(fields[1], line_no, "row");
        pick.col = field_int(fields[2], line_no, "col");
        pick.cluster_id = field_int(fields[3], line_no, "cluster_id");
        pick.strategy = fields[4];
        pick.predicted_gain = field_double(fields[5], line_no, "predicted_gain");
        pick.covered_fraction_after = field_double(fields[6], line_no, "covered_fraction_after");
        pick.spend_after = field_double(fields[7], line_no, "spend_after");
        plan.picks.push_back(std::move(pick));
    }
    if (!saw_summary) throw ParseError("plan file has no summary row");
    return plan;
}

PlanCsv load_plan_csv(const std::string& path) { return parse_plan_csv(read_text_file(path)); }

std::string render_coverage_pgm(const CoverageMap& map, double lo_dbm, double hi_dbm) {
    if (!(lo_dbm < hi_dbm)) throw ConfigError("render range requires lo < hi");
    validate(map.grid);
    if (map.values_dbm.size() != map.grid.point_count())
        throw DimensionError("coverage map length does not match its grid");

    std::ostringstream out;
    out << "P5\n" << map.grid.n << ' ' << map.grid.n << "\n255\n";
    std::string pixels(static_cast<std::size_t>(map.grid.point_count()), '\0');
    for (int i = 0; i < map.grid.point_count(); ++i) {
        const double t =
            std::clamp((map.values_dbm[i] - lo_dbm) / (hi_dbm - lo_dbm), 0.0, 1.0);
        pixels[static_cast<std::size_t>(i)] =
            static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
    }
    out << pixels;
    return out.str();
}

void render_coverage(const CoverageMap& map, const std::string& path, double lo_dbm,
                     double hi_dbm) {
    write_binary_file(path, render_coverage_pgm(map, lo_dbm, hi_dbm));
}

} // namespace towerplan
