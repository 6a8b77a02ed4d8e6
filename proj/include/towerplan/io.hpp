#pragma once

#include "towerplan/grid.hpp"
#include "towerplan/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace towerplan {

struct PlanResult;

// Doubles are serialized with 17 significant digits so that every exported
// artifact round-trips bit-exactly.
std::string format_double(double value);

std::string read_text_file(const std::string& path);  // throws IoError
void write_text_file(const std::string& path, const std::string& content);
void write_binary_file(const std::string& path, const std::string& content);

// Scenario dump, versioned text:
//   TPSCEN 1
//   n <n>
//   cell_size_m <v>
//   seed <seed>
//   norm_stats <pop_min> <pop_max> <freq_min> <freq_max> <eirp_min> <eirp_max>
//   points <n*n>
//   <index> <elevation_m> <clutter> <pop_density>     (one line per point)
std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario parse_scenario(const std::string& text); // FormatError / CorruptionError
Scenario load_scenario(const std::string& path);

// Site configuration, versioned text:
//   TPSITES 1
//   n <n>
//   cell_size_m <v>
//   default_eirp_dbm <v>
//   default_frequency_mhz <v>
//   sites <count>
//   <index> <eirp_dbm> <frequency_mhz> <azimuth_deg> <omni|sector>
std::string serialize_sites(const SiteConfiguration& config);
void save_sites(const SiteConfiguration& config, const std::string& path);
SiteConfiguration parse_sites(const std::string& text);
SiteConfiguration load_sites(const std::string& path);

// Plan CSV. One row per selected site in pick order:
//   iteration,row,col,cluster_id,strategy,predicted_gain,covered_fraction_after,spend_after
// covered_fraction_after and spend_after are cumulative: the values after
// that particular placement. A final summary row carries the totals with
//   iteration = -1, row = total sites added, col and cluster_id empty,
//   strategy = stop reason, predicted_gain = total gain,
//   covered_fraction_after = final model-evaluated fraction (empty when the
//   plan recorded no iterations), spend_after = total spend.
inline constexpr const char* kPlanCsvHeader =
    "iteration,row,col,cluster_id,strategy,predicted_gain,covered_fraction_after,spend_after";

struct PlanCsvPick {
    int iteration = 0;
    int row = 0;
    int col = 0;
    int cluster_id = 0;
    std::string strategy;
    double predicted_gain = 0.0;
    double covered_fraction_after = 0.0;
    double spend_after = 0.0;

    bool operator==(const PlanCsvPick&) const = default;
};

struct PlanCsv {
    std::vector<PlanCsvPick> picks;
    int sites_added = 0;
    std::string stop_reason;
    double total_gain = 0.0;
    std::optional<double> final_covered_fraction;
    double total_spend = 0.0;
};

std::string serialize_plan(const PlanResult& result);
void export_plan(const PlanResult& result, const std::string& path);
PlanCsv parse_plan_csv(const std::string& text); // ParseError
PlanCsv load_plan_csv(const std::string& path);

// Binary 8-bit grayscale PGM (P5, width n, height n, maxval 255), row-major
// matching grid indexing. pixel = round(255 * clamp((v - lo)/(hi - lo), 0, 1))
// with halves rounded up.
std::string render_coverage_pgm(const CoverageMap& map, double lo_dbm = -150.0,
                                double hi_dbm = -50.0);
void render_coverage(const CoverageMap& map, const std::string& path, double lo_dbm = -150.0,
                     double hi_dbm = -50.0);

} // namespace towerplan
