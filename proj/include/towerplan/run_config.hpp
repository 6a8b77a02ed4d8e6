#pragma once

#include "towerplan/cluster.hpp"
#include "towerplan/grid.hpp"
#include "towerplan/measurement.hpp"
#include "towerplan/mlp.hpp"
#include "towerplan/planner.hpp"
#include "towerplan/recommend.hpp"
#include "towerplan/scenario.hpp"

#include <cstdint>
#include <string>

namespace towerplan {

// Full run configuration: every pipeline default plus the file layout. The
// on-disk format is flat `dotted.key = value` text; `#` starts a comment,
// blank lines are skipped, unknown keys are rejected and missing keys keep
// the defaults below.
struct RunConfig {
    GridSpec grid{64, 100.0};

    std::uint64_t scenario_seed = 0;
    int initial_sites = 3;
    int sample_count = 1000;
    MissingnessSpec missingness;

    double default_eirp_dbm = 30.0;
    double default_frequency_mhz = 1800.0;

    RadioParams radio;
    Hyperparams train;
    PlanPolicy plan{-100.0, Budget{500000.0, 100000.0}};

    double render_lo_dbm = -150.0;
    double render_hi_dbm = -50.0;

    // Output/input file names, resolved against the run directory.
    struct Paths {
        std::string scenario = "scenario.txt";
        std::string sites = "sites.txt";
        std::string measurements = "measurements.csv";
        std::string model = "model.txt";
        std::string plan = "plan.csv";
        std::string final_sites = "final_sites.txt";
        std::string raster = "coverage.pgm";
        std::string metrics = "metrics.txt";
    } paths;
};

// Key reference (value syntax in parentheses where not a plain number):
//   grid.n, grid.cell_size_m
//   scenario.seed, scenario.initial_sites, scenario.sample_count,
//   scenario.missing_independent_rate, scenario.missing_label_rate,
//   scenario.missing_cell_id_rate
//   sites.default_eirp_dbm, sites.default_frequency_mhz
//   radio.pl0_db, radio.d0_m, radio.noise_sigma_db, radio.rssi_floor_dbm,
//   radio.exponent_urban|suburban|rural|water,
//   radio.clutter_loss_urban|suburban|rural|water
//   train.hidden_dims (comma-separated ints), train.learning_rate,
//   train.epochs, train.seed
//   plan.tau_dbm, plan.budget_total, plan.cost_per_site,
//   plan.target_covered_fraction, plan.max_iterations,
//   plan.cluster_method (dbscan|kmeans), plan.dbscan_eps,
//   plan.dbscan_min_pts, plan.kmeans_k,
//   plan.placement_strategy (centroid|boundary), plan.sites_per_iteration
//   paths.scenario, paths.sites, paths.measurements, paths.model,
//   paths.plan, paths.final_sites, paths.raster, paths.metrics
//   render.lo_dbm, render.hi_dbm
RunConfig parse_run_config(const std::string& text); // ConfigError
RunConfig load_run_config(const std::string& path);  // IoError / ConfigError

} // namespace towerplan
