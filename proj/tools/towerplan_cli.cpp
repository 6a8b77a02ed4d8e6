#include "towerplan/dataset.hpp"
#include "towerplan/errors.hpp"
#include "towerplan/io.hpp"
#include "towerplan/measurement.hpp"
#include "towerplan/mlp.hpp"
#include "towerplan/planner.hpp"
#include "towerplan/run_config.hpp"
#include "towerplan/scenario.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace towerplan;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string model_path;
    std::string scenario_path;
    std::string measurements_path;
    std::string plan_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

RunConfig load_config(const CliOptions& opts) {
    RunConfig config;
    if (!opts.config_path.empty()) config = load_run_config(opts.config_path);
    if (opts.seed_given) config.scenario_seed = opts.seed;
    return config;
}

// Explicit file flags are used verbatim; config-file names resolve against
// the run directory.
std::string resolve(const std::string& flag_path, const std::string& config_name,
                    const std::string& out_dir) {
    if (!flag_path.empty()) return flag_path;
    return (std::filesystem::path(out_dir) / config_name).string();
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
}

CoverageEvaluator make_oracle(const Scenario& scenario, const RadioParams& radio) {
    return [&scenario, &radio](const SiteConfiguration& config) {
        return oracle_coverage(config, scenario, radio);
    };
}

int run_generate(const CliOptions& opts) {
    const RunConfig rc = load_config(opts);
    ensure_out_dir(opts.out_dir);

    const Scenario scenario = generate_scenario(rc.scenario_seed, rc.grid);
    const SiteConfiguration initial =
        random_initial_sites(scenario, rc.initial_sites, rc.scenario_seed + 1,
                             rc.default_eirp_dbm, rc.default_frequency_mhz);
    const MeasurementSet measurements = synthesize_measurements(
        initial, scenario, rc.radio, rc.sample_count, rc.scenario_seed + 2, rc.missingness);

    const std::string scenario_path =
        resolve(opts.scenario_path, rc.paths.scenario, opts.out_dir);
    const std::string sites_path = resolve("", rc.paths.sites, opts.out_dir);
    const std::string measurements_path =
        resolve(opts.measurements_path, rc.paths.measurements, opts.out_dir);
    save_scenario(scenario, scenario_path);
    save_sites(initial, sites_path);
    write_measurements(measurements, measurements_path);

    std::cout << "scenario: " << scenario_path << " (" << rc.grid.n << "x" << rc.grid.n
              << ", seed " << rc.scenario_seed << ")\n"
              << "sites: " << sites_path << " (" << initial.sites.size() << " initial)\n"
              << "measurements: " << measurements_path << " (" << measurements.records.size()
              << " records)\n";
    return 0;
}

int run_train(const CliOptions& opts) {
    const RunConfig rc = load_config(opts);
    const Scenario scenario =
        load_scenario(resolve(opts.scenario_path, rc.paths.scenario, opts.out_dir));
    const MeasurementSet measurements =
        ingest_measurements(resolve(opts.measurements_path, rc.paths.measurements, opts.out_dir));

    CleaningReport report;
    const TrainingDataset dataset = clean_dataset(measurements, scenario, &report);
    std::cerr << "cleaning: " << report.input_count << " in, "
              << report.dropped_missing_independent << " dropped (missing independents), "
              << report.imputed_labels << " labels imputed, " << report.dropped_unimputable
              << " dropped (unimputable), " << report.output_count << " out\n";

    TrainTrace trace;
    const Model model = train(dataset, rc.train, &trace);
    const std::string model_path = resolve(opts.model_path, rc.paths.model, opts.out_dir);
    ensure_out_dir(opts.out_dir);
    save_model(model, model_path);

    std::cout << "model: " << model_path << " (" << dataset.rows.size() << " rows, train RMSE "
              << std::sqrt(trace.epoch_loss.back()) << " dB)\n";
    return 0;
}

int run_plan(const CliOptions& opts) {
    const RunConfig rc = load_config(opts);
    const Scenario scenario =
        load_scenario(resolve(opts.scenario_path, rc.paths.scenario, opts.out_dir));
    const SiteConfiguration initial = load_sites(resolve("", rc.paths.sites, opts.out_dir));
    const Model model = load_model(resolve(opts.model_path, rc.paths.model, opts.out_dir));

    const CoverageEvaluator oracle = make_oracle(scenario, rc.radio);
    const PlanResult result = plan(initial, scenario, model, rc.plan, &oracle);

    ensure_out_dir(opts.out_dir);
    const std::string plan_path = resolve(opts.plan_path, rc.paths.plan, opts.out_dir);
    const std::string final_sites_path = resolve("", rc.paths.final_sites, opts.out_dir);
    export_plan(result, plan_path);
    save_sites(result.final_config, final_sites_path);

    const int added = static_cast<int>(result.final_config.sites.size()) -
                      static_cast<int>(result.initial_config.sites.size());
    std::cout << "plan: " << plan_path << '\n'
              << "final sites: " << final_sites_path << '\n'
              << "stop reason: " << stop_reason_name(result.stop_reason) << " after "
              << result.iterations.size() << " iterations, " << added << " sites added\n";
    if (!result.iterations.empty()) {
        const IterationRecord& last = result.iterations.back();
        std::cout << "model covered fraction: " << last.covered_fraction_after << '\n';
        if (last.oracle_covered_fraction_after)
            std::cout << "oracle covered fraction: " << *last.oracle_covered_fraction_after
                      << '\n';
    }
    return 0;
}

int run_evaluate(const CliOptions& opts) {
    const RunConfig rc = load_config(opts);
    const Scenario scenario =
        load_scenario(resolve(opts.scenario_path, rc.paths.scenario, opts.out_dir));
    const SiteConfiguration initial = load_sites(resolve("", rc.paths.sites, opts.out_dir));
    const PlanCsv plan_csv = load_plan_csv(resolve(opts.plan_path, rc.paths.plan, opts.out_dir));

    // Rebuild the audit trail from the exported artifact.
    PlanResult result;
    result.initial_config = initial;
    result.final_config = initial;
    result.stop_reason = stop_reason_from_name(plan_csv.stop_reason);
    for (const PlanCsvPick& pick : plan_csv.picks) {
        if (result.iterations.empty() || result.iterations.back().iteration != pick.iteration) {
            IterationRecord record;
            record.iteration = pick.iteration;
            result.iterations.push_back(record);
        }
        IterationRecord& record = result.iterations.back();
        CandidateSite site;
        site.index = point_index(pick.row, pick.col, scenario.grid);
        site.cluster_id = pick.cluster_id;
        site.strategy = placement_strategy_from_name(pick.strategy);
        site.predicted_gain = pick.predicted_gain;
        record.selected.push_back(site);
        record.covered_fraction_after = pick.covered_fraction_after;
        record.spend_after = pick.spend_after;
    }

    const PlanMetrics metrics = evaluate_plan(result, scenario, rc.radio, rc.plan.tau_dbm);

    std::ostringstream out;
    out << "initial_oracle_covered_fraction=" << format_double(metrics.initial_oracle_fraction)
        << '\n'
        << "final_oracle_covered_fraction=" << format_double(metrics.final_oracle_fraction)
        << '\n'
        << "delta=" << format_double(metrics.delta) << '\n'
        << "sites_added=" << metrics.sites_added << '\n'
        << "total_spend=" << format_double(metrics.total_spend) << '\n';
    for (std::size_t i = 0; i < metrics.model_oracle_gap.size(); ++i)
        out << "model_oracle_gap_" << result.iterations[i].iteration << '='
            << format_double(metrics.model_oracle_gap[i]) << '\n';

    ensure_out_dir(opts.out_dir);
    const std::string metrics_path = resolve("", rc.paths.metrics, opts.out_dir);
    write_text_file(metrics_path, out.str());
    std::cout << out.str();
    return 0;
}

int run_render(const CliOptions& opts) {
    const RunConfig rc = load_config(opts);
    const Scenario scenario =
        load_scenario(resolve(opts.scenario_path, rc.paths.scenario, opts.out_dir));
    const SiteConfiguration config = load_sites(resolve("", rc.paths.sites, opts.out_dir));

    // A model map when --model is given, the oracle map otherwise.
    CoverageMap map;
    if (!opts.model_path.empty()) {
        const Model model = load_model(opts.model_path);
        map = predict_map(model, config, scenario);
    } else {
        map = oracle_coverage(config, scenario, rc.radio);
    }

    ensure_out_dir(opts.out_dir);
    const std::string raster_path = resolve("", rc.paths.raster, opts.out_dir);
    render_coverage(map, raster_path, rc.render_lo_dbm, rc.render_hi_dbm);
    std::cout << "raster: " << raster_path << " (" << scenario.grid.n << "x" << scenario.grid.n
              << ", " << (opts.model_path.empty() ? "oracle" : "model") << " map)\n";
    return 0;
}

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Run configuration file");
    cmd->add_option("--out", opts.out_dir, "Run directory for inputs/outputs (default .)");
    cmd->add_option("--scenario", opts.scenario_path, "Scenario file (overrides config path)");
    cmd->add_option("--model", opts.model_path, "Model file (overrides config path)");
    cmd->add_option("--measurements", opts.measurements_path,
                    "Measurement CSV (overrides config path)");
    cmd->add_option("--plan", opts.plan_path, "Plan CSV (overrides config path)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget-aware cell tower placement planner"};
    app.require_subcommand(1);

    CliOptions opts;
    int rc = 0;

    auto* generate = app.add_subcommand(
        "generate", "Generate a synthetic scenario, initial sites and measurements");
    add_common_options(generate, opts);
    generate
        ->add_option("--seed", opts.seed, "Scenario seed (overrides config)")
        ->each([&opts](const std::string&) { opts.seed_given = true; });
    generate->callback([&]() { rc = run_generate(opts); });

    auto* train_cmd =
        app.add_subcommand("train", "Train the coverage model from measurements");
    add_common_options(train_cmd, opts);
    train_cmd->callback([&]() { rc = run_train(opts); });

    auto* plan_cmd = app.add_subcommand("plan", "Run the budgeted placement loop");
    add_common_options(plan_cmd, opts);
    plan_cmd->callback([&]() { rc = run_plan(opts); });

    auto* evaluate =
        app.add_subcommand("evaluate", "Audit an exported plan against the oracle");
    add_common_options(evaluate, opts);
    evaluate->callback([&]() { rc = run_evaluate(opts); });

    auto* render = app.add_subcommand("render", "Render a coverage map raster");
    add_common_options(render, opts);
    render->callback([&]() { rc = run_render(opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        if (argc <= 1) std::cerr << app.help();
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
