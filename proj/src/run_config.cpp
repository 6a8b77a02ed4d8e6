#include "towerplan/run_config.hpp"

#include "towerplan/errors.hpp"
#include "towerplan/io.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

namespace towerplan {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    return v;
}

long long to_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    return v;
}

std::uint64_t to_seed(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" +
                          value + "'");
    return v;
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("config key '" + key + "': empty entry in list '" + value + "'");
        out.push_back(static_cast<int>(to_int(key, item)));
    }
    return out;
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig config;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"grid.n", [&](auto& k, auto& v) { config.grid.n = static_cast<int>(to_int(k, v)); }},
        {"grid.cell_size_m", [&](auto& k, auto& v) { config.grid.cell_size_m = to_double(k, v); }},
        {"scenario.seed", [&](auto& k, auto& v) { config.scenario_seed = to_seed(k, v); }},
        {"scenario.initial_sites",
         [&](auto& k, auto& v) { config.initial_sites = static_cast<int>(to_int(k, v)); }},
        {"scenario.sample_count",
         [&](auto& k, auto& v) { config.sample_count = static_cast<int>(to_int(k, v)); }},
        {"scenario.missing_independent_rate",
         [&](auto& k, auto& v) { config.missingness.independent_rate = to_double(k, v); }},
        {"scenario.missing_label_rate",
         [&](auto& k, auto& v) { config.missingness.label_rate = to_double(k, v); }},
        {"scenario.missing_cell_id_rate",
         [&](auto& k, auto& v) { config.missingness.cell_id_rate = to_double(k, v); }},
        {"sites.default_eirp_dbm",
         [&](auto& k, auto& v) { config.default_eirp_dbm = to_double(k, v); }},
        {"sites.default_frequency_mhz",
         [&](auto& k, auto& v) { config.default_frequency_mhz = to_double(k, v); }},
        {"radio.pl0_db", [&](auto& k, auto& v) { config.radio.pl0_db = to_double(k, v); }},
        {"radio.d0_m", [&](auto& k, auto& v) { config.radio.d0_m = to_double(k, v); }},
        {"radio.noise_sigma_db",
         [&](auto& k, auto& v) { config.radio.noise_sigma_db = to_double(k, v); }},
        {"radio.rssi_floor_dbm",
         [&](auto& k, auto& v) { config.radio.rssi_floor_dbm = to_double(k, v); }},
        {"train.hidden_dims",
         [&](auto& k, auto& v) { config.train.hidden_dims = to_int_list(k, v); }},
        {"train.learning_rate",
         [&](auto& k, auto& v) { config.train.learning_rate = to_double(k, v); }},
        {"train.epochs",
         [&](auto& k, auto& v) { config.train.epochs = static_cast<int>(to_int(k, v)); }},
        {"train.seed", [&](auto& k, auto& v) { config.train.seed = to_seed(k, v); }},
        {"plan.tau_dbm", [&](auto& k, auto& v) { config.plan.tau_dbm = to_double(k, v); }},
        {"plan.budget_total",
         [&](auto& k, auto& v) { config.plan.budget.total = to_double(k, v); }},
        {"plan.cost_per_site",
         [&](auto& k, auto& v) { config.plan.budget.cost_per_site = to_double(k, v); }},
        {"plan.target_covered_fraction",
         [&](auto& k, auto& v) { config.plan.target_covered_fraction = to_double(k, v); }},
        {"plan.max_iterations",
         [&](auto& k, auto& v) { config.plan.max_iterations = static_cast<int>(to_int(k, v)); }},
        {"plan.cluster_method",
         [&](auto& k, auto& v) {
             try {
                 config.plan.cluster.method = cluster_method_from_name(v);
             } catch (const ParseError& e) {
                 throw ConfigError("config key '" + k + "': " + e.what());
             }
         }},
        {"plan.dbscan_eps",
         [&](auto& k, auto& v) { config.plan.cluster.dbscan.eps = to_double(k, v); }},
        {"plan.dbscan_min_pts",
         [&](auto& k, auto& v) {
             config.plan.cluster.dbscan.min_pts = static_cast<int>(to_int(k, v));
         }},
        {"plan.kmeans_k",
         [&](auto& k, auto& v) { config.plan.cluster.kmeans.k = static_cast<int>(to_int(k, v)); }},
        {"plan.placement_strategy",
         [&](auto& k, auto& v) {
             try {
                 config.plan.strategy = placement_strategy_from_name(v);
             } catch (const ParseError& e) {
                 throw ConfigError("config key '" + k + "': " + e.what());
             }
         }},
        {"plan.sites_per_iteration",
         [&](auto& k, auto& v) {
             config.plan.sites_per_iteration = static_cast<int>(to_int(k, v));
         }},
        {"paths.scenario", [&](auto&, auto& v) { config.paths.scenario = v; }},
        {"paths.sites", [&](auto&, auto& v) { config.paths.sites = v; }},
        {"paths.measurements", [&](auto&, auto& v) { config.paths.measurements = v; }},
        {"paths.model", [&](auto&, auto& v) { config.paths.model = v; }},
        {"paths.plan", [&](auto&, auto& v) { config.paths.plan = v; }},
        {"paths.final_sites", [&](auto&, auto& v) { config.paths.final_sites = v; }},
        {"paths.raster", [&](auto&, auto& v) { config.paths.raster = v; }},
        {"paths.metrics", [&](auto&, auto& v) { config.paths.metrics = v; }},
        {"render.lo_dbm", [&](auto& k, auto& v) { config.render_lo_dbm = to_double(k, v); }},
        {"render.hi_dbm", [&](auto& k, auto& v) { config.render_hi_dbm = to_double(k, v); }},
    };

    // Per-clutter radio keys share one handler each.
    auto clutter_suffix = [](const std::string& key) {
        return clutter_from_name(key.substr(key.rfind('_') + 1));
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");

        if (const auto it = setters.find(key); it != setters.end()) {
            it->second(key, value);
        } else if (key.rfind("radio.exponent_", 0) == 0) {
            try {
                config.radio.exponent[static_cast<int>(clutter_suffix(key))] =
                    to_double(key, value);
            } catch (const ParseError&) {
                throw ConfigError("unknown config key '" + key + "'");
            }
        } else if (key.rfind("radio.clutter_loss_", 0) == 0) {
            try {
                config.radio.clutter_loss_db[static_cast<int>(clutter_suffix(key))] =
                    to_double(key, value);
            } catch (const ParseError&) {
                throw ConfigError("unknown config key '" + key + "'");
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_text_file(path));
}

} // namespace towerplan
