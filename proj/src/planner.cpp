#include "towerplan/planner.hpp"

#include "towerplan/errors.hpp"

#include <algorithm>
#include <utility>

namespace towerplan {

void validate(const PlanPolicy& policy) {
    if (!(policy.target_covered_fraction >= 0.0 && policy.target_covered_fraction <= 1.0))
        throw ConfigError("target_covered_fraction must lie in [0, 1]");
    if (policy.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (policy.sites_per_iteration < 1) throw ConfigError("sites_per_iteration must be >= 1");
    validate(policy.budget);
}

const char* stop_reason_name(StopReason reason) {
    switch (reason) {
    case StopReason::target_reached: return "target_reached";
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::no_candidates: return "no_candidates";
    case StopReason::no_positive_gain: return "no_positive_gain";
    case StopReason::max_iterations: return "max_iterations";
    }
    return "max_iterations";
}

StopReason stop_reason_from_name(const std::string& name) {
    for (StopReason reason :
         {StopReason::target_reached, StopReason::budget_exhausted, StopReason::no_candidates,
          StopReason::no_positive_gain, StopReason::max_iterations}) {
        if (name == stop_reason_name(reason)) return reason;
    }
    throw ParseError("unknown stop reason '" + name + "'");
}

PlanResult plan(const SiteConfiguration& initial, const Scenario& scenario, const Model& model,
                const PlanPolicy& policy, const CoverageEvaluator* oracle) {
    validate(policy);
    if (initial.grid != scenario.grid)
        throw DimensionError("initial configuration grid does not match scenario grid");
    if (model.layer_dims.empty() || model.layer_dims.front() != feat::kCount)
        throw DimensionError("model input width does not match the feature layout");

    PlanResult result;
    result.initial_config = initial;
    SiteConfiguration config = initial;

    const int capacity = policy.budget.max_sites();
    int added = 0;
    StopReason reason = StopReason::max_iterations;

    for (int pass = 1; pass <= policy.max_iterations; ++pass) {
        const CoverageMap predicted = predict_map(model, config, scenario);
        const double fraction_before = covered_fraction(predicted, policy.tau_dbm);
        if (fraction_before >= policy.target_covered_fraction) {
            reason = StopReason::target_reached;
            break;
        }
        if (added >= capacity) {
            reason = StopReason::budget_exhausted;
            break;
        }

        const std::vector<int> low = extract_low_coverage(predicted, policy.tau_dbm);
        if (low.empty()) {
            // Below-target fraction with no below-tau points cannot happen
            // (target <= 1), but stay defensive.
            reason = StopReason::no_candidates;
            break;
        }

        ClusterOptions options = policy.cluster;
        options.kmeans.k = std::min(options.kmeans.k, static_cast<int>(low.size()));
        const Clustering clustering = cluster_points(low, scenario.grid, options);

        std::vector<CandidateSite> candidates;
        for (const Cluster& cluster : clustering.clusters) {
            for (CandidateSite& candidate : candidate_sites(cluster, config, policy.strategy)) {
                const bool duplicate =
                    std::any_of(candidates.begin(), candidates.end(),
                                [&candidate](const CandidateSite& existing) {
                                    return existing.index == candidate.index;
                                });
                if (!duplicate) candidates.push_back(std::move(candidate));
            }
        }

        IterationRecord record;
        record.iteration = pass;
        record.low_coverage_count = static_cast<int>(low.size());
        record.cluster_count = static_cast<int>(clustering.clusters.size());
        record.candidates_considered = static_cast<int>(candidates.size());
        record.covered_fraction_before = fraction_before;
        if (oracle)
            record.oracle_covered_fraction_before =
                covered_fraction((*oracle)(config), policy.tau_dbm);

        if (candidates.empty()) {
            record.covered_fraction_after = fraction_before;
            record.oracle_covered_fraction_after = record.oracle_covered_fraction_before;
            record.spend_after = added * policy.budget.cost_per_site;
            result.iterations.push_back(std::move(record));
            reason = StopReason::no_candidates;
            break;
        }

        const CoverageEvaluator model_evaluator = [&](const SiteConfiguration& c) {
            return predict_map(model, c, scenario);
        };
        const int take = std::min(policy.sites_per_iteration, capacity - added);
        const std::vector<CandidateSite> selected =
            greedy_select_n(candidates, config, take, model_evaluator, policy.tau_dbm);

        if (selected.empty()) {
            record.covered_fraction_after = fraction_before;
            record.oracle_covered_fraction_after = record.oracle_covered_fraction_before;
            record.spend_after = added * policy.budget.cost_per_site;
            result.iterations.push_back(std::move(record));
            reason = StopReason::no_positive_gain;
            break;
        }

        for (const CandidateSite& pick : selected)
            add_site(config, make_default_site(config, pick.index));
        added += static_cast<int>(selected.size());

        const CoverageMap repredicted = predict_map(model, config, scenario);
        record.selected = selected;
        record.covered_fraction_after = covered_fraction(repredicted, policy.tau_dbm);
        if (oracle)
            record.oracle_covered_fraction_after =
                covered_fraction((*oracle)(config), policy.tau_dbm);
        record.spend_after = added * policy.budget.cost_per_site;
        result.iterations.push_back(std::move(record));
    }

    result.final_config = std::move(config);
    result.stop_reason = reason;
    return result;
}

PlanMetrics evaluate_plan(const PlanResult& result, const Scenario& scenario,
                          const RadioParams& params, double tau_dbm) {
    PlanMetrics metrics;
    SiteConfiguration config = result.initial_config;
    metrics.initial_oracle_fraction =
        covered_fraction(oracle_coverage(config, scenario, params), tau_dbm);

    for (const IterationRecord& record : result.iterations) {
        for (const CandidateSite& pick : record.selected)
            add_site(config, make_default_site(config, pick.index));
        const double oracle_after =
            covered_fraction(oracle_coverage(config, scenario, params), tau_dbm);
        metrics.model_oracle_gap.push_back(record.covered_fraction_after - oracle_after);
        metrics.sites_added += static_cast<int>(record.selected.size());
    }

    metrics.final_oracle_fraction =
        covered_fraction(oracle_coverage(config, scenario, params), tau_dbm);
    metrics.delta = metrics.final_oracle_fraction - metrics.initial_oracle_fraction;
    metrics.total_spend =
        result.iterations.empty() ? 0.0 : result.iterations.back().spend_after;
    return metrics;
}

} // namespace towerplan
