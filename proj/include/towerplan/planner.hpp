#pragma once

#include "towerplan/cluster.hpp"
#include "towerplan/grid.hpp"
#include "towerplan/mlp.hpp"
#include "towerplan/recommend.hpp"
#include "towerplan/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace towerplan {

// Knobs of the iterative planning loop.
struct PlanPolicy {
    double tau_dbm = -100.0;
    Budget budget;
    double target_covered_fraction = 0.9;
    int max_iterations = 50; // safety cap on loop passes
    ClusterOptions cluster;
    PlacementStrategy strategy = PlacementStrategy::centroid;
    int sites_per_iteration = 1;
};

void validate(const PlanPolicy& policy);

// Audit record of one loop pass that reached candidate generation. Fractions
// are model-evaluated; the oracle fractions are filled only when an oracle
// evaluator was supplied (and are never used for decisions).
struct IterationRecord {
    int iteration = 0;
    int low_coverage_count = 0;
    int cluster_count = 0;
    int candidates_considered = 0;
    std::vector<CandidateSite> selected;
    double covered_fraction_before = 0.0;
    double covered_fraction_after = 0.0;
    std::optional<double> oracle_covered_fraction_before;
    std::optional<double> oracle_covered_fraction_after;
    double spend_after = 0.0;
};

enum class StopReason { target_reached, budget_exhausted, no_candidates, no_positive_gain,
                        max_iterations };

const char* stop_reason_name(StopReason reason);
StopReason stop_reason_from_name(const std::string& name); // ParseError

struct PlanResult {
    SiteConfiguration initial_config;
    SiteConfiguration final_config;
    std::vector<IterationRecord> iterations;
    StopReason stop_reason = StopReason::max_iterations;
};

// The planning loop: predict coverage with the trained model, collect the
// points below tau, cluster them, generate candidates per strategy, greedily
// add up to sites_per_iteration sites within the remaining budget capacity,
// re-predict; repeat. Stops when the model-evaluated covered fraction
// reaches the target, the budget capacity is spent, no candidates or no
// positive-gain picks remain, or max_iterations passes complete. Decisions
// use the model only; a supplied oracle is logged per iteration for audit.
// On error the input configuration is left untouched (the loop works on a
// copy). Planning needs at least one initial site -- the feature layout is
// defined relative to the nearest existing site.
PlanResult plan(const SiteConfiguration& initial, const Scenario& scenario, const Model& model,
                const PlanPolicy& policy, const CoverageEvaluator* oracle = nullptr);

// Ground-truth audit of a finished plan.
struct PlanMetrics {
    double initial_oracle_fraction = 0.0;
    double final_oracle_fraction = 0.0;
    double delta = 0.0;
    int sites_added = 0;
    double total_spend = 0.0;
    // Per recorded iteration: model-evaluated fraction after minus the
    // oracle fraction after (replayed), in record order.
    std::vector<double> model_oracle_gap;
};

// Replays the recorded placements against the oracle and reports the
// covered-fraction movement plus the per-iteration model-vs-oracle gap.
PlanMetrics evaluate_plan(const PlanResult& result, const Scenario& scenario,
                          const RadioParams& params, double tau_dbm);

} // namespace towerplan
