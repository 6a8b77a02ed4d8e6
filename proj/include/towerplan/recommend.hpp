#pragma once

#include "towerplan/cluster.hpp"
#include "towerplan/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace towerplan {

enum class PlacementStrategy { centroid, boundary };

const char* placement_strategy_name(PlacementStrategy strategy);
PlacementStrategy placement_strategy_from_name(const std::string& name); // ParseError

// A proposed tower location. predicted_gain is filled by greedy selection
// (the marginal covered-count improvement when the site was picked).
struct CandidateSite {
    int index = 0;
    int cluster_id = 0;
    PlacementStrategy strategy = PlacementStrategy::centroid;
    double predicted_gain = 0.0;

    bool operator==(const CandidateSite&) const = default;
};

// Money budget; the placement cap is floor(total / cost_per_site), with a
// small epsilon so exact multiples are not lost to rounding.
struct Budget {
    double total = 0.0;
    double cost_per_site = 1.0;

    int max_sites() const;
};

void validate(const Budget& budget);

// Any function producing a coverage map for a configuration: the trained
// model during planning, the ground-truth oracle in audits.
using CoverageEvaluator = std::function<CoverageMap(const SiteConfiguration&)>;

// Exactly { i : values_dbm[i] < tau_dbm }, ascending.
std::vector<int> extract_low_coverage(const CoverageMap& map, double tau_dbm);

// Candidate generation per strategy.
//   centroid: the cluster centroid snapped to the nearest grid point
//     (coordinates rounded half away from zero, clamped to the grid); if
//     that point is occupied, the unoccupied member nearest the centroid
//     (ties by lowest index).
//   boundary: the two members at maximal pairwise distance (ties by
//     lexicographically lowest index pair), minus occupied points.
// An empty result means every choice was occupied; callers skip the
// cluster.
std::vector<CandidateSite> candidate_sites(const Cluster& cluster,
                                           const SiteConfiguration& config,
                                           PlacementStrategy strategy);

// Covered-count improvement from adding one default-attribute site at
// candidate_index: |{i : eval(config+t) >= tau}| - |{i : eval(config) >= tau}|,
// floored at 0. The candidate point must be unoccupied.
int coverage_gain(const SiteConfiguration& config, int candidate_index,
                  const CoverageEvaluator& evaluator, double tau_dbm);

// Greedy maximum-coverage selection: repeatedly pick the candidate with the
// largest marginal covered-count gain against the configuration so far
// (ties by lowest point index), until max_count picks, no candidates
// remain, or the best marginal gain is 0. Returns picks in order with
// predicted_gain set to the marginal gain at pick time.
std::vector<CandidateSite> greedy_select_n(const std::vector<CandidateSite>& candidates,
                                           const SiteConfiguration& config, int max_count,
                                           const CoverageEvaluator& evaluator, double tau_dbm);

// greedy_select_n capped at budget.max_sites().
std::vector<CandidateSite> greedy_select(const std::vector<CandidateSite>& candidates,
                                         const SiteConfiguration& config, const Budget& budget,
                                         const CoverageEvaluator& evaluator, double tau_dbm);

} // namespace towerplan
