#include "towerplan/recommend.hpp"

#include "towerplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace towerplan {

const char* placement_strategy_name(PlacementStrategy strategy) {
    return strategy == PlacementStrategy::centroid ? "centroid" : "boundary";
}

PlacementStrategy placement_strategy_from_name(const std::string& name) {
    if (name == "centroid") return PlacementStrategy::centroid;
    if (name == "boundary") return PlacementStrategy::boundary;
    throw ParseError("unknown placement strategy '" + name + "'");
}

void validate(const Budget& budget) {
    if (budget.total < 0.0) throw ConfigError("budget total must be >= 0");
    if (!(budget.cost_per_site > 0.0)) throw ConfigError("cost_per_site must be > 0");
}

int Budget::max_sites() const {
    validate(*this);
    const double ratio = total / cost_per_site + 1e-9;
    return std::max(0, static_cast<int>(std::floor(ratio)));
}

std::vector<int> extract_low_coverage(const CoverageMap& map, double tau_dbm) {
    std::vector<int> low;
    for (int i = 0; i < map.values_dbm.size(); ++i)
        if (map.values_dbm[i] < tau_dbm) low.push_back(i);
    return low;
}

namespace {

int snap_to_grid(const Eigen::Vector2d& rc, const GridSpec& grid) {
    auto clamp = [&grid](long v) {
        return static_cast<int>(std::max(0L, std::min(static_cast<long>(grid.n) - 1, v)));
    };
    const int row = clamp(std::lround(rc.x()));
    const int col = clamp(std::lround(rc.y()));
    return point_index(row, col, grid);
}

} // namespace

std::vector<CandidateSite> candidate_sites(const Cluster& cluster,
                                           const SiteConfiguration& config,
                                           PlacementStrategy strategy) {
    if (cluster.members.empty()) throw ConfigError("candidate_sites needs a non-empty cluster");
    const GridSpec& grid = config.grid;

    std::vector<int> picks;
    if (strategy == PlacementStrategy::centroid) {
        const int snapped = snap_to_grid(cluster.centroid_rc, grid);
        if (!config.has_site(snapped)) {
            picks.push_back(snapped);
        } else {
            // Fall back to the unoccupied member nearest the true centroid.
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int p : cluster.members) {
                if (config.has_site(p)) continue;
                const auto [row, col] = index_to_coords(p, grid);
                const double dr = row - cluster.centroid_rc.x();
                const double dc = col - cluster.centroid_rc.y();
                const double d = dr * dr + dc * dc;
                if (d < best_d || (d == best_d && p < best)) {
                    best_d = d;
                    best = p;
                }
            }
            if (best >= 0) picks.push_back(best);
        }
    } else {
        // Farthest pair of members, lexicographically lowest pair on ties.
        int best_a = cluster.members.front();
        int best_b = cluster.members.front();
        long long best_d = -1;
        for (std::size_t i = 0; i < cluster.members.size(); ++i) {
            const auto [ri, ci] = index_to_coords(cluster.members[i], grid);
            for (std::size_t j = i; j < cluster.members.size(); ++j) {
                const auto [rj, cj] = index_to_coords(cluster.members[j], grid);
                const long long dr = ri - rj;
                const long long dc = ci - cj;
                const long long d = dr * dr + dc * dc;
                if (d > best_d) {
                    best_d = d;
                    best_a = cluster.members[i];
                    best_b = cluster.members[j];
                }
            }
        }
        picks.push_back(best_a);
        if (best_b != best_a) picks.push_back(best_b);
        std::erase_if(picks, [&config](int p) { return config.has_site(p); });
    }

    std::vector<CandidateSite> candidates;
    for (int p : picks) {
        CandidateSite candidate;
        candidate.index = p;
        candidate.cluster_id = cluster.id;
        candidate.strategy = strategy;
        candidates.push_back(candidate);
    }
    return candidates;
}

int coverage_gain(const SiteConfiguration& config, int candidate_index,
                  const CoverageEvaluator& evaluator, double tau_dbm) {
    if (config.has_site(candidate_index))
        throw ConfigError("candidate index " + std::to_string(candidate_index) +
                          " is already occupied");
    const long before = covered_count(evaluator(config), tau_dbm);
    SiteConfiguration with_site = config;
    add_site(with_site, make_default_site(config, candidate_index));
    const long after = covered_count(evaluator(with_site), tau_dbm);
    return static_cast<int>(std::max(0L, after - before));
}

std::vector<CandidateSite> greedy_select_n(const std::vector<CandidateSite>& candidates,
                                           const SiteConfiguration& config, int max_count,
                                           const CoverageEvaluator& evaluator, double tau_dbm) {
    std::vector<CandidateSite> selected;
    if (max_count <= 0 || candidates.empty()) return selected;

    std::vector<CandidateSite> remaining = candidates;
    SiteConfiguration current = config;
    // The base count is carried forward across picks: after accepting a
    // pick with marginal gain g the new base is exactly base + g.
    long base = covered_count(evaluator(current), tau_dbm);

    while (static_cast<int>(selected.size()) < max_count && !remaining.empty()) {
        std::erase_if(remaining,
                      [&current](const CandidateSite& c) { return current.has_site(c.index); });
        int best = -1;
        long best_gain = -1;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            SiteConfiguration with_site = current;
            add_site(with_site, make_default_site(current, remaining[i].index));
            const long gain =
                std::max(0L, covered_count(evaluator(with_site), tau_dbm) - base);
            if (gain > best_gain ||
                (gain == best_gain && remaining[i].index < remaining[best].index)) {
                best_gain = gain;
                best = static_cast<int>(i);
            }
        }
        if (best < 0 || best_gain <= 0) break;

        CandidateSite pick = remaining[best];
        pick.predicted_gain = static_cast<double>(best_gain);
        selected.push_back(pick);
        add_site(current, make_default_site(current, pick.index));
        base += best_gain;
        remaining.erase(remaining.begin() + best);
    }
    return selected;
}

std::vector<CandidateSite> greedy_select(const std::vector<CandidateSite>& candidates,
                                         const SiteConfiguration& config, const Budget& budget,
                                         const CoverageEvaluator& evaluator, double tau_dbm) {
    return greedy_select_n(candidates, config, budget.max_sites(), evaluator, tau_dbm);
}

} // namespace towerplan
