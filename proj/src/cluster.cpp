#include "towerplan/cluster.hpp"

#include "towerplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace towerplan {

namespace {

struct RC {
    int row;
    int col;
};

// Squared Euclidean distance on (row, col); exact in integer arithmetic, so
// the eps comparison has no rounding ambiguity.
long long squared_distance(RC a, RC b) {
    const long long dr = a.row - b.row;
    const long long dc = a.col - b.col;
    return dr * dr + dc * dc;
}

std::vector<RC> to_coords(const std::vector<int>& points, const GridSpec& grid) {
    std::vector<RC> coords;
    coords.reserve(points.size());
    for (int p : points) {
        const auto [row, col] = index_to_coords(p, grid);
        coords.push_back({row, col});
    }
    return coords;
}

Eigen::Vector2d centroid_of(const std::vector<int>& members, const GridSpec& grid) {
    Eigen::Vector2d sum{0.0, 0.0};
    for (int p : members) {
        const auto [row, col] = index_to_coords(p, grid);
        sum += Eigen::Vector2d(row, col);
    }
    return sum / static_cast<double>(members.size());
}

} // namespace

const char* cluster_method_name(ClusterMethod method) {
    return method == ClusterMethod::dbscan ? "dbscan" : "kmeans";
}

ClusterMethod cluster_method_from_name(const std::string& name) {
    if (name == "dbscan") return ClusterMethod::dbscan;
    if (name == "kmeans") return ClusterMethod::kmeans;
    throw ParseError("unknown cluster method '" + name + "'");
}

Clustering dbscan_cluster(const std::vector<int>& points, const GridSpec& grid,
                          const DbscanParams& params) {
    validate(grid);
    if (!(params.eps > 0.0)) throw ConfigError("dbscan eps must be > 0");
    if (params.min_pts < 1) throw ConfigError("dbscan min_pts must be >= 1");

    std::vector<int> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const auto n = static_cast<int>(sorted.size());
    const std::vector<RC> coords = to_coords(sorted, grid);

    // eps is small relative to typical point counts, so the O(n^2)
    // neighbourhood scan is fine at the sizes the planner produces.
    const double eps_sq = params.eps * params.eps;
    std::vector<std::vector<int>> neighbours(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (static_cast<double>(squared_distance(coords[i], coords[j])) <= eps_sq)
                neighbours[i].push_back(j); // includes i itself
        }
    }
    std::vector<bool> core(n);
    for (int i = 0; i < n; ++i) core[i] = static_cast<int>(neighbours[i].size()) >= params.min_pts;

    constexpr int kUnassigned = -1;
    std::vector<int> label(n, kUnassigned);
    Clustering result;

    for (int seed = 0; seed < n; ++seed) {
        if (!core[seed] || label[seed] != kUnassigned) continue;
        const int cluster_id = static_cast<int>(result.clusters.size());
        std::deque<int> queue{seed};
        label[seed] = cluster_id;
        std::vector<int> members;
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            members.push_back(sorted[p]);
            for (int q : neighbours[p]) {
                if (label[q] != kUnassigned) continue;
                label[q] = cluster_id; // border points stay with the first cluster to reach them
                if (core[q]) queue.push_back(q);
                else members.push_back(sorted[q]);
            }
        }
        std::sort(members.begin(), members.end());
        Cluster cluster;
        cluster.id = cluster_id;
        cluster.members = std::move(members);
        cluster.centroid_rc = centroid_of(cluster.members, grid);
        result.clusters.push_back(std::move(cluster));
    }

    for (int i = 0; i < n; ++i)
        if (label[i] == kUnassigned) result.noise.push_back(sorted[i]);
    return result;
}

Clustering kmeans_cluster(const std::vector<int>& points, const GridSpec& grid,
                          const KmeansParams& params) {
    validate(grid);
    std::vector<int> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const auto n = static_cast<int>(sorted.size());
    if (n == 0) throw ConfigError("kmeans needs a non-empty point set");
    if (params.k < 1) throw ConfigError("kmeans k must be >= 1");
    if (params.k > n)
        throw ConfigError("kmeans k=" + std::to_string(params.k) + " exceeds point count " +
                          std::to_string(n));
    if (params.max_iterations < 1) throw ConfigError("kmeans max_iterations must be >= 1");

    const std::vector<RC> coords = to_coords(sorted, grid);
    const int k = params.k;

    // Farthest-point seeding from the lowest-index point: each next center
    // maximizes the distance to its nearest chosen center.
    std::vector<Eigen::Vector2d> centers;
    centers.reserve(k);
    std::vector<long long> nearest_sq(n, std::numeric_limits<long long>::max());
    std::vector<bool> chosen(n, false);
    int pick = 0;
    for (int c = 0; c < k; ++c) {
        chosen[pick] = true;
        centers.emplace_back(coords[pick].row, coords[pick].col);
        for (int i = 0; i < n; ++i)
            nearest_sq[i] = std::min(nearest_sq[i], squared_distance(coords[i], coords[pick]));
        long long best = -1;
        pick = -1;
        for (int i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            if (nearest_sq[i] > best) {
                best = nearest_sq[i];
                pick = i;
            }
        }
        if (pick < 0) break; // every point is a center (k == n)
    }

    std::vector<int> assignment(n, -1);
    auto assign_all = [&]() {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double dr = coords[i].row - centers[c].x();
                const double dc = coords[i].col - centers[c].y();
                const double d = dr * dr + dc * dc;
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            if (assignment[i] != best_c) {
                assignment[i] = best_c;
                changed = true;
            }
        }
        return changed;
    };

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        if (!assign_all() && iter > 0) break;

        // Re-seed empty clusters with the point farthest from its current
        // centroid, never stripping a cluster down to nothing itself.
        std::vector<int> counts(k, 0);
        for (int a : assignment) ++counts[a];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            int farthest = -1;
            double farthest_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (counts[assignment[i]] < 2) continue;
                const double dr = coords[i].row - centers[assignment[i]].x();
                const double dc = coords[i].col - centers[assignment[i]].y();
                const double d = dr * dr + dc * dc;
                if (d > farthest_d) {
                    farthest_d = d;
                    farthest = i;
                }
            }
            if (farthest < 0) break; // k == n edge: every cluster is a singleton
            --counts[assignment[farthest]];
            assignment[farthest] = c;
            ++counts[c];
            centers[c] = Eigen::Vector2d(coords[farthest].row, coords[farthest].col);
        }

        // Lloyd update.
        std::vector<Eigen::Vector2d> sums(k, Eigen::Vector2d::Zero());
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            sums[assignment[i]] += Eigen::Vector2d(coords[i].row, coords[i].col);
            ++counts[assignment[i]];
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) centers[c] = sums[c] / static_cast<double>(counts[c]);
    }

    Clustering result;
    result.clusters.resize(k);
    for (int c = 0; c < k; ++c) result.clusters[c].id = c;
    for (int i = 0; i < n; ++i) result.clusters[assignment[i]].members.push_back(sorted[i]);
    for (Cluster& cluster : result.clusters)
        cluster.centroid_rc = centroid_of(cluster.members, grid);
    return result;
}

Clustering cluster_points(const std::vector<int>& points, const GridSpec& grid,
                          const ClusterOptions& options) {
    if (options.method == ClusterMethod::dbscan)
        return dbscan_cluster(points, grid, options.dbscan);
    return kmeans_cluster(points, grid, options.kmeans);
}

} // namespace towerplan
