#pragma once

#include "towerplan/grid.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace towerplan {

// A group of low-coverage points. Members are point indices, ascending;
// centroid_rc is the arithmetic mean of the member (row, col) coordinates.
struct Cluster {
    int id = 0;
    std::vector<int> members;
    Eigen::Vector2d centroid_rc{0.0, 0.0};
};

struct DbscanParams {
    double eps = 2.5; // grid units, Euclidean on (row, col)
    int min_pts = 4;  // neighbourhood size including the point itself
};

struct KmeansParams {
    int k = 4;
    int max_iterations = 100;
};

enum class ClusterMethod { dbscan, kmeans };

const char* cluster_method_name(ClusterMethod method);
ClusterMethod cluster_method_from_name(const std::string& name); // ParseError

struct ClusterOptions {
    ClusterMethod method = ClusterMethod::dbscan;
    DbscanParams dbscan;
    KmeansParams kmeans;
};

// Clusters plus the points belonging to none (DBSCAN noise; always empty
// for k-means). Cluster ids count up from 0 in formation order.
struct Clustering {
    std::vector<Cluster> clusters;
    std::vector<int> noise;
};

// Deterministic DBSCAN over grid points. A point is core when its
// eps-neighbourhood (itself included) holds at least min_pts points;
// clusters are the connected components of core points under eps-adjacency,
// formed in ascending order of their lowest core index. A border point
// (non-core within eps of a core) joins the first-formed cluster that
// reaches it; everything else is noise.
Clustering dbscan_cluster(const std::vector<int>& points, const GridSpec& grid,
                          const DbscanParams& params);

// Deterministic k-means (Lloyd). Centers are seeded by the farthest-point
// heuristic starting from the lowest-index point; iteration stops when
// assignments are stable or after max_iterations. A cluster that empties is
// re-seeded with the point farthest from its assigned centroid. All ties
// resolve to the lowest point (or cluster) index.
Clustering kmeans_cluster(const std::vector<int>& points, const GridSpec& grid,
                          const KmeansParams& params);

// Dispatch on options.method. kmeans requires points to be non-empty and
// k <= |points| (ConfigError otherwise).
Clustering cluster_points(const std::vector<int>& points, const GridSpec& grid,
                          const ClusterOptions& options);

} // namespace towerplan
