#ifndef TSGC_NEIGHBOR_GRAPH_HPP
#define TSGC_NEIGHBOR_GRAPH_HPP

#include "tsgc/embedding.hpp"

#include <vector>

namespace tsgc {

// Dense symmetric Euclidean distance cache, zero diagonal. Immutable after
// construction; shared by every epsilon sweep downstream.
struct DistanceMatrix {
    int n = 0;
    std::vector<double> d; // row-major n*n

    double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
    double max_distance() const;
    // min over i of max_j d(i,j)
    double enclosing_radius() const;
};

// OpenMP over rows; the serial version is the reference the tests compare
// against bit for bit.
DistanceMatrix pairwise_distances(const PointCloud& cloud);
DistanceMatrix pairwise_distances_serial(const PointCloud& cloud);

// Undirected simple graph as adjacency lists.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    long edges = 0;
};

// Edge (i, j) iff d(i, j) < eps, strict.
Graph epsilon_graph(const DistanceMatrix& dm, double eps);

int connected_components(const Graph& g);

struct EpsilonGrid {
    std::vector<double> values; // strictly increasing, last = r_max
    double r_max = 0.0;

    int steps() const { return static_cast<int>(values.size()); }
};

enum class RPolicy { max_distance, enclosing_radius };

// { r_max * k / steps : k = 1..steps }. Throws on degenerate (all-coincident)
// clouds where r_max = 0.
EpsilonGrid epsilon_grid(const DistanceMatrix& dm, int steps,
                         RPolicy policy = RPolicy::max_distance);

} // namespace tsgc

#endif
