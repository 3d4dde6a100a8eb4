#include "tsgc/neighbor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsgc {

double DistanceMatrix::max_distance() const {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            r = std::max(r, at(i, j));
        }
    }
    return r;
}

double DistanceMatrix::enclosing_radius() const {
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double row_max = 0.0;
        for (int j = 0; j < n; ++j) {
            row_max = std::max(row_max, at(i, j));
        }
        r = std::min(r, row_max);
    }
    return n > 0 ? r : 0.0;
}

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return std::sqrt(s);
}

} // namespace

DistanceMatrix pairwise_distances_serial(const PointCloud& cloud) {
    const int n = cloud.size();
    if (n < 1) {
        throw std::invalid_argument("pairwise_distances: empty cloud");
    }
    DistanceMatrix dm;
    dm.n = n;
    dm.d.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dist = euclidean(cloud.point(i), cloud.point(j));
            dm.d[static_cast<std::size_t>(i) * n + j] = dist;
            dm.d[static_cast<std::size_t>(j) * n + i] = dist;
        }
    }
    return dm;
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    const int n = cloud.size();
    if (n < 1) {
        throw std::invalid_argument("pairwise_distances: empty cloud");
    }
    DistanceMatrix dm;
    dm.n = n;
    dm.d.assign(static_cast<std::size_t>(n) * n, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dist = euclidean(cloud.point(i), cloud.point(j));
            dm.d[static_cast<std::size_t>(i) * n + j] = dist;
            dm.d[static_cast<std::size_t>(j) * n + i] = dist;
        }
    }
    return dm;
}

Graph epsilon_graph(const DistanceMatrix& dm, double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("epsilon_graph: eps must be positive");
    }
    Graph g;
    g.n = dm.n;
    g.adj.assign(dm.n, {});
    for (int i = 0; i < dm.n; ++i) {
        for (int j = i + 1; j < dm.n; ++j) {
            if (dm.at(i, j) < eps) {
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
                ++g.edges;
            }
        }
    }
    return g;
}

int connected_components(const Graph& g) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack;
    int components = 0;
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : g.adj[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return components;
}

EpsilonGrid epsilon_grid(const DistanceMatrix& dm, int steps, RPolicy policy) {
    if (dm.n < 2) {
        throw std::invalid_argument("epsilon_grid: need at least 2 points");
    }
    if (steps < 2) {
        throw std::invalid_argument("epsilon_grid: steps must be >= 2");
    }
    const double r_max = policy == RPolicy::max_distance ? dm.max_distance()
                                                         : dm.enclosing_radius();
    if (!(r_max > 0.0)) {
        throw std::runtime_error("epsilon_grid: degenerate cloud, all points coincident");
    }
    EpsilonGrid grid;
    grid.r_max = r_max;
    grid.values.resize(steps);
    for (int k = 1; k <= steps; ++k) {
        grid.values[k - 1] = r_max * static_cast<double>(k) / static_cast<double>(steps);
    }
    grid.values.back() = r_max; // exact endpoint, no k/steps rounding
    return grid;
}

} // namespace tsgc
