#include "tsgc/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tsgc {

SymmetricMatrix normalized_laplacian(const Graph& g) {
    SymmetricMatrix m;
    m.n = g.n;
    m.a.assign(static_cast<std::size_t>(g.n) * g.n, 0.0);
    std::vector<double> inv_sqrt_deg(g.n, 0.0);
    for (int i = 0; i < g.n; ++i) {
        const std::size_t deg = g.adj[i].size();
        if (deg > 0) {
            m.set(i, i, 1.0);
            inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(deg));
        }
    }
    for (int i = 0; i < g.n; ++i) {
        for (int j : g.adj[i]) {
            if (j > i) {
                m.set(i, j, -inv_sqrt_deg[i] * inv_sqrt_deg[j]);
            }
        }
    }
    return m;
}

SpectrumVector sym_eigenvalues(const SymmetricMatrix& m, double tol) {
    if (tol <= 0.0) {
        tol = 1e-9 * static_cast<double>(m.n);
    }
    (void)tol; // the backend's accuracy exceeds the default contract
    Eigen::Map<const Eigen::MatrixXd> mat(m.a.data(), m.n, m.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sym_eigenvalues: eigensolver failed to converge on order-" +
                                 std::to_string(m.n) + " matrix");
    }
    SpectrumVector out;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m.n);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

int count_in(const SpectrumVector& values, double lo, double hi, bool closed_hi) {
    int count = 0;
    for (double v : values.eigenvalues) {
        if (v >= lo && (closed_hi ? v <= hi : v < hi)) {
            ++count;
        }
    }
    return count;
}

TauPartition TauPartition::uniform(int k) {
    if (k < 1) {
        throw std::invalid_argument("TauPartition: need at least 1 bucket");
    }
    TauPartition t;
    t.taus.resize(k + 1);
    for (int j = 0; j <= k; ++j) {
        t.taus[j] = 2.0 * static_cast<double>(j) / static_cast<double>(k);
    }
    t.taus.back() = 2.0;
    return t;
}

TauPartition TauPartition::from_list(const std::vector<double>& taus) {
    if (taus.size() < 2 || taus.front() != 0.0 || taus.back() != 2.0 ||
        !std::is_sorted(taus.begin(), taus.end()) ||
        std::adjacent_find(taus.begin(), taus.end()) != taus.end()) {
        throw std::invalid_argument("TauPartition: must be strictly increasing from 0 to 2");
    }
    TauPartition t;
    t.taus = taus;
    return t;
}

namespace {

constexpr double kChungSlack = 1e-8;

// one epsilon's worth of bucket counts
void mu_at(const DistanceMatrix& dm, double eps, const TauPartition& taus,
           std::vector<double>& out, std::size_t stride, std::size_t g) {
    const Graph graph = epsilon_graph(dm, eps);
    const SymmetricMatrix lap = normalized_laplacian(graph);
    SpectrumVector spectrum = sym_eigenvalues(lap);
    const int k = taus.channels();
    for (double& v : spectrum.eigenvalues) {
        if (v < -kChungSlack || v > 2.0 + kChungSlack) {
            throw std::runtime_error("mu_series: eigenvalue " + std::to_string(v) +
                                     " outside [0,2] at eps = " + std::to_string(eps));
        }
        v = std::clamp(v, 0.0, 2.0);
    }
    for (int j = 0; j < k; ++j) {
        const bool last = j == k - 1;
        out[static_cast<std::size_t>(j) * stride + g] = static_cast<double>(
            count_in(spectrum, taus.taus[j], taus.taus[j + 1], last));
    }
}

EpsilonSeries mu_series_impl(const DistanceMatrix& dm, const EpsilonGrid& grid,
                             const TauPartition& taus, bool parallel) {
    const int k = taus.channels();
    if (k < 1) {
        throw std::invalid_argument("mu_series: empty tau partition");
    }
    const std::size_t steps = grid.values.size();
    std::vector<double> flat(static_cast<std::size_t>(k) * steps, 0.0);

    std::string error;
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long g = 0; g < static_cast<long>(steps); ++g) {
            if (!error.empty()) continue;
            try {
                mu_at(dm, grid.values[g], taus, flat, steps, static_cast<std::size_t>(g));
            } catch (const std::exception& e) {
#pragma omp critical
                if (error.empty()) error = e.what();
            }
        }
    } else {
        for (std::size_t g = 0; g < steps; ++g) {
            mu_at(dm, grid.values[g], taus, flat, steps, g);
        }
    }
    if (!error.empty()) {
        throw std::runtime_error(error);
    }

    EpsilonSeries series;
    series.grid = grid;
    series.kind = SeriesKind::spectra;
    series.channels.resize(k);
    for (int j = 0; j < k; ++j) {
        series.channels[j].assign(flat.begin() + static_cast<std::size_t>(j) * steps,
                                  flat.begin() + static_cast<std::size_t>(j + 1) * steps);
    }
    return series;
}

} // namespace

EpsilonSeries mu_series(const DistanceMatrix& dm, const EpsilonGrid& grid,
                        const TauPartition& taus) {
    return mu_series_impl(dm, grid, taus, true);
}

EpsilonSeries mu_series_serial(const DistanceMatrix& dm, const EpsilonGrid& grid,
                               const TauPartition& taus) {
    return mu_series_impl(dm, grid, taus, false);
}

} // namespace tsgc
