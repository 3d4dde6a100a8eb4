#ifndef TSGC_SPECTRA_HPP
#define TSGC_SPECTRA_HPP

#include "tsgc/homology.hpp"
#include "tsgc/neighbor_graph.hpp"

#include <vector>

namespace tsgc {

struct SymmetricMatrix {
    int n = 0;
    std::vector<double> a; // row-major n*n, symmetric by construction

    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    void set(int i, int j, double v) {
        a[static_cast<std::size_t>(i) * n + j] = v;
        a[static_cast<std::size_t>(j) * n + i] = v;
    }
};

// I - D^{-1/2} A D^{-1/2}: diagonal 1 for non-isolated vertices, 0 for
// isolated ones (they contribute eigenvalue 0, matching the component count
// identity); off-diagonal -1/sqrt(deg_i deg_j) on edges.
SymmetricMatrix normalized_laplacian(const Graph& g);

struct SpectrumVector {
    std::vector<double> eigenvalues; // ascending
};

// All n eigenvalues in ascending order, each within tol of the true
// spectrum (tol <= 0 selects the default 1e-9 * n). Throws on solver
// non-convergence, naming the matrix order.
SpectrumVector sym_eigenvalues(const SymmetricMatrix& m, double tol = -1.0);

// #{v in [lo, hi)} or #{v in [lo, hi]} per closed_hi.
int count_in(const SpectrumVector& values, double lo, double hi, bool closed_hi);

// 0 = tau_0 < tau_1 < ... < tau_k = 2
struct TauPartition {
    std::vector<double> taus;

    int channels() const { return static_cast<int>(taus.size()) - 1; }
    static TauPartition uniform(int k);
    static TauPartition from_list(const std::vector<double>& taus);
};

// Per grid epsilon: epsilon graph, normalized Laplacian, eigenvalues, then
// counts per tau bucket (half-open, last closed at 2). The epsilon sweep is
// OpenMP-parallel; mu_series_serial is the reference implementation.
EpsilonSeries mu_series(const DistanceMatrix& dm, const EpsilonGrid& grid,
                        const TauPartition& taus);
EpsilonSeries mu_series_serial(const DistanceMatrix& dm, const EpsilonGrid& grid,
                               const TauPartition& taus);

} // namespace tsgc

#endif
