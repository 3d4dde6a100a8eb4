#ifndef TSGC_HOMOLOGY_HPP
#define TSGC_HOMOLOGY_HPP

#include "tsgc/neighbor_graph.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace tsgc {

struct FilteredSimplex {
    std::array<std::uint16_t, 4> v{}; // v[0..dim] valid, strictly increasing
    std::uint8_t dim = 0;
    double diameter = 0.0; // max pairwise distance, 0 for vertices
};

// Simplices sorted by (diameter, dim, lexicographic vertices) so every face
// precedes its cofaces, including at equal diameter.
struct Filtration {
    std::vector<FilteredSimplex> simplices;
    int max_dim = 3;
    double r_max = 0.0;
    int n_vertices = 0;
};

// Every simplex of dim <= max_dim with diameter < r_max, enumerated by
// neighbor-intersection pruning. Throws when the simplex count exceeds `cap`.
Filtration rips_filtration(const DistanceMatrix& dm, int max_dim, double r_max,
                           std::size_t cap = 50000000);

constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

struct BarcodeInterval {
    int dim = 0;
    double birth = 0.0;
    double death = kInfiniteDeath;
};

struct Barcode {
    std::vector<BarcodeInterval> intervals;
};

// Column reduction of the boundary matrices over GF(2), one pairing per
// positive/negative simplex pair. Zero-length intervals are retained; they
// never affect beta queries.
Barcode reduce(const Filtration& filtration);

enum class SeriesKind { betti, spectra, raw };

struct EpsilonSeries {
    std::vector<std::vector<double>> channels; // each of grid length
    EpsilonGrid grid;
    SeriesKind kind = SeriesKind::betti;
};

// Channel k at grid value eps = #{intervals of dim k : birth < eps <= death}.
EpsilonSeries betti_series(const Barcode& barcode, const EpsilonGrid& grid,
                           const std::vector<int>& dims = {0, 1, 2});

// Independent oracle: beta = dim Ker(d_k) - rank(d_{k+1}) from explicitly
// built boundary matrices at a single epsilon. Exponential; capped at 12
// points.
int betti_naive(const DistanceMatrix& dm, double eps, int k);

// Pieces of the oracle exposed for consistency checks (Euler characteristic
// at test scale): simplex counts per dimension and boundary ranks of the
// complex {diameter < eps}.
std::array<std::size_t, 4> naive_simplex_counts(const DistanceMatrix& dm, double eps);
std::size_t naive_boundary_rank(const DistanceMatrix& dm, double eps, int k);

} // namespace tsgc

#endif
