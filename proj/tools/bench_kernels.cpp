// Compares the OpenMP kernels against their serial reference
// implementations on synthetic data and prints wall times + speedups.
//
//   tsgc_bench [n_points] [eps_steps] [reps]

#include "tsgc/embedding.hpp"
#include "tsgc/neighbor_graph.hpp"
#include "tsgc/rng.hpp"
#include "tsgc/spectra.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <functional>

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = omp_get_wtime();
        fn();
        const double dt = omp_get_wtime() - t0;
        if (dt < best) best = dt;
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    const int n_points = argc > 1 ? std::atoi(argv[1]) : 2000;
    const int steps = argc > 2 ? std::atoi(argv[2]) : 300;
    const int reps = argc > 3 ? std::atoi(argv[3]) : 3;

    std::printf("threads: %d\n", omp_get_max_threads());

    tsgc::Rng rng(7);
    std::vector<double> series(n_points + 2);
    for (double& v : series) v = rng.normal();
    const tsgc::PointCloud cloud = tsgc::takens_embed(series, 3);

    std::printf("\npairwise_distances, %d points in R3:\n", cloud.size());
    tsgc::DistanceMatrix dm;
    const double t_serial = best_of(reps, [&] { dm = tsgc::pairwise_distances_serial(cloud); });
    const double t_parallel = best_of(reps, [&] { dm = tsgc::pairwise_distances(cloud); });
    std::printf("  serial   %8.3f ms\n", t_serial * 1e3);
    std::printf("  openmp   %8.3f ms   (x%.2f)\n", t_parallel * 1e3, t_serial / t_parallel);

    // smaller cloud for the eigensolver sweep
    std::vector<double> short_series(series.begin(), series.begin() + 152);
    const tsgc::PointCloud small = tsgc::takens_embed(short_series, 3);
    const tsgc::DistanceMatrix small_dm = tsgc::pairwise_distances_serial(small);
    const tsgc::EpsilonGrid grid = tsgc::epsilon_grid(small_dm, steps);
    const tsgc::TauPartition taus = tsgc::TauPartition::uniform(7);

    std::printf("\nmu_series, %d points x %d epsilon values:\n", small.size(), steps);
    tsgc::EpsilonSeries mu;
    const double m_serial =
        best_of(reps, [&] { mu = tsgc::mu_series_serial(small_dm, grid, taus); });
    const double m_parallel = best_of(reps, [&] { mu = tsgc::mu_series(small_dm, grid, taus); });
    std::printf("  serial   %8.3f ms\n", m_serial * 1e3);
    std::printf("  openmp   %8.3f ms   (x%.2f)\n", m_parallel * 1e3, m_serial / m_parallel);

    return 0;
}
