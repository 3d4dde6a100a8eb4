#include "tsgc/homology.hpp"

#include "tsgc/embedding.hpp"
#include "tsgc/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

using namespace tsgc;

namespace {

PointCloud make_cloud(const std::vector<std::vector<double>>& pts) {
    PointCloud c;
    c.dim = static_cast<int>(pts.front().size());
    for (const auto& p : pts) c.coords.insert(c.coords.end(), p.begin(), p.end());
    return c;
}

DistanceMatrix square_dm() {
    return pairwise_distances(make_cloud({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
}

PointCloud random_cloud(Rng& rng, int n, int dim) {
    PointCloud c;
    c.dim = dim;
    c.coords.resize(static_cast<std::size_t>(n) * dim);
    for (double& v : c.coords) v = rng.uniform(-1, 1);
    return c;
}

int beta_at(const Barcode& bc, int dim, double eps) {
    int count = 0;
    for (const auto& iv : bc.intervals) {
        if (iv.dim == dim && iv.birth < eps && iv.death >= eps) ++count;
    }
    return count;
}

} // namespace

TEST_SUITE("homology") {

TEST_CASE("rips enumeration on tiny clouds") {
    // 3 mutually-close points: 3 vertices + 3 edges + 1 triangle
    const DistanceMatrix tri = pairwise_distances(make_cloud({{0, 0}, {1, 0}, {0.5, 0.9}}));
    CHECK(rips_filtration(tri, 3, 2.0).simplices.size() == 7);

    const DistanceMatrix pair = pairwise_distances(make_cloud({{0, 0}, {0.5, 0}}));
    const Filtration f2 = rips_filtration(pair, 3, 2.0);
    REQUIRE(f2.simplices.size() == 3);
    CHECK(f2.simplices.back().dim == 1);
    CHECK(f2.simplices.back().diameter == doctest::Approx(0.5));

    // unit square below the diagonal length: 4 vertices + 4 side edges only
    const Filtration fs = rips_filtration(square_dm(), 3, 1.4);
    CHECK(fs.simplices.size() == 8);
    for (const auto& s : fs.simplices) CHECK(s.dim <= 1);
    // once the diagonals (sqrt 2 ~ 1.414) clear the threshold the complex fills
    CHECK(rips_filtration(square_dm(), 3, 1.5).simplices.size() == 15);
}

TEST_CASE("filtration order puts faces before cofaces") {
    Rng rng(3);
    const DistanceMatrix dm = pairwise_distances(random_cloud(rng, 10, 3));
    const Filtration filt = rips_filtration(dm, 3, dm.max_distance() * 1.01);
    for (std::size_t i = 1; i < filt.simplices.size(); ++i) {
        const auto& a = filt.simplices[i - 1];
        const auto& b = filt.simplices[i];
        const bool ordered = a.diameter < b.diameter ||
                             (a.diameter == b.diameter && a.dim <= b.dim);
        CHECK(ordered);
        CHECK(b.diameter >= a.diameter);
    }
}

TEST_CASE("complexity cap raises a clear error") {
    Rng rng(12);
    const DistanceMatrix dm = pairwise_distances(random_cloud(rng, 20, 3));
    try {
        rips_filtration(dm, 3, dm.max_distance() * 1.01, 100);
        FAIL("expected the cap error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("cap") != std::string::npos);
    }
}

TEST_CASE("reduce: two points and one edge") {
    const DistanceMatrix dm = pairwise_distances(make_cloud({{0, 0}, {0.7, 0}}));
    const Barcode bc = reduce(rips_filtration(dm, 3, 2.0));
    REQUIRE(bc.intervals.size() == 2);
    int infinite = 0, finite = 0;
    for (const auto& iv : bc.intervals) {
        CHECK(iv.dim == 0);
        CHECK(iv.birth == 0.0);
        if (iv.death == kInfiniteDeath) {
            ++infinite;
        } else {
            CHECK(iv.death == doctest::Approx(0.7));
            ++finite;
        }
    }
    CHECK(infinite == 1);
    CHECK(finite == 1);
}

TEST_CASE("reduce: the square's 4-cycle lives on [1, sqrt 2)") {
    const Barcode bc = reduce(rips_filtration(square_dm(), 3, 2.0));
    int visible_dim1 = 0;
    for (const auto& iv : bc.intervals) {
        if (iv.dim == 1 && iv.death > iv.birth) {
            ++visible_dim1;
            CHECK(iv.birth == doctest::Approx(1.0));
            CHECK(iv.death == doctest::Approx(std::sqrt(2.0)));
        }
        CHECK(iv.birth <= iv.death);
    }
    CHECK(visible_dim1 == 1);
    CHECK(beta_at(bc, 0, 1.2) == 1);
    CHECK(beta_at(bc, 1, 1.2) == 1);
    CHECK(beta_at(bc, 2, 1.2) == 0);
}

TEST_CASE("reduce: isolated points give infinite dim-0 intervals") {
    const DistanceMatrix dm =
        pairwise_distances(make_cloud({{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 30}}));
    const Barcode bc = reduce(rips_filtration(dm, 3, 1.0)); // below every distance
    CHECK(bc.intervals.size() == 5);
    for (const auto& iv : bc.intervals) {
        CHECK(iv.dim == 0);
        CHECK(iv.death == kInfiniteDeath);
    }
}

TEST_CASE("betti_series on the unit square grid") {
    const DistanceMatrix dm = square_dm();
    const Barcode bc = reduce(rips_filtration(dm, 3, 2.0));
    EpsilonGrid grid;
    grid.r_max = 2.0;
    for (int k = 1; k <= 20; ++k) grid.values.push_back(2.0 * k / 20.0);
    const EpsilonSeries series = betti_series(bc, grid, {0, 1, 2});
    REQUIRE(series.channels.size() == 3);
    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t g = 0; g < grid.values.size(); ++g) {
        const double eps = grid.values[g];
        if (eps <= 1.0) {
            CHECK(series.channels[0][g] == 4); // below the minimum distance
            CHECK(series.channels[1][g] == 0);
        } else if (eps <= sqrt2) {
            CHECK(series.channels[0][g] == 1);
            CHECK(series.channels[1][g] == 1); // the 4-cycle
        } else {
            CHECK(series.channels[0][g] == 1); // contractible regime
            CHECK(series.channels[1][g] == 0);
        }
        CHECK(series.channels[2][g] == 0);
    }
}

TEST_CASE("betti_naive on three collinear points") {
    const DistanceMatrix dm = pairwise_distances(make_cloud({{0}, {1}, {2}}));
    CHECK(betti_naive(dm, 1.5, 0) == 1);
    CHECK(betti_naive(dm, 1.5, 1) == 0);
    CHECK(betti_naive(dm, 0.5, 0) == 3);
}

TEST_CASE("betti_naive cross-checks the square") {
    const DistanceMatrix dm = square_dm();
    CHECK(betti_naive(dm, 1.2, 0) == 1);
    CHECK(betti_naive(dm, 1.2, 1) == 1);
    CHECK(betti_naive(dm, 1.2, 2) == 0);
    CHECK(betti_naive(dm, 1.5, 1) == 0); // diagonals in, triangles fill the cycle
}

TEST_CASE("betti_naive enforces the oracle scale cap") {
    Rng rng(1);
    const DistanceMatrix dm = pairwise_distances(random_cloud(rng, 13, 2));
    CHECK_THROWS(betti_naive(dm, 0.5, 0));
}

TEST_CASE("oracle equivalence on random clouds") {
    Rng rng(20240601);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(5)); // <= 7 points
        const DistanceMatrix dm = pairwise_distances(random_cloud(rng, n, 3));
        const double r_max = dm.max_distance() * 1.05;
        const Barcode bc = reduce(rips_filtration(dm, 3, r_max));
        for (int e = 1; e <= 5; ++e) {
            const double eps = r_max * e / 5.0;
            for (int k = 0; k <= 2; ++k) {
                CAPTURE(trial);
                CAPTURE(eps);
                CAPTURE(k);
                CHECK(beta_at(bc, k, eps) == betti_naive(dm, eps, k));
            }
        }
    }
}

TEST_CASE("beta0 equals the component count of the epsilon graph") {
    Rng rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(20));
        const DistanceMatrix dm = pairwise_distances(random_cloud(rng, n, 3));
        const double r_max = dm.max_distance() * 1.01;
        const Barcode bc = reduce(rips_filtration(dm, 3, r_max));
        for (int e = 1; e <= 8; ++e) {
            const double eps = r_max * e / 8.0;
            CHECK(beta_at(bc, 0, eps) == connected_components(epsilon_graph(dm, eps)));
        }
    }
}

TEST_CASE("beta0 is non-increasing and at least 1") {
    Rng rng(21);
    const DistanceMatrix dm = pairwise_distances(random_cloud(rng, 15, 3));
    const double r_max = dm.max_distance() * 1.01;
    const Barcode bc = reduce(rips_filtration(dm, 3, r_max));
    EpsilonGrid grid;
    grid.r_max = r_max;
    for (int k = 1; k <= 50; ++k) grid.values.push_back(r_max * k / 50.0);
    const EpsilonSeries series = betti_series(bc, grid, {0});
    for (std::size_t g = 0; g < grid.values.size(); ++g) {
        CHECK(series.channels[0][g] >= 1);
        if (g > 0) CHECK(series.channels[0][g] <= series.channels[0][g - 1]);
    }
}

TEST_CASE("Euler characteristic consistency at oracle scale") {
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(5));
        const DistanceMatrix dm = pairwise_distances(random_cloud(rng, n, 3));
        const double eps = dm.max_distance() * rng.uniform(0.3, 1.1);
        const auto counts = naive_simplex_counts(dm, eps);
        const long chi = static_cast<long>(counts[0]) - static_cast<long>(counts[1]) +
                         static_cast<long>(counts[2]) - static_cast<long>(counts[3]);
        // beta3' of the 3-skeleton: n3 - rank d3 (no d4 in the skeleton)
        const long beta3 =
            static_cast<long>(counts[3]) - static_cast<long>(naive_boundary_rank(dm, eps, 3));
        const long beta_alt = betti_naive(dm, eps, 0) - betti_naive(dm, eps, 1) +
                              betti_naive(dm, eps, 2) - beta3;
        CHECK(chi == beta_alt);
    }
}

TEST_CASE("reduce is deterministic") {
    Rng rng(70);
    const DistanceMatrix dm = pairwise_distances(random_cloud(rng, 12, 3));
    const Filtration filt = rips_filtration(dm, 3, dm.max_distance() * 1.01);
    const Barcode a = reduce(filt);
    const Barcode b = reduce(filt);
    REQUIRE(a.intervals.size() == b.intervals.size());
    for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        CHECK(a.intervals[i].dim == b.intervals[i].dim);
        CHECK(a.intervals[i].birth == b.intervals[i].birth);
        CHECK(a.intervals[i].death == b.intervals[i].death);
    }
}

TEST_CASE("sine-loop Takens embedding shows a persistent 1-cycle") {
    std::vector<double> series(60);
    for (std::size_t t = 0; t < series.size(); ++t) {
        series[t] = std::sin(2.0 * 3.14159265358979323846 * t / 20.0);
    }
    const PointCloud cloud = takens_embed(series, 3);
    const DistanceMatrix dm = pairwise_distances(cloud);
    const double r_max = dm.max_distance();
    const Barcode bc = reduce(rips_filtration(dm, 3, r_max));
    double longest = 0.0;
    for (const auto& iv : bc.intervals) {
        if (iv.dim == 1 && iv.death != kInfiniteDeath) {
            longest = std::max(longest, iv.death - iv.birth);
        }
    }
    CHECK(longest > 0.1 * r_max); // the attractor loop persists over a wide band
}

} // TEST_SUITE
