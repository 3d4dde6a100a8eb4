#include "tsgc/embedding.hpp"

#include "tsgc/rng.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace tsgc;

TEST_SUITE("embedding") {

TEST_CASE("definition unrolled") {
    const std::vector<double> s{1, 2, 3, 4};
    const PointCloud cloud = takens_embed(s, 2);
    REQUIRE(cloud.size() == 3);
    CHECK(cloud.dim == 2);
    CHECK(cloud.point(0)[0] == 1);
    CHECK(cloud.point(0)[1] == 2);
    CHECK(cloud.point(1)[0] == 2);
    CHECK(cloud.point(1)[1] == 3);
    CHECK(cloud.point(2)[0] == 3);
    CHECK(cloud.point(2)[1] == 4);
}

TEST_CASE("window 1 is the identity embedding") {
    const std::vector<double> s{5, -1, 7};
    const PointCloud cloud = takens_embed(s, 1);
    REQUIRE(cloud.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(cloud.point(i)[0] == s[i]);
    }
}

TEST_CASE("length-600 chunk with m = 3") {
    std::vector<double> s(600, 0.0);
    CHECK(takens_embed(s, 3).size() == 598);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(takens_embed(std::vector<double>{1, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(takens_embed(std::vector<double>{1, 2}, 0), std::invalid_argument);
}

TEST_CASE("count invariant and window overlap over random inputs") {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(6));
        const int len = m + static_cast<int>(rng.below(80));
        std::vector<double> s(len);
        for (double& v : s) v = rng.normal();
        const PointCloud cloud = takens_embed(s, m);
        REQUIRE(cloud.size() == len - m + 1);
        for (int i = 0; i + 1 < cloud.size(); ++i) {
            for (int k = 1; k < m; ++k) {
                CHECK(cloud.point(i)[k] == cloud.point(i + 1)[k - 1]);
            }
        }
    }
}

} // TEST_SUITE
