#include "tsgc/ingest.hpp"

#include "tsgc/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace tsgc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("tsgc_ingest_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string& name, const std::string& content) const {
        std::ofstream out(path / name);
        out << content;
    }
};

} // namespace

TEST_SUITE("ingest") {

TEST_CASE("file parse in order, tags from filename") {
    TempDir dir;
    dir.write("Z001.txt", "12\n-5\n40\n");
    dir.write("Z002.txt", "1\r\n2\r\n3\r\n"); // CRLF
    dir.write("O001.txt", "7\n8\n");
    dir.write("S001.txt", "9\n9\n"); // set E, not in class_map -> skipped
    dir.write("readme.md", "not data\n"); // unknown tag -> skipped

    const auto loaded = load_bonn_dir(dir.path.string(), {{'A', 0}, {'B', 1}});
    REQUIRE(loaded.size() == 3);
    // lexicographic filename order: O001 < Z001 < Z002
    CHECK(loaded[0].series.source_id == "O001.txt");
    CHECK(loaded[0].set_tag == 'B');
    CHECK(loaded[0].label == 1);
    CHECK(loaded[1].series.values == std::vector<double>{12, -5, 40});
    CHECK(loaded[1].set_tag == 'A');
    CHECK(loaded[2].series.values == std::vector<double>{1, 2, 3});
}

TEST_CASE("set_map prefix override beats the first-letter convention") {
    TempDir dir;
    dir.write("eyes_closed_01.txt", "1\n2\n");
    const auto loaded =
        load_bonn_dir(dir.path.string(), {{'B', 1}}, {{"eyes_closed", 'B'}});
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].set_tag == 'B');
}

TEST_CASE("empty directory gives empty list") {
    TempDir dir;
    CHECK(load_bonn_dir(dir.path.string(), {{'A', 0}}).empty());
}

TEST_CASE("errors: missing dir, junk line") {
    CHECK_THROWS(load_bonn_dir("/nonexistent/really", {{'A', 0}}));
    TempDir dir;
    dir.write("Z1.txt", "1\ntwo\n3\n");
    try {
        load_bonn_dir(dir.path.string(), {{'A', 0}});
        FAIL("expected parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos); // line number
    }
}

TEST_CASE("segment: 4097-sample series") {
    TimeSeries s;
    s.values.resize(4097);
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = static_cast<double>(i);

    auto chunks = segment(s, 600, 'A', 0);
    REQUIRE(chunks.size() == 6); // floor(4097/600), 497 samples dropped
    CHECK(chunks[0].series.values.front() == 0);
    CHECK(chunks[5].series.values.back() == 6 * 600 - 1);
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        CHECK(chunks[c].chunk_index == static_cast<int>(c));
        CHECK(chunks[c].series.size() == 600);
    }
    CHECK(segment(s, 200).size() == 20);
}

TEST_CASE("segment edge cases") {
    TimeSeries s;
    s.values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto one = segment(s, 10);
    REQUIRE(one.size() == 1);
    CHECK(one[0].series.values == s.values);
    CHECK(segment(s, 11).empty());
    CHECK_THROWS_AS(segment(s, 1), std::invalid_argument);
}

TEST_CASE("segment-concat round trip") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        TimeSeries s;
        const int len = 5 + static_cast<int>(rng.below(200));
        s.values.resize(len);
        for (double& v : s.values) v = rng.normal();
        const int chunk_len = 2 + static_cast<int>(rng.below(40));
        std::vector<double> rejoined;
        for (const auto& chunk : segment(s, chunk_len)) {
            rejoined.insert(rejoined.end(), chunk.series.values.begin(),
                            chunk.series.values.end());
        }
        const std::size_t kept = (len / chunk_len) * chunk_len;
        CHECK(rejoined == std::vector<double>(s.values.begin(), s.values.begin() + kept));
    }
}

TEST_CASE("zscore examples") {
    CHECK(zscore(std::vector<double>{1, 1, 1, 1}) == std::vector<double>{0, 0, 0, 0});
    auto z2 = zscore(std::vector<double>{0, 2});
    CHECK(z2[0] == doctest::Approx(-1));
    CHECK(z2[1] == doctest::Approx(1));
    auto z5 = zscore(std::vector<double>{1, 2, 3, 4, 5});
    const double r2 = std::sqrt(2.0);
    CHECK(z5[0] == doctest::Approx(-r2));
    CHECK(z5[1] == doctest::Approx(-r2 / 2));
    CHECK(z5[2] == doctest::Approx(0));
    CHECK(z5[3] == doctest::Approx(r2 / 2));
    CHECK(z5[4] == doctest::Approx(r2));
}

TEST_CASE("zscore is idempotent on non-constant input") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(3 + rng.below(100));
        for (double& x : v) x = rng.uniform(-50, 50);
        const auto once = zscore(v);
        const auto twice = zscore(once);
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(std::abs(once[i] - twice[i]) <= 1e-12);
        }
    }
}

} // TEST_SUITE
