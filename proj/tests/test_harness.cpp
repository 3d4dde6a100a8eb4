#include "tsgc/harness.hpp"

#include "tsgc/csv.hpp"
#include "tsgc/ingest.hpp"
#include "tsgc/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace tsgc;
namespace fs = std::filesystem;

namespace {

std::vector<int> balanced_labels(int n) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i % 2;
    return labels;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Config fast_synthetic_config() {
    Config cfg = parse_config(
        "data_kind = synthetic\n"
        "synthetic_per_class = 100\n"
        "chunk_lens = 60\n"
        "resolutions = 60\n"
        "methods = dropout\n"
        "dynamic = 0\n"
        "features = raw\n"
        "timing = none\n"
        "kfold = 10\n",
        "<test>");
    return cfg;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("kfold: stratified balanced folds partition the indices") {
    const auto labels = balanced_labels(200);
    const auto folds = kfold_split(200, 10, 99, labels);
    REQUIRE(folds.size() == 10);
    std::set<int> seen;
    for (const auto& [train, test] : folds) {
        CHECK(test.size() == 20);
        int ones = 0;
        for (int i : test) {
            ones += labels[i];
            CHECK(seen.insert(i).second); // folds are disjoint
        }
        CHECK(ones == 10); // 10 per class
        CHECK(train.size() == 180);
        // train and test never overlap
        std::set<int> train_set(train.begin(), train.end());
        for (int i : test) CHECK(train_set.count(i) == 0);
    }
    CHECK(seen.size() == 200); // union covers everything
}

TEST_CASE("kfold: proportions within one even when classes are uneven") {
    std::vector<int> labels(103, 0);
    for (int i = 0; i < 41; ++i) labels[i] = 1;
    const auto folds = kfold_split(103, 10, 5, labels);
    std::vector<int> ones_per_fold, sizes;
    for (const auto& [train, test] : folds) {
        int ones = 0;
        for (int i : test) ones += labels[i];
        ones_per_fold.push_back(ones);
        sizes.push_back(static_cast<int>(test.size()));
    }
    const auto [min_ones, max_ones] =
        std::minmax_element(ones_per_fold.begin(), ones_per_fold.end());
    CHECK(*max_ones - *min_ones <= 1);
}

TEST_CASE("kfold: deterministic in the seed") {
    const auto labels = balanced_labels(50);
    CHECK(kfold_split(50, 10, 7, labels) == kfold_split(50, 10, 7, labels));
    CHECK(kfold_split(50, 10, 7, labels) != kfold_split(50, 10, 8, labels));
}

TEST_CASE("kfold: scarce class falls back to unstratified but still partitions") {
    std::vector<int> labels(30, 0);
    labels[3] = 1;
    labels[17] = 1; // 2 members < 10 folds
    const auto folds = kfold_split(30, 10, 1, labels);
    std::set<int> seen;
    for (const auto& [train, test] : folds) {
        for (int i : test) CHECK(seen.insert(i).second);
    }
    CHECK(seen.size() == 30);
    CHECK_THROWS_AS(kfold_split(5, 10, 1, std::vector<int>(5, 0)), std::invalid_argument);
}

TEST_CASE("raw kernel arithmetic follows (res/600)*18") {
    CHECK(raw_kernel1(600, "half_even") == 18);
    CHECK(raw_kernel1(300, "half_even") == 9);
    CHECK(raw_kernel1(200, "half_even") == 6);
    CHECK(raw_kernel1(100, "half_even") == 3);
    CHECK(raw_kernel1(250, "half_even") == 8);  // 7.5 rounds to even
    CHECK(raw_kernel1(150, "half_even") == 4);  // 4.5 rounds to even
    CHECK(raw_kernel1(150, "half_up") == 5);
    CHECK(raw_kernel1(10, "half_even") == 1);   // floored at 1
}

TEST_CASE("model specs per feature") {
    const Config cfg = parse_config("", "<t>");
    const ModelSpec raw = model_spec_for(Feature::raw, 600, cfg);
    CHECK(raw.input_len == 600);
    CHECK(raw.in_channels == 1);
    CHECK(raw.factor == 5);
    CHECK(raw.kernel1 == 18);
    CHECK(raw.kernel2 == 2);
    CHECK(raw.pool1 == 7);
    CHECK(raw.pool2 == 3);

    const ModelSpec betti = model_spec_for(Feature::betti, 200, cfg);
    CHECK(betti.input_len == 300); // epsilon grid length, not the resolution
    CHECK(betti.in_channels == 3);
    CHECK(betti.factor == 7);

    const ModelSpec spectra = model_spec_for(Feature::spectra, 200, cfg);
    CHECK(spectra.in_channels == 7);
    CHECK(spectra.factor == 3);
}

TEST_CASE("synthetic corpus is deterministic and labeled") {
    Config cfg = fast_synthetic_config();
    const auto a = build_corpus(cfg, 60);
    const auto b = build_corpus(cfg, 60);
    REQUIRE(a.size() == 200);
    int zeros = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].series.size() == 60);
        CHECK(a[i].series.values == b[i].series.values);
        zeros += a[i].label == 0 ? 1 : 0;
    }
    CHECK(zeros == 100);
}

TEST_CASE("resolution equal to chunk length reproduces the undownsampled features") {
    Config cfg = fast_synthetic_config();
    const auto corpus = build_corpus(cfg, 60);
    const Dataset ds =
        extract_dataset(Feature::raw, corpus, Method::dropout, false, 60, cfg);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CHECK(ds.xs[i] == zscore(corpus[i].series.values));
    }
    // mean and lttb with all-singleton buckets degenerate to the same identity
    const Dataset via_mean =
        extract_dataset(Feature::raw, corpus, Method::mean, false, 60, cfg);
    CHECK(via_mean.xs == ds.xs);
}

TEST_CASE("run_cell separates sine from noise with raw features") {
    Config cfg = fast_synthetic_config();
    const auto corpus = build_corpus(cfg, 60);
    ExperimentCell cell;
    cell.feature = Feature::raw;
    cell.chunk_len = 60;
    cell.method = Method::dropout;
    cell.dynamic = false;
    cell.resolution = 60;
    const CellResult result = run_cell(cell, corpus, cfg);
    REQUIRE(result.ok());
    REQUIRE(result.fold_accs.size() == 10);
    CHECK(result.mean_acc >= 0.9);

    // mean/std recompute exactly from the folds
    double mean = 0;
    for (double a : result.fold_accs) mean += a;
    mean /= result.fold_accs.size();
    double var = 0;
    for (double a : result.fold_accs) var += (a - mean) * (a - mean);
    var /= result.fold_accs.size();
    CHECK(result.mean_acc == mean);
    CHECK(result.std_acc == doctest::Approx(std::sqrt(var)).epsilon(1e-15));
    CHECK(result.wall_time_s == 0.0); // timing = none
}

TEST_CASE("run_cell with shuffled labels lands in the null band") {
    Config cfg = fast_synthetic_config();
    auto corpus = build_corpus(cfg, 60);
    // destroy the label/content association deterministically
    std::vector<int> labels;
    for (const auto& chunk : corpus) labels.push_back(chunk.label);
    Rng rng(424242);
    rng.shuffle(labels);
    for (std::size_t i = 0; i < corpus.size(); ++i) corpus[i].label = labels[i];

    ExperimentCell cell;
    cell.feature = Feature::raw;
    cell.chunk_len = 60;
    cell.method = Method::dropout;
    cell.dynamic = false;
    cell.resolution = 60;
    const CellResult result = run_cell(cell, corpus, cfg);
    REQUIRE(result.ok());
    CHECK(result.mean_acc >= 0.35);
    CHECK(result.mean_acc <= 0.65);
}

TEST_CASE("run_cell reports extraction failures instead of throwing") {
    Config cfg = fast_synthetic_config();
    cfg.features = {"betti"};
    cfg.simplex_cap = 50; // guaranteed cap hit
    const auto corpus = build_corpus(cfg, 60);
    ExperimentCell cell;
    cell.feature = Feature::betti;
    cell.chunk_len = 60;
    cell.method = Method::dropout;
    cell.dynamic = false;
    cell.resolution = 60;
    const CellResult result = run_cell(cell, corpus, cfg);
    CHECK_FALSE(result.ok());
    CHECK(result.status.find("cap") != std::string::npos);
}

TEST_CASE("default grid enumerates the full design matrix") {
    const Config cfg = parse_config("", "<t>");
    const auto cells = enumerate_cells(cfg);
    // resolutions per chunk length: 200->3, 300->5, 400->7, 500->9, 600->11
    CHECK(cells.size() == 3u * 2u * 3u * (3 + 5 + 7 + 9 + 11));

    Config one = parse_config("chunk_lens = 600\nfeatures = raw\nmethods = lttb\ndynamic = 0\n", "<t>");
    CHECK(enumerate_cells(one).size() == 11);
}

TEST_CASE("run_matrix writes ordered rows, resumes, and is deterministic") {
    Config cfg = fast_synthetic_config();
    cfg.resolutions = {60, 50};
    cfg.synthetic_per_class = 30; // matrix mechanics only; keep the test quick
    cfg.epochs = 4;
    cfg.kfold = 5;
    const std::string out1 = (fs::temp_directory_path() / "tsgc_matrix1.csv").string();
    const std::string out2 = (fs::temp_directory_path() / "tsgc_matrix2.csv").string();

    const MatrixReport r1 = run_matrix(cfg, out1, false);
    CHECK(r1.total == 2);
    CHECK(r1.computed == 2);
    CHECK(r1.failed == 0);

    const MatrixReport r2 = run_matrix(cfg, out2, false);
    CHECK(slurp(out1) == slurp(out2)); // bitwise-identical tables

    // truncate to simulate an interrupt after the first row, then resume
    {
        std::ifstream in(out1);
        std::string header, row1;
        std::getline(in, header);
        std::getline(in, row1);
        std::ofstream partial(out2, std::ios::trunc);
        partial << header << "\n" << row1 << "\n";
    }
    const MatrixReport r3 = run_matrix(cfg, out2, true);
    CHECK(r3.reused == 1);
    CHECK(r3.computed == 1);
    CHECK(slurp(out1) == slurp(out2));

    // resume over a complete table does no work
    const MatrixReport r4 = run_matrix(cfg, out2, true);
    CHECK(r4.reused == 2);
    CHECK(r4.computed == 0);
    CHECK(slurp(out1) == slurp(out2));

    // plot emitter groups by (feature, chunk, method, dynamic)
    const std::string plot_dir = (fs::temp_directory_path() / "tsgc_plots").string();
    write_plot_series(out1, plot_dir);
    const std::string plot = slurp(plot_dir + "/plot_raw_chunk60_dropout_static.csv");
    CHECK(plot.find("resolution,mean_acc") == 0);
    CHECK(std::count(plot.begin(), plot.end(), '\n') == 3); // header + 2 resolutions

    fs::remove(out1);
    fs::remove(out2);
    fs::remove_all(plot_dir);
}

TEST_CASE("run_cell rejects a corpus of the wrong chunk length") {
    Config cfg = fast_synthetic_config();
    const auto corpus = build_corpus(cfg, 60);
    ExperimentCell cell;
    cell.feature = Feature::raw;
    cell.chunk_len = 99;
    cell.method = Method::dropout;
    cell.dynamic = false;
    cell.resolution = 50;
    CHECK_THROWS_AS(run_cell(cell, corpus, cfg), std::invalid_argument);
}

} // TEST_SUITE
