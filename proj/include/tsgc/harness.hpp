#ifndef TSGC_HARNESS_HPP
#define TSGC_HARNESS_HPP

#include "tsgc/cnn.hpp"
#include "tsgc/config.hpp"
#include "tsgc/ingest.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tsgc {

enum class Method { dropout, mean, lttb };
enum class Feature { raw, betti, spectra };

Method method_from_string(const std::string& s);
Feature feature_from_string(const std::string& s);
std::string to_string(Method m);
std::string to_string(Feature f);

struct ExperimentCell {
    Feature feature = Feature::raw;
    int chunk_len = 0;
    Method method = Method::dropout;
    bool dynamic = false;
    int resolution = 0;
};

// "feature,chunk_len,method,dynamic,resolution" - the key of a results row
std::string cell_key(const ExperimentCell& cell);

struct CellResult {
    double mean_acc = 0.0;
    double std_acc = 0.0;
    std::vector<double> fold_accs;
    double wall_time_s = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

// Stratified k folds (round-robin deal of per-class shuffles); falls back to
// unstratified with a warning when a class has fewer than k members. Returns
// (train, test) index pairs; test sets partition 0..n-1.
std::vector<std::pair<std::vector<int>, std::vector<int>>> kfold_split(
    int n, int k, std::uint64_t seed, std::span<const int> labels);

// Bonn directory or the seeded synthetic sine-vs-noise corpus, segmented to
// chunk_len.
std::vector<LabeledChunk> build_corpus(const Config& config, int chunk_len);

// round((res/600)*18) per the configured rounding, floored at 1
int raw_kernel1(int resolution, const std::string& rounding);

ModelSpec model_spec_for(Feature feature, int resolution, const Config& config);

// Downsample every chunk to `resolution` (optionally through the
// variance-weighted rebucketing) and extract the configured feature channels.
// Labels ride along untouched; extraction itself never sees them. Throws on
// extraction failure (complexity cap, eigensolver, degenerate cloud).
Dataset extract_dataset(Feature feature, const std::vector<LabeledChunk>& corpus,
                        Method method, bool dynamic, int resolution,
                        const Config& config, bool use_threads = true);

// Downsample + feature-extract every chunk once, then train/evaluate one
// model per fold. Extraction or training failures mark the cell failed and
// are reported in `status`; the caller keeps going.
CellResult run_cell(const ExperimentCell& cell, const std::vector<LabeledChunk>& corpus,
                    const Config& config, bool use_threads = true);

std::vector<ExperimentCell> enumerate_cells(const Config& config);

struct MatrixReport {
    int total = 0;
    int computed = 0;
    int reused = 0;
    int failed = 0;
};

// Runs every cell of the configured grid, writing rows incrementally in
// enumeration order. With resume = true, rows already present in out_csv are
// reused verbatim.
MatrixReport run_matrix(const Config& config, const std::string& out_csv, bool resume);

// Per (feature, chunk_len, method, dynamic): a "resolution,mean_acc" series
// extracted from a results CSV, one file per group under out_dir.
void write_plot_series(const std::string& results_csv, const std::string& out_dir);

} // namespace tsgc

#endif
