#include "tsgc/harness.hpp"

#include "tsgc/csv.hpp"
#include "tsgc/downsample.hpp"
#include "tsgc/embedding.hpp"
#include "tsgc/errors.hpp"
#include "tsgc/homology.hpp"
#include "tsgc/neighbor_graph.hpp"
#include "tsgc/rng.hpp"
#include "tsgc/spectra.hpp"

#include <omp.h>

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tsgc {

Method method_from_string(const std::string& s) {
    if (s == "dropout") return Method::dropout;
    if (s == "mean") return Method::mean;
    if (s == "lttb") return Method::lttb;
    throw config_error("unknown method '" + s + "'");
}

Feature feature_from_string(const std::string& s) {
    if (s == "raw") return Feature::raw;
    if (s == "betti") return Feature::betti;
    if (s == "spectra") return Feature::spectra;
    throw config_error("unknown feature '" + s + "'");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::dropout: return "dropout";
        case Method::mean: return "mean";
        default: return "lttb";
    }
}

std::string to_string(Feature f) {
    switch (f) {
        case Feature::raw: return "raw";
        case Feature::betti: return "betti";
        default: return "spectra";
    }
}

std::string cell_key(const ExperimentCell& cell) {
    return to_string(cell.feature) + "," + std::to_string(cell.chunk_len) + "," +
           to_string(cell.method) + "," + (cell.dynamic ? "1" : "0") + "," +
           std::to_string(cell.resolution);
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> kfold_split(
    int n, int k, std::uint64_t seed, std::span<const int> labels) {
    if (n < k || k < 2) {
        throw std::invalid_argument("kfold_split: need n >= k >= 2");
    }
    if (labels.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("kfold_split: label count mismatch");
    }

    std::map<int, std::vector<int>> by_class;
    for (int i = 0; i < n; ++i) {
        by_class[labels[i]].push_back(i);
    }
    bool stratified = true;
    for (const auto& [cls, members] : by_class) {
        if (static_cast<int>(members.size()) < k) {
            std::fprintf(stderr,
                         "warning: class %d has %zu members (< %d folds); "
                         "falling back to unstratified folds\n",
                         cls, members.size(), k);
            stratified = false;
        }
    }

    std::vector<std::vector<int>> fold_test(k);
    if (stratified) {
        for (auto& [cls, members] : by_class) {
            Rng rng(hash64(hash64(seed, "kfold"), static_cast<std::uint64_t>(cls)));
            rng.shuffle(members);
            for (std::size_t i = 0; i < members.size(); ++i) {
                fold_test[i % k].push_back(members[i]);
            }
        }
    } else {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        Rng rng(hash64(seed, "kfold"));
        rng.shuffle(all);
        for (int i = 0; i < n; ++i) {
            fold_test[i % k].push_back(all[i]);
        }
    }

    std::vector<std::pair<std::vector<int>, std::vector<int>>> folds(k);
    std::vector<int> fold_of(n, -1);
    for (int f = 0; f < k; ++f) {
        std::sort(fold_test[f].begin(), fold_test[f].end());
        for (int i : fold_test[f]) {
            fold_of[i] = f;
        }
    }
    for (int f = 0; f < k; ++f) {
        auto& [train, test] = folds[f];
        test = fold_test[f];
        train.reserve(n - test.size());
        for (int i = 0; i < n; ++i) {
            if (fold_of[i] != f) {
                train.push_back(i);
            }
        }
    }
    return folds;
}

std::vector<LabeledChunk> build_corpus(const Config& config, int chunk_len) {
    std::vector<LabeledChunk> corpus;
    if (config.data_kind == "bonn") {
        const auto loaded = load_bonn_dir(config.data_dir, config.class_map, config.set_map);
        for (const LoadedSeries& ls : loaded) {
            auto chunks = segment(ls.series, chunk_len, ls.set_tag, ls.label);
            corpus.insert(corpus.end(), std::make_move_iterator(chunks.begin()),
                          std::make_move_iterator(chunks.end()));
        }
        return corpus;
    }

    // synthetic sine vs. white noise, seeded per (chunk_len, class, index)
    corpus.reserve(2 * config.synthetic_per_class);
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < config.synthetic_per_class; ++i) {
            Rng rng(hash64(hash64(hash64(config.seed, "synthetic"),
                                  static_cast<std::uint64_t>(chunk_len) << 8 | cls),
                           static_cast<std::uint64_t>(i)));
            LabeledChunk chunk;
            chunk.label = cls;
            chunk.chunk_index = i;
            chunk.series.source_id =
                (cls == 0 ? "synthetic-sine-" : "synthetic-noise-") + std::to_string(i);
            chunk.series.values.resize(chunk_len);
            if (cls == 0) {
                const double freq = rng.uniform(2.0, 8.0); // cycles per chunk
                const double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
                for (int t = 0; t < chunk_len; ++t) {
                    chunk.series.values[t] =
                        std::sin(2.0 * 3.14159265358979323846 * freq * t / chunk_len + phase);
                }
            } else {
                for (int t = 0; t < chunk_len; ++t) {
                    chunk.series.values[t] = rng.normal();
                }
            }
            corpus.push_back(std::move(chunk));
        }
    }
    return corpus;
}

int raw_kernel1(int resolution, const std::string& rounding) {
    const double x = static_cast<double>(resolution) * 18.0 / 600.0;
    double r;
    if (rounding == "half_up") {
        r = std::floor(x + 0.5);
    } else {
        r = std::nearbyint(x); // ties to even under the default rounding mode
    }
    return std::max(1, static_cast<int>(r));
}

ModelSpec model_spec_for(Feature feature, int resolution, const Config& config) {
    ModelSpec spec;
    switch (feature) {
        case Feature::raw:
            spec.input_len = resolution;
            spec.in_channels = 1;
            spec.factor = 5;
            spec.kernel1 = raw_kernel1(resolution, config.raw_kernel_rounding);
            spec.kernel2 = 2;
            break;
        case Feature::betti:
            spec.input_len = config.epsilon_steps;
            spec.in_channels = 3;
            spec.factor = 7;
            spec.kernel1 = 6;
            spec.kernel2 = 2;
            break;
        case Feature::spectra:
            spec.input_len = config.epsilon_steps;
            spec.in_channels = config.tau_list.empty()
                                   ? config.tau_count
                                   : static_cast<int>(config.tau_list.size()) - 1;
            spec.factor = 3;
            spec.kernel1 = 6;
            spec.kernel2 = 2;
            break;
    }
    return spec;
}

namespace {

RPolicy r_policy_of(const Config& config) {
    return config.epsilon_r_policy == "enclosing_radius" ? RPolicy::enclosing_radius
                                                         : RPolicy::max_distance;
}

TauPartition tau_partition_of(const Config& config) {
    return config.tau_list.empty() ? TauPartition::uniform(config.tau_count)
                                   : TauPartition::from_list(config.tau_list);
}

// downsampled amplitude sequence of one chunk (y-values only; x is kept only
// by the CSV-facing CLI paths)
std::vector<double> downsample_values(std::span<const double> values, const Bucketing& bk,
                                      Method method) {
    switch (method) {
        case Method::dropout:
            return dropout(values, bk);
        case Method::mean: {
            std::vector<double> ys;
            for (const Point2D& p : bucket_average(values, bk)) ys.push_back(p.y);
            return ys;
        }
        default: {
            std::vector<double> ys;
            for (const Point2D& p : lttb(values, bk)) ys.push_back(p.y);
            return ys;
        }
    }
}

std::vector<double> extract_one(Feature feature, std::span<const double> ys,
                                const Config& config) {
    switch (feature) {
        case Feature::raw:
            return zscore(ys);
        case Feature::betti: {
            const PointCloud cloud = takens_embed(ys, config.takens_m);
            const DistanceMatrix dm = pairwise_distances_serial(cloud);
            const EpsilonGrid grid = epsilon_grid(dm, config.epsilon_steps, r_policy_of(config));
            const Filtration filt = rips_filtration(dm, 3, grid.r_max, config.simplex_cap);
            const Barcode barcode = reduce(filt);
            const EpsilonSeries series = betti_series(barcode, grid, {0, 1, 2});
            std::vector<double> flat;
            flat.reserve(series.channels.size() * grid.values.size());
            for (const auto& ch : series.channels) flat.insert(flat.end(), ch.begin(), ch.end());
            return flat;
        }
        default: {
            const PointCloud cloud = takens_embed(ys, config.takens_m);
            const DistanceMatrix dm = pairwise_distances_serial(cloud);
            const EpsilonGrid grid = epsilon_grid(dm, config.epsilon_steps, r_policy_of(config));
            const EpsilonSeries series = mu_series_serial(dm, grid, tau_partition_of(config));
            std::vector<double> flat;
            flat.reserve(series.channels.size() * grid.values.size());
            for (const auto& ch : series.channels) flat.insert(flat.end(), ch.begin(), ch.end());
            return flat;
        }
    }
}

} // namespace

Dataset extract_dataset(Feature feature, const std::vector<LabeledChunk>& corpus,
                        Method method, bool dynamic, int resolution,
                        const Config& config, bool use_threads) {
    if (corpus.empty()) {
        throw std::invalid_argument("extract_dataset: empty corpus");
    }
    const int chunk_len = static_cast<int>(corpus.front().series.size());
    for (const LabeledChunk& chunk : corpus) {
        if (static_cast<int>(chunk.series.size()) != chunk_len) {
            throw std::invalid_argument("extract_dataset: mixed chunk lengths in corpus");
        }
    }
    if (resolution < 2 || resolution > chunk_len) {
        throw std::invalid_argument("extract_dataset: resolution must be in [2, chunk_len]");
    }

    const int n = static_cast<int>(corpus.size());
    const Bucketing base = naive_buckets(chunk_len, resolution - 2);
    const int p = config.dynamic_p >= 0 ? config.dynamic_p : base.interior_count() / 4;

    Dataset all;
    const ModelSpec spec = model_spec_for(feature, resolution, config);
    all.channels = spec.in_channels;
    all.len = spec.input_len;
    all.xs.resize(n);
    all.labels.resize(n);

    std::string error;
#pragma omp parallel for schedule(dynamic) if (use_threads)
    for (int i = 0; i < n; ++i) {
        if (!error.empty()) continue;
        try {
            const auto& values = corpus[i].series.values;
            const Bucketing bk = dynamic ? dynamic_buckets(values, base, p) : base;
            const std::vector<double> ys = downsample_values(values, bk, method);
            std::vector<double> x = extract_one(feature, ys, config);
            if (x.size() != static_cast<std::size_t>(all.channels) * all.len) {
                throw std::runtime_error("feature length mismatch for chunk " +
                                         corpus[i].series.source_id);
            }
            all.xs[i] = std::move(x);
            all.labels[i] = corpus[i].label;
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) {
        throw std::runtime_error(error);
    }
    return all;
}

CellResult run_cell(const ExperimentCell& cell, const std::vector<LabeledChunk>& corpus,
                    const Config& config, bool use_threads) {
    for (const LabeledChunk& chunk : corpus) {
        if (static_cast<int>(chunk.series.size()) != cell.chunk_len) {
            throw std::invalid_argument("run_cell: corpus chunk length does not match the cell");
        }
    }

    const double t0 = omp_get_wtime();
    const std::uint64_t cell_seed = hash64(config.seed, cell_key(cell));
    CellResult result;
    const ModelSpec spec = model_spec_for(cell.feature, cell.resolution, config);

    try {
        const Dataset all = extract_dataset(cell.feature, corpus, cell.method, cell.dynamic,
                                            cell.resolution, config, use_threads);
        const int n = all.size();
        const auto folds = kfold_split(n, config.kfold, hash64(cell_seed, "folds"),
                                       all.labels);
        AdamParams adam;
        adam.lr = config.lr;
        adam.beta1 = config.beta1;
        adam.beta2 = config.beta2;
        adam.eps = config.adam_eps;
        adam.batch_size = config.batch_size;

        result.fold_accs.assign(folds.size(), 0.0);
        std::string fold_error;
#pragma omp parallel for schedule(dynamic) if (config.parallel_folds)
        for (long f = 0; f < static_cast<long>(folds.size()); ++f) {
            if (!fold_error.empty()) continue;
            try {
                const auto& [train_idx, test_idx] = folds[f];
                Dataset train_ds, test_ds;
                train_ds.channels = test_ds.channels = all.channels;
                train_ds.len = test_ds.len = all.len;
                for (int i : train_idx) {
                    train_ds.xs.push_back(all.xs[i]);
                    train_ds.labels.push_back(all.labels[i]);
                }
                for (int i : test_idx) {
                    test_ds.xs.push_back(all.xs[i]);
                    test_ds.labels.push_back(all.labels[i]);
                }
                TrainedModel model = build(spec, hash64(cell_seed, 1000 + f));
                TrainResult tr =
                    train(std::move(model), train_ds, config.epochs, adam,
                          hash64(cell_seed, 2000 + f));
                result.fold_accs[f] = evaluate(tr.model, test_ds);
            } catch (const std::exception& e) {
#pragma omp critical
                if (fold_error.empty()) fold_error = e.what();
            }
        }
        if (!fold_error.empty()) {
            throw std::runtime_error(fold_error);
        }

        double mean = 0.0;
        for (double a : result.fold_accs) mean += a;
        mean /= static_cast<double>(result.fold_accs.size());
        double var = 0.0;
        for (double a : result.fold_accs) var += (a - mean) * (a - mean);
        var /= static_cast<double>(result.fold_accs.size());
        result.mean_acc = mean;
        result.std_acc = std::sqrt(var);
    } catch (const std::exception& e) {
        result.status = "failed: " + std::string(e.what());
        for (char& ch : result.status) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        return result;
    }

    if (config.timing == "wall") {
        result.wall_time_s = omp_get_wtime() - t0;
    }
    return result;
}

std::vector<ExperimentCell> enumerate_cells(const Config& config) {
    std::vector<ExperimentCell> cells;
    for (const std::string& feature : config.features) {
        for (int chunk_len : config.chunk_lens) {
            if (chunk_len < 2) {
                throw config_error("chunk_lens entries must be >= 2");
            }
            std::vector<int> resolutions;
            if (!config.resolutions.empty()) {
                for (int r : config.resolutions) {
                    if (r >= 2 && r <= chunk_len) resolutions.push_back(r);
                }
            } else {
                for (int r = chunk_len; r >= config.min_resolution; r -= 50) {
                    resolutions.push_back(r);
                }
            }
            for (const std::string& method : config.methods) {
                for (int dynamic : config.dynamic_flags) {
                    for (int resolution : resolutions) {
                        ExperimentCell cell;
                        cell.feature = feature_from_string(feature);
                        cell.chunk_len = chunk_len;
                        cell.method = method_from_string(method);
                        cell.dynamic = dynamic != 0;
                        cell.resolution = resolution;
                        cells.push_back(cell);
                    }
                }
            }
        }
    }
    return cells;
}

namespace {

constexpr const char* kResultsHeader =
    "feature,chunk_len,method,dynamic,resolution,mean_acc,std_acc,fold_accs,wall_time_s,status";

std::string format_result_line(const ExperimentCell& cell, const CellResult& result) {
    std::ostringstream line;
    line << cell_key(cell) << ",";
    if (result.ok()) {
        line << format_double(result.mean_acc) << "," << format_double(result.std_acc) << ",";
        for (std::size_t i = 0; i < result.fold_accs.size(); ++i) {
            if (i) line << ";";
            line << format_double(result.fold_accs[i]);
        }
    } else {
        line << ",,";
    }
    line << "," << format_double(result.wall_time_s, 3) << "," << result.status;
    return line.str();
}

std::map<std::string, std::string> load_existing_rows(const std::string& path) {
    std::map<std::string, std::string> rows;
    std::ifstream in(path);
    if (!in) {
        return rows;
    }
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue; // header
        }
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() < 5) continue;
        const std::string key =
            fields[0] + "," + fields[1] + "," + fields[2] + "," + fields[3] + "," + fields[4];
        rows[key] = line;
    }
    return rows;
}

} // namespace

MatrixReport run_matrix(const Config& config, const std::string& out_csv, bool resume) {
    const std::vector<ExperimentCell> cells = enumerate_cells(config);
    MatrixReport report;
    report.total = static_cast<int>(cells.size());

    std::map<std::string, std::string> existing;
    if (resume) {
        existing = load_existing_rows(out_csv);
    }

    // one corpus per distinct chunk length, shared across cells
    std::map<int, std::vector<LabeledChunk>> corpora;
    for (const ExperimentCell& cell : cells) {
        if (!corpora.count(cell.chunk_len)) {
            corpora[cell.chunk_len] = build_corpus(config, cell.chunk_len);
        }
    }

    std::ofstream out(out_csv, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write results: " + out_csv);
    }
    out << kResultsHeader << "\n";
    out.flush();

    std::vector<std::string> lines(cells.size());
    std::vector<char> done(cells.size(), 0);
    std::size_t cursor = 0;

    const int workers = config.effective_workers();
    const bool parallel_cells = cells.size() > 1 && workers > 1;

#pragma omp parallel for schedule(dynamic) num_threads(workers) if (parallel_cells)
    for (long i = 0; i < static_cast<long>(cells.size()); ++i) {
        const ExperimentCell& cell = cells[i];
        const std::string key = cell_key(cell);
        std::string line;
        bool reused = false;
        auto it = existing.find(key);
        if (it != existing.end()) {
            line = it->second;
            reused = true;
        } else {
            const CellResult result = run_cell(cell, corpora.at(cell.chunk_len), config,
                                               /*use_threads=*/!parallel_cells);
            line = format_result_line(cell, result);
            if (!result.ok()) {
#pragma omp atomic
                ++report.failed;
            }
        }
#pragma omp critical
        {
            lines[i] = line;
            done[i] = 1;
            if (reused) {
                ++report.reused;
            } else {
                ++report.computed;
            }
            // flush every completed prefix row, keeping file order deterministic
            while (cursor < cells.size() && done[cursor]) {
                out << lines[cursor] << "\n";
                out.flush();
                ++cursor;
            }
        }
    }
    return report;
}

void write_plot_series(const std::string& results_csv, const std::string& out_dir) {
    std::ifstream in(results_csv);
    if (!in) {
        throw std::runtime_error("cannot open results: " + results_csv);
    }
    std::filesystem::create_directories(out_dir);

    // group key -> (resolution, mean_acc)
    std::map<std::string, std::vector<std::pair<int, double>>> groups;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() < 10 || f[9].rfind("ok", 0) != 0) continue;
        const std::string group = f[0] + "_chunk" + f[1] + "_" + f[2] +
                                  (f[3] == "1" ? "_dynamic" : "_static");
        groups[group].emplace_back(std::stoi(f[4]), std::stod(f[5]));
    }
    for (auto& [group, points] : groups) {
        std::sort(points.begin(), points.end());
        std::ofstream out(std::filesystem::path(out_dir) / ("plot_" + group + ".csv"));
        out << "resolution,mean_acc\n";
        for (const auto& [res, acc] : points) {
            out << res << "," << format_double(acc) << "\n";
        }
    }
}

} // namespace tsgc
