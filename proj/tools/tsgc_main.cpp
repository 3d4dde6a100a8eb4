// Command-line surface: ingest, downsample, features, train, experiment,
// gradcheck. Exit codes: 0 success, 1 processing failure, 2 usage/config
// error.

#include "tsgc/cnn.hpp"
#include "tsgc/config.hpp"
#include "tsgc/csv.hpp"
#include "tsgc/downsample.hpp"
#include "tsgc/embedding.hpp"
#include "tsgc/errors.hpp"
#include "tsgc/harness.hpp"
#include "tsgc/homology.hpp"
#include "tsgc/ingest.hpp"
#include "tsgc/neighbor_graph.hpp"
#include "tsgc/rng.hpp"
#include "tsgc/spectra.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace tsgc;

Config load_config_or_default(const std::string& path) {
    if (path.empty()) {
        return Config{};
    }
    return load_config(path);
}

void require_input_file(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw config_error("input file not found: " + path);
    }
}

int cmd_ingest(const std::string& dir, int chunk_len, const std::string& out_path,
               const std::string& config_path) {
    const Config cfg = load_config_or_default(config_path);
    const auto loaded = load_bonn_dir(dir, cfg.class_map, cfg.set_map);
    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("cannot write: " + out_path);
    }
    out << "set,label,source,chunk,values\n";
    std::size_t count = 0;
    for (const LoadedSeries& ls : loaded) {
        for (const LabeledChunk& chunk : segment(ls.series, chunk_len, ls.set_tag, ls.label)) {
            out << chunk.set_tag << "," << chunk.label << "," << chunk.series.source_id << ","
                << chunk.chunk_index << ",";
            for (std::size_t i = 0; i < chunk.series.values.size(); ++i) {
                if (i) out << ";";
                out << format_double(chunk.series.values[i]);
            }
            out << "\n";
            ++count;
        }
    }
    std::printf("ingested %zu series -> %zu chunks of length %d -> %s\n", loaded.size(), count,
                chunk_len, out_path.c_str());
    return 0;
}

int cmd_downsample(const std::string& method_name, int target, int dynamic_p,
                   const std::string& in_path, const std::string& out_path) {
    const Method method = method_from_string(method_name);
    require_input_file(in_path);
    const std::vector<double> values = read_value_column(in_path);

    Bucketing bk = naive_buckets(static_cast<int>(values.size()), target);
    if (dynamic_p > 0) {
        bk = dynamic_buckets(values, bk, dynamic_p);
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("cannot write: " + out_path);
    }
    if (method == Method::dropout) {
        for (double v : dropout(values, bk)) {
            out << format_double(v, 9) << "\n";
        }
    } else {
        const auto points = method == Method::mean ? bucket_average(values, bk) : lttb(values, bk);
        for (const Point2D& p : points) {
            out << format_double(p.x, 9) << "," << format_double(p.y, 9) << "\n";
        }
    }
    return 0;
}

int cmd_features(const std::string& kind, const std::string& input_kind,
                 const std::string& config_path, const std::string& in_path,
                 const std::string& out_path) {
    const Config cfg = load_config_or_default(config_path);
    require_input_file(in_path);

    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("cannot write: " + out_path);
    }

    if (kind == "raw") {
        if (input_kind != "series") {
            throw config_error("features --kind raw requires --input-kind series");
        }
        const std::vector<double> values = read_value_column(in_path);
        const std::vector<double> z = zscore(values);
        out << "index,value\n";
        for (std::size_t i = 0; i < z.size(); ++i) {
            out << i << "," << format_double(z[i], 9) << "\n";
        }
        return 0;
    }

    PointCloud cloud;
    if (input_kind == "series") {
        const std::vector<double> values = read_value_column(in_path);
        cloud = takens_embed(values, cfg.takens_m);
    } else {
        const auto rows = read_numeric_rows(in_path);
        if (rows.empty()) {
            throw std::runtime_error("empty point cloud: " + in_path);
        }
        cloud.dim = static_cast<int>(rows.front().size());
        for (const auto& row : rows) {
            cloud.coords.insert(cloud.coords.end(), row.begin(), row.end());
        }
    }
    const DistanceMatrix dm = pairwise_distances(cloud);
    const RPolicy policy = cfg.epsilon_r_policy == "enclosing_radius"
                               ? RPolicy::enclosing_radius
                               : RPolicy::max_distance;
    const EpsilonGrid grid = epsilon_grid(dm, cfg.epsilon_steps, policy);

    if (kind == "betti") {
        const Filtration filt = rips_filtration(dm, 3, grid.r_max, cfg.simplex_cap);
        const Barcode barcode = reduce(filt);
        const EpsilonSeries series = betti_series(barcode, grid, {0, 1, 2});
        out << "epsilon,beta0,beta1,beta2\n";
        for (std::size_t g = 0; g < grid.values.size(); ++g) {
            out << format_double(grid.values[g], 9);
            for (const auto& channel : series.channels) {
                out << "," << static_cast<long>(channel[g]);
            }
            out << "\n";
        }
        return 0;
    }

    const TauPartition taus = cfg.tau_list.empty() ? TauPartition::uniform(cfg.tau_count)
                                                   : TauPartition::from_list(cfg.tau_list);
    const EpsilonSeries series = mu_series(dm, grid, taus);
    out << "epsilon";
    for (int j = 0; j < taus.channels(); ++j) {
        out << ",mu" << j;
    }
    out << "\n";
    for (std::size_t g = 0; g < grid.values.size(); ++g) {
        out << format_double(grid.values[g], 9);
        for (const auto& channel : series.channels) {
            out << "," << static_cast<long>(channel[g]);
        }
        out << "\n";
    }
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& feature_name, int chunk_len,
              int resolution, const std::string& method_name, bool dynamic,
              const std::string& out_path) {
    const Config cfg = load_config_or_default(config_path);
    const Feature feature = feature_from_string(feature_name);
    const Method method = method_from_string(method_name);

    const auto corpus = build_corpus(cfg, chunk_len);
    if (corpus.empty()) {
        throw std::runtime_error("train: corpus is empty");
    }
    std::printf("corpus: %zu chunks of length %d\n", corpus.size(), chunk_len);
    const Dataset data = extract_dataset(feature, corpus, method, dynamic, resolution, cfg);

    AdamParams adam;
    adam.lr = cfg.lr;
    adam.beta1 = cfg.beta1;
    adam.beta2 = cfg.beta2;
    adam.eps = cfg.adam_eps;
    adam.batch_size = cfg.batch_size;

    const ModelSpec spec = model_spec_for(feature, resolution, cfg);
    TrainedModel model = build(spec, hash64(cfg.seed, "train-cli"));
    const TrainResult result =
        train(std::move(model), data, cfg.epochs, adam, hash64(cfg.seed, "train-cli-shuffle"));
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
        std::printf("epoch %2zu  loss %.6f\n", e + 1, result.epoch_loss[e]);
    }
    std::printf("train accuracy: %.4f\n", evaluate(result.model, data));
    save_checkpoint(result.model, out_path);
    std::printf("checkpoint -> %s\n", out_path.c_str());
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path, bool resume,
                   const std::string& plot_dir) {
    const Config cfg = load_config(config_path);
    const MatrixReport report = run_matrix(cfg, out_path, resume);
    std::printf("cells: %d total, %d computed, %d reused, %d failed -> %s\n", report.total,
                report.computed, report.reused, report.failed, out_path.c_str());
    if (!plot_dir.empty()) {
        write_plot_series(out_path, plot_dir);
        std::printf("plot series -> %s\n", plot_dir.c_str());
    }
    return 0;
}

int cmd_gradcheck(std::uint64_t seed, bool corrupt) {
    const double err = gradcheck_max_rel_error(seed, corrupt);
    std::printf("max relative error = %.3e\n", err);
    if (err <= 1e-4) {
        std::printf("PASS\n");
        return 0;
    }
    std::printf("FAIL\n");
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric feature pipelines for time-series classification"};
    app.require_subcommand(1);
    app.footer("Config keys (flat `key = value` file):\n" + tsgc::config_key_help());

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load a Bonn-format directory into a chunk CSV");
    std::string ingest_dir, ingest_out, ingest_config;
    int ingest_chunk_len = 600;
    ingest->add_option("--dir", ingest_dir, "directory of one-sample-per-line text files")->required();
    ingest->add_option("--chunk-len", ingest_chunk_len, "chunk length (samples)");
    ingest->add_option("--out", ingest_out, "output chunk CSV")->required();
    ingest->add_option("--config", ingest_config, "config file (class_map, set_map)");

    // downsample
    auto* down = app.add_subcommand("downsample", "Downsample a single-column CSV");
    std::string down_method = "dropout", down_in, down_out;
    int down_target = 0, down_dynamic_p = 0;
    down->add_option("--method", down_method, "dropout | mean | lttb")->required();
    down->add_option("--target", down_target, "interior bucket count (output length = target + 2)")
        ->required();
    down->add_option("--dynamic-p", down_dynamic_p, "dynamic rebucketing iterations (0 = off)");
    down->add_option("input", down_in, "input CSV, one value per line")->required();
    down->add_option("output", down_out, "output CSV")->required();

    // features
    auto* feat = app.add_subcommand("features", "Emit raw / betti / spectra series for one chunk");
    std::string feat_kind, feat_input_kind = "series", feat_config, feat_in, feat_out;
    feat->add_option("--kind", feat_kind, "raw | betti | spectra")->required();
    feat->add_option("--input-kind", feat_input_kind,
                     "series (one value per line) | cloud (comma-separated coordinates)");
    feat->add_option("--config", feat_config, "config file");
    feat->add_option("input", feat_in, "input CSV")->required();
    feat->add_option("output", feat_out, "output CSV")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train one model on the configured corpus");
    std::string train_config, train_feature = "raw", train_method = "dropout", train_out;
    int train_chunk_len = 300, train_resolution = 300;
    bool train_dynamic = false;
    train_cmd->add_option("--config", train_config, "config file");
    train_cmd->add_option("--feature", train_feature, "raw | betti | spectra");
    train_cmd->add_option("--chunk-len", train_chunk_len, "chunk length");
    train_cmd->add_option("--resolution", train_resolution, "downsample target length");
    train_cmd->add_option("--method", train_method, "dropout | mean | lttb");
    train_cmd->add_flag("--dynamic", train_dynamic, "apply dynamic rebucketing");
    train_cmd->add_option("--out", train_out, "checkpoint path")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run the design matrix under k-fold CV");
    std::string exp_config, exp_out, exp_plot_dir;
    bool exp_resume = false;
    exp->add_option("--config", exp_config, "config file")->required();
    exp->add_option("--out", exp_out, "results CSV")->required();
    exp->add_flag("--resume", exp_resume, "reuse rows already present in the output");
    exp->add_option("--plot-dir", exp_plot_dir, "emit per-(feature,chunk,method) plot CSVs here");

    // gradcheck
    auto* grad = app.add_subcommand("gradcheck", "Finite-difference gradient check");
    std::uint64_t grad_seed = 42;
    bool grad_corrupt = false;
    grad->add_option("--seed", grad_seed, "rng seed");
    grad->add_flag("--corrupt", grad_corrupt)->group(""); // negative-control test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    }

    try {
        // flag validation that does not depend on input data -> usage errors
        if (down->parsed()) {
            if (down_target < 0) {
                throw config_error("--target must be >= 0");
            }
            if (down_method == "lttb" && down_target < 1) {
                throw config_error("--method lttb needs --target >= 1 (at least 3 buckets)");
            }
            if (down_dynamic_p < 0) {
                throw config_error("--dynamic-p must be >= 0");
            }
        }
        if (feat->parsed()) {
            if (feat_kind != "raw" && feat_kind != "betti" && feat_kind != "spectra") {
                throw config_error("--kind must be raw, betti, or spectra");
            }
            if (feat_input_kind != "series" && feat_input_kind != "cloud") {
                throw config_error("--input-kind must be series or cloud");
            }
        }

        if (ingest->parsed()) {
            return cmd_ingest(ingest_dir, ingest_chunk_len, ingest_out, ingest_config);
        }
        if (down->parsed()) {
            return cmd_downsample(down_method, down_target, down_dynamic_p, down_in, down_out);
        }
        if (feat->parsed()) {
            return cmd_features(feat_kind, feat_input_kind, feat_config, feat_in, feat_out);
        }
        if (train_cmd->parsed()) {
            return cmd_train(train_config, train_feature, train_chunk_len, train_resolution,
                             train_method, train_dynamic, train_out);
        }
        if (exp->parsed()) {
            return cmd_experiment(exp_config, exp_out, exp_resume, exp_plot_dir);
        }
        if (grad->parsed()) {
            return cmd_gradcheck(grad_seed, grad_corrupt);
        }
    } catch (const tsgc::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
