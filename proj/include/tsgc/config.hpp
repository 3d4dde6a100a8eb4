#ifndef TSGC_CONFIG_HPP
#define TSGC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsgc {

// Flat `key = value` configuration shared by the CLI commands. Unknown keys
// are rejected: a typo in an experiment grid silently dropping cells is the
// costliest failure mode this tool has.
struct Config {
    // global
    std::uint64_t seed = 42;
    int workers = 0; // 0 = all hardware threads
    bool parallel_folds = false;
    std::string timing = "wall"; // wall | none (none writes 0.000, reproducible bytes)

    // data source
    std::string data_kind = "synthetic"; // bonn | synthetic
    std::string data_dir;
    std::map<char, int> class_map = {{'A', 0}, {'B', 1}};
    std::map<std::string, char> set_map; // filename-prefix -> set tag override
    int synthetic_per_class = 100;

    // geometry
    int takens_m = 3;
    int epsilon_steps = 300;
    std::string epsilon_r_policy = "max_distance"; // max_distance | enclosing_radius
    std::size_t simplex_cap = 50000000;
    int tau_count = 7;
    std::vector<double> tau_list; // optional explicit partition 0..2

    // cnn / training
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int batch_size = 16;
    int epochs = 10;
    std::string raw_kernel_rounding = "half_even"; // half_even | half_up
    int kfold = 10;

    // experiment grid
    std::vector<int> chunk_lens = {200, 300, 400, 500, 600};
    std::vector<int> resolutions; // empty = chunk_len down to min_resolution by 50
    int min_resolution = 100;
    std::vector<std::string> methods = {"dropout", "mean", "lttb"};
    std::vector<int> dynamic_flags = {0, 1};
    std::vector<std::string> features = {"raw", "betti", "spectra"};
    int dynamic_p = -1; // -1 = floor(interior_buckets / 4)

    int effective_workers() const;
};

// Throws config_error on unknown keys, bad values, or unreadable files.
Config load_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& origin);

// Documented `key = default  # description` listing for --help output.
std::string config_key_help();

} // namespace tsgc

#endif
