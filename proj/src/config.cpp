#include "tsgc/config.hpp"

#include "tsgc/csv.hpp"
#include "tsgc/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace tsgc {

int Config::effective_workers() const {
    if (workers > 0) {
        return workers;
    }
    return omp_get_max_threads();
}

namespace {

long long parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    long long v = std::strtoll(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size() || value.empty()) {
        throw config_error("config key '" + key + "': expected integer, got '" + value + "'");
    }
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size() || value.empty()) {
        throw config_error("config key '" + key + "': expected number, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "0" || value == "false") return false;
    if (value == "1" || value == "true") return true;
    throw config_error("config key '" + key + "': expected 0/1, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const std::string& tok : split(value, ',')) {
        std::string t = trim(tok);
        if (t.empty()) continue;
        out.push_back(static_cast<int>(parse_int(key, t)));
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& tok : split(value, ',')) {
        std::string t = trim(tok);
        if (t.empty()) continue;
        out.push_back(parse_real(key, t));
    }
    return out;
}

std::vector<std::string> parse_name_list(const std::string& value) {
    std::vector<std::string> out;
    for (const std::string& tok : split(value, ',')) {
        std::string t = trim(tok);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::map<char, int> parse_class_map(const std::string& key, const std::string& value) {
    std::map<char, int> out;
    for (const std::string& tok : split(value, ',')) {
        std::string t = trim(tok);
        if (t.empty()) continue;
        auto kv = split(t, '=');
        if (kv.size() != 2 || trim(kv[0]).size() != 1) {
            throw config_error("config key '" + key + "': expected TAG=LABEL pairs, got '" + t + "'");
        }
        char tag = trim(kv[0])[0];
        int label = static_cast<int>(parse_int(key, trim(kv[1])));
        if (label != 0 && label != 1) {
            throw config_error("config key '" + key + "': labels must be 0 or 1");
        }
        out[tag] = label;
    }
    return out;
}

std::map<std::string, char> parse_set_map(const std::string& key, const std::string& value) {
    std::map<std::string, char> out;
    for (const std::string& tok : split(value, ',')) {
        std::string t = trim(tok);
        if (t.empty()) continue;
        auto kv = split(t, '=');
        if (kv.size() != 2 || trim(kv[1]).size() != 1) {
            throw config_error("config key '" + key + "': expected PREFIX=TAG pairs, got '" + t + "'");
        }
        out[trim(kv[0])] = trim(kv[1])[0];
    }
    return out;
}

void check_choice(const std::string& key, const std::string& value,
                  std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (value == a) return;
    }
    std::string msg = "config key '" + key + "': invalid value '" + value + "' (allowed:";
    for (const char* a : allowed) {
        msg += " ";
        msg += a;
    }
    msg += ")";
    throw config_error(msg);
}

} // namespace

Config parse_config(const std::string& text, const std::string& origin) {
    Config cfg;
    const std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"seed", [&](const std::string& v) { cfg.seed = static_cast<std::uint64_t>(parse_int("seed", v)); }},
        {"workers", [&](const std::string& v) { cfg.workers = static_cast<int>(parse_int("workers", v)); }},
        {"parallel_folds", [&](const std::string& v) { cfg.parallel_folds = parse_bool("parallel_folds", v); }},
        {"timing", [&](const std::string& v) { check_choice("timing", v, {"wall", "none"}); cfg.timing = v; }},
        {"data_kind", [&](const std::string& v) { check_choice("data_kind", v, {"bonn", "synthetic"}); cfg.data_kind = v; }},
        {"data_dir", [&](const std::string& v) { cfg.data_dir = v; }},
        {"class_map", [&](const std::string& v) { cfg.class_map = parse_class_map("class_map", v); }},
        {"set_map", [&](const std::string& v) { cfg.set_map = parse_set_map("set_map", v); }},
        {"synthetic_per_class", [&](const std::string& v) { cfg.synthetic_per_class = static_cast<int>(parse_int("synthetic_per_class", v)); }},
        {"takens_m", [&](const std::string& v) { cfg.takens_m = static_cast<int>(parse_int("takens_m", v)); }},
        {"epsilon_steps", [&](const std::string& v) { cfg.epsilon_steps = static_cast<int>(parse_int("epsilon_steps", v)); }},
        {"epsilon_r_policy", [&](const std::string& v) { check_choice("epsilon_r_policy", v, {"max_distance", "enclosing_radius"}); cfg.epsilon_r_policy = v; }},
        {"simplex_cap", [&](const std::string& v) { cfg.simplex_cap = static_cast<std::size_t>(parse_int("simplex_cap", v)); }},
        {"tau_count", [&](const std::string& v) { cfg.tau_count = static_cast<int>(parse_int("tau_count", v)); }},
        {"tau_list", [&](const std::string& v) { cfg.tau_list = parse_real_list("tau_list", v); }},
        {"lr", [&](const std::string& v) { cfg.lr = parse_real("lr", v); }},
        {"beta1", [&](const std::string& v) { cfg.beta1 = parse_real("beta1", v); }},
        {"beta2", [&](const std::string& v) { cfg.beta2 = parse_real("beta2", v); }},
        {"adam_eps", [&](const std::string& v) { cfg.adam_eps = parse_real("adam_eps", v); }},
        {"batch_size", [&](const std::string& v) { cfg.batch_size = static_cast<int>(parse_int("batch_size", v)); }},
        {"epochs", [&](const std::string& v) { cfg.epochs = static_cast<int>(parse_int("epochs", v)); }},
        {"raw_kernel_rounding", [&](const std::string& v) { check_choice("raw_kernel_rounding", v, {"half_even", "half_up"}); cfg.raw_kernel_rounding = v; }},
        {"kfold", [&](const std::string& v) { cfg.kfold = static_cast<int>(parse_int("kfold", v)); }},
        {"chunk_lens", [&](const std::string& v) { cfg.chunk_lens = parse_int_list("chunk_lens", v); }},
        {"resolutions", [&](const std::string& v) { cfg.resolutions = parse_int_list("resolutions", v); }},
        {"min_resolution", [&](const std::string& v) { cfg.min_resolution = static_cast<int>(parse_int("min_resolution", v)); }},
        {"methods", [&](const std::string& v) {
             cfg.methods = parse_name_list(v);
             for (const auto& m : cfg.methods) check_choice("methods", m, {"dropout", "mean", "lttb"});
         }},
        {"dynamic", [&](const std::string& v) {
             cfg.dynamic_flags.clear();
             for (const std::string& tok : parse_name_list(v)) cfg.dynamic_flags.push_back(parse_bool("dynamic", tok) ? 1 : 0);
         }},
        {"features", [&](const std::string& v) {
             cfg.features = parse_name_list(v);
             for (const auto& f : cfg.features) check_choice("features", f, {"raw", "betti", "spectra"});
         }},
        {"dynamic_p", [&](const std::string& v) { cfg.dynamic_p = static_cast<int>(parse_int("dynamic_p", v)); }},
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw config_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key = value', got '" + t + "'");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw config_error(origin + ":" + std::to_string(line_no) +
                               ": unknown config key '" + key + "'");
        }
        it->second(value);
    }

    // cross-key validation
    if (cfg.takens_m < 1) throw config_error("takens_m must be >= 1");
    if (cfg.epsilon_steps < 2) throw config_error("epsilon_steps must be >= 2");
    if (cfg.tau_count < 1) throw config_error("tau_count must be >= 1");
    if (cfg.kfold < 2) throw config_error("kfold must be >= 2");
    if (cfg.batch_size < 1) throw config_error("batch_size must be >= 1");
    if (cfg.epochs < 0) throw config_error("epochs must be >= 0");
    if (cfg.min_resolution < 2) throw config_error("min_resolution must be >= 2");
    if (!cfg.tau_list.empty()) {
        if (cfg.tau_list.size() < 2 || cfg.tau_list.front() != 0.0 || cfg.tau_list.back() != 2.0 ||
            !std::is_sorted(cfg.tau_list.begin(), cfg.tau_list.end()) ||
            std::adjacent_find(cfg.tau_list.begin(), cfg.tau_list.end()) != cfg.tau_list.end()) {
            throw config_error("tau_list must be strictly increasing from 0 to 2");
        }
    }
    if (cfg.data_kind == "bonn" && cfg.data_dir.empty()) {
        throw config_error("data_kind = bonn requires data_dir");
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string config_key_help() {
    return
        "seed = 42                  # master RNG seed; all randomness derives from it\n"
        "workers = 0                # worker threads for the design matrix (0 = all cores)\n"
        "parallel_folds = 0         # run CV folds of one cell in parallel\n"
        "timing = wall              # wall | none; none writes wall_time_s = 0.000\n"
        "data_kind = synthetic      # bonn | synthetic\n"
        "data_dir =                 # Bonn directory (one integer sample per line per file)\n"
        "class_map = A=0,B=1        # set tags to binary labels; unlisted tags are skipped\n"
        "set_map =                  # filename-prefix=TAG overrides (default Z=A,O=B,N=C,F=D,S=E)\n"
        "synthetic_per_class = 100  # chunks per class for the synthetic corpus\n"
        "takens_m = 3               # sliding-window embedding dimension\n"
        "epsilon_steps = 300        # epsilon grid length (betti/spectra feature length)\n"
        "epsilon_r_policy = max_distance  # max_distance | enclosing_radius\n"
        "simplex_cap = 50000000     # hard cap on filtration size\n"
        "tau_count = 7              # evenly spaced eigenvalue buckets on [0,2]\n"
        "tau_list =                 # explicit tau partition, e.g. 0,0.5,1,1.5,2 (overrides tau_count)\n"
        "lr = 0.001                 # Adam learning rate\n"
        "beta1 = 0.9\n"
        "beta2 = 0.999\n"
        "adam_eps = 1e-08\n"
        "batch_size = 16\n"
        "epochs = 10\n"
        "raw_kernel_rounding = half_even  # rounding of (res/600)*18 | half_even | half_up\n"
        "kfold = 10                 # cross-validation folds\n"
        "chunk_lens = 200,300,400,500,600\n"
        "resolutions =              # explicit target lengths; default chunk_len..min_resolution step 50\n"
        "min_resolution = 100\n"
        "methods = dropout,mean,lttb\n"
        "dynamic = 0,1              # run without/with variance-weighted rebucketing\n"
        "features = raw,betti,spectra\n"
        "dynamic_p = -1             # split/merge iterations; -1 = floor(interior buckets / 4)\n";
}

} // namespace tsgc
