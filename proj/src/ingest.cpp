#include "tsgc/ingest.hpp"

#include "tsgc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace fs = std::filesystem;

namespace tsgc {

namespace {

char bonn_tag_for(const std::string& filename, const std::map<std::string, char>& set_map) {
    for (const auto& [prefix, tag] : set_map) {
        if (filename.rfind(prefix, 0) == 0) {
            return tag;
        }
    }
    if (filename.empty()) {
        return 0;
    }
    switch (filename[0]) {
        case 'Z': case 'z': return 'A';
        case 'O': case 'o': return 'B';
        case 'N': case 'n': return 'C';
        case 'F': case 'f': return 'D';
        case 'S': case 's': return 'E';
        default: return 0;
    }
}

} // namespace

std::vector<LoadedSeries> load_bonn_dir(const std::string& dir,
                                        const std::map<char, int>& class_map,
                                        const std::map<std::string, char>& set_map) {
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir);
    }
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            names.push_back(entry.path().filename().string());
        }
    }
    std::sort(names.begin(), names.end());

    std::vector<LoadedSeries> out;
    for (const std::string& name : names) {
        char tag = bonn_tag_for(name, set_map);
        auto cls = class_map.find(tag);
        if (cls == class_map.end()) {
            continue;
        }
        const std::string path = (fs::path(dir) / name).string();
        LoadedSeries ls;
        ls.series.values = read_value_column(path);
        ls.series.source_id = name;
        ls.set_tag = tag;
        ls.label = cls->second;
        if (ls.series.values.size() < 2) {
            throw std::runtime_error("ingest error: " + path + " has fewer than 2 samples");
        }
        for (double v : ls.series.values) {
            if (!std::isfinite(v)) {
                throw std::runtime_error("ingest error: non-finite sample in " + path);
            }
        }
        out.push_back(std::move(ls));
    }
    if (out.empty()) {
        std::fprintf(stderr, "warning: no usable files in %s\n", dir.c_str());
    }
    return out;
}

std::vector<LabeledChunk> segment(const TimeSeries& series, int chunk_len,
                                  char set_tag, int label) {
    if (chunk_len < 2) {
        throw std::invalid_argument("segment: chunk_len must be >= 2");
    }
    std::vector<LabeledChunk> chunks;
    const std::size_t n = series.values.size();
    const std::size_t count = n / static_cast<std::size_t>(chunk_len);
    chunks.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        LabeledChunk chunk;
        chunk.series.values.assign(series.values.begin() + c * chunk_len,
                                   series.values.begin() + (c + 1) * chunk_len);
        chunk.series.source_id = series.source_id;
        chunk.set_tag = set_tag;
        chunk.label = label;
        chunk.chunk_index = static_cast<int>(c);
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

std::vector<double> zscore(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw std::invalid_argument("zscore: need at least 2 samples");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    std::vector<double> out(n);
    if (var == 0.0) {
        return out; // constant input -> all zeros
    }
    const double inv_sd = 1.0 / std::sqrt(var);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (values[i] - mean) * inv_sd;
    }
    return out;
}

TimeSeries zscore(const TimeSeries& chunk) {
    TimeSeries out;
    out.values = zscore(std::span<const double>(chunk.values));
    out.source_id = chunk.source_id;
    return out;
}

} // namespace tsgc
