#ifndef TSGC_INGEST_HPP
#define TSGC_INGEST_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

namespace tsgc {

// A finite real-valued sequence; the universal input of every pipeline.
struct TimeSeries {
    std::vector<double> values;
    std::string source_id;

    std::size_t size() const { return values.size(); }
};

struct LabeledChunk {
    TimeSeries series;
    int label = 0; // binary class
    char set_tag = 0; // Bonn set A..E
    int chunk_index = 0;
};

struct LoadedSeries {
    TimeSeries series;
    char set_tag = 0;
    int label = 0;
};

// Reads every plain-text file under `dir` (one signed integer per line, LF or
// CRLF) in lexicographic filename order. The set tag comes from the first
// character of the filename via the Bonn convention Z->A, O->B, N->C, F->D,
// S->E, overridable with filename-prefix rules in `set_map`. Files whose tag
// is absent from `class_map` are skipped. Unreadable files and non-numeric
// lines are fatal.
std::vector<LoadedSeries> load_bonn_dir(const std::string& dir,
                                        const std::map<char, int>& class_map,
                                        const std::map<std::string, char>& set_map = {});

// floor(len/chunk_len) non-overlapping chunks; the remainder is dropped so
// every chunk has exactly chunk_len samples. chunk_len > length gives an
// empty list.
std::vector<LabeledChunk> segment(const TimeSeries& series, int chunk_len,
                                  char set_tag = 0, int label = 0);

// Sample mean 0, population (divisor N) standard deviation 1; constant input
// maps to all-zeros.
std::vector<double> zscore(std::span<const double> values);
TimeSeries zscore(const TimeSeries& chunk);

} // namespace tsgc

#endif
