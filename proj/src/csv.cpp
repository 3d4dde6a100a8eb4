#include "tsgc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tsgc {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

namespace {

double parse_number(const std::string& token, const std::string& path, int line_no) {
    const std::string t = trim(token);
    if (t.empty()) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty field");
    }
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + t + "'");
    }
    return v;
}

} // namespace

std::vector<double> read_value_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        values.push_back(parse_number(line, path, line_no));
    }
    return values;
}

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<double> row;
        for (const std::string& tok : split(line, ',')) {
            row.push_back(parse_number(tok, path, line_no));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": ragged row (expected " +
                                     std::to_string(rows.front().size()) + " fields)");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

} // namespace tsgc
