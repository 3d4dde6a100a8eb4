#ifndef TSGC_CSV_HPP
#define TSGC_CSV_HPP

#include <string>
#include <vector>

namespace tsgc {

// One number per line (optionally CRLF); blank lines skipped. Throws
// std::runtime_error naming the file and line on junk input.
std::vector<double> read_value_column(const std::string& path);

// Comma-separated rows of equal-width numeric columns, e.g. point cloud
// coordinates. Same error contract as read_value_column.
std::vector<std::vector<double>> read_numeric_rows(const std::string& path);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

// Fixed-precision formatting used by every CSV writer so that identical
// results serialize to identical bytes.
std::string format_double(double v, int precision = 6);

} // namespace tsgc

#endif
