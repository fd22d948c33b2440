#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "barrenlab/errors.hpp"

namespace barrenlab {

/// Shortest round-trip decimal form of x (locale-independent).
std::string format_double(double x);

/// RFC-4180-style writer: header row, comma separators, '\n' line ends,
/// decimal dot regardless of locale.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::size_t width_;
};

/// Reads a two-column numeric CSV (header skipped if non-numeric).
std::vector<std::pair<double, double>> read_xy_csv(const std::string& path);

}  // namespace barrenlab
