#pragma once

// CSV files: optional "# ..." comment lines, one header row of column names,
// then comma-separated rows. Doubles are written with 17 significant digits.

#include <fstream>
#include <string>
#include <vector>

#include "lrising/exact_engine.hpp"
#include "lrising/gap_table.hpp"

namespace lrising {

std::string format_double(double value);
/// Strict full-string parse ("inf" and "nan" accepted). Throws ConfigError.
double parse_double(const std::string& text);

struct CsvTable {
  std::string source;
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based file line of each row

  /// Index of a named column; ParseError if missing.
  std::size_t column_index(const std::string& name) const;
  /// Column converted to doubles; ParseError naming the line on bad values.
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Throws ConfigError if the file cannot be opened and ParseError (with the
/// line number) on ragged rows or a missing header.
CsvTable read_csv(const std::string& path);

class CsvWriter {
 public:
  /// Throws ConfigError if the file cannot be created.
  CsvWriter(const std::string& path, const std::string& comment,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t width_;
};

/// Columns t, sz_avg, C_1..C_{L/2}, Ctilde_1..Ctilde_{L/2}, energy, norm.
void write_time_series(const std::string& path, const TimeSeries& series,
                       const std::string& manifest_ref);

/// Inverse of write_time_series; parameters come from the comment line.
TimeSeries read_time_series(const std::string& path);

void write_gap_table(const std::string& path, const GapTable& table, const std::string& comment);
GapTable read_gap_table(const std::string& path);

}  // namespace lrising
