#include "lrising/csv_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "lrising/errors.hpp"

namespace lrising {

std::string format_double(double value) {
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  if (std::isnan(value)) {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    std::size_t k = 0;
    while (k < cell.size() && cell[k] == ' ') ++k;
    cells.push_back(cell.substr(k));
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      return i;
    }
  }
  throw ParseError(source, 1 + comments.size(), "missing column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    try {
      out.push_back(parse_double(rows[r][c]));
    } catch (const ConfigError&) {
      throw ParseError(source, line_numbers[r],
                       "column '" + name + "': not a number: '" + rows[r][c] + "'");
    }
  }
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open '" + path + "'");
  }
  CsvTable t;
  t.source = path;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      if (have_header) {
        throw ParseError(path, lineno, "comment line after the header row");
      }
      t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    auto cells = split(line);
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw ParseError(path, lineno,
                       "expected " + std::to_string(t.columns.size()) + " fields, found " +
                           std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(lineno);
  }
  if (!have_header) {
    throw ParseError(path, lineno == 0 ? 1 : lineno, "missing header row");
  }
  return t;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& comment,
                     const std::vector<std::string>& columns)
    : out_(path), path_(path), width_(columns.size()) {
  if (!out_) {
    throw ConfigError("cannot write '" + path + "'");
  }
  if (!comment.empty()) {
    out_ << "# " << comment << '\n';
  }
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw std::invalid_argument("CsvWriter: row width mismatch for '" + path_ + "'");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << (i ? "," : "") << cells[i];
  }
  out_ << '\n';
  if (!out_) {
    throw ConfigError("write failed for '" + path_ + "'");
  }
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void write_time_series(const std::string& path, const TimeSeries& series,
                       const std::string& manifest_ref) {
  const int half = series.max_separation();
  std::vector<std::string> columns{"t", "sz_avg"};
  for (int d = 1; d <= half; ++d) columns.push_back("C_" + std::to_string(d));
  for (int d = 1; d <= half; ++d) columns.push_back("Ctilde_" + std::to_string(d));
  columns.emplace_back("energy");
  columns.emplace_back("norm");
  const std::string comment = "L=" + std::to_string(series.L) + " J=" + format_double(series.J) +
                              " g=" + format_double(series.g) +
                              " alpha=" + format_double(series.alpha) +
                              " dt=" + format_double(series.dt) + " manifest=" + manifest_ref;
  CsvWriter w(path, comment, columns);
  for (std::size_t n = 0; n < series.size(); ++n) {
    std::vector<double> row{series.times[n], series.sz_site_avg[n]};
    for (int d = 0; d < half; ++d) row.push_back(series.corr(static_cast<Eigen::Index>(n), d));
    for (int d = 0; d < half; ++d) {
      row.push_back(series.corr_normalized(static_cast<Eigen::Index>(n), d));
    }
    row.push_back(series.energy[n]);
    row.push_back(series.norm[n]);
    w.row(row);
  }
}

TimeSeries read_time_series(const std::string& path) {
  const CsvTable t = read_csv(path);
  TimeSeries ts;
  for (const auto& c : t.comments) {
    std::istringstream ss(c);
    std::string item;
    while (ss >> item) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      try {
        if (key == "L") ts.L = static_cast<int>(parse_double(value));
        if (key == "J") ts.J = parse_double(value);
        if (key == "g") ts.g = parse_double(value);
        if (key == "alpha") ts.alpha = parse_double(value);
        if (key == "dt") ts.dt = parse_double(value);
      } catch (const ConfigError&) {
        throw ParseError(path, 1, "bad parameter '" + item + "'");
      }
    }
  }
  ts.times = t.numeric_column("t");
  ts.sz_site_avg = t.numeric_column("sz_avg");
  ts.energy = t.numeric_column("energy");
  ts.norm = t.numeric_column("norm");
  int half = 0;
  while (std::find(t.columns.begin(), t.columns.end(), "C_" + std::to_string(half + 1)) !=
         t.columns.end()) {
    ++half;
  }
  const auto rows = static_cast<Eigen::Index>(ts.times.size());
  ts.corr.resize(rows, half);
  ts.corr_normalized.resize(rows, half);
  for (int d = 1; d <= half; ++d) {
    const auto c = t.numeric_column("C_" + std::to_string(d));
    const auto ct = t.numeric_column("Ctilde_" + std::to_string(d));
    for (Eigen::Index n = 0; n < rows; ++n) {
      ts.corr(n, d - 1) = c[static_cast<std::size_t>(n)];
      ts.corr_normalized(n, d - 1) = ct[static_cast<std::size_t>(n)];
    }
  }
  return ts;
}

void write_gap_table(const std::string& path, const GapTable& table, const std::string& comment) {
  CsvWriter w(path, comment, {"nu", "nu_prime", "i", "j", "delta"});
  for (const auto& e : table.entries) {
    w.row({std::to_string(e.nu), std::to_string(e.nu_prime), std::to_string(e.i),
           std::to_string(e.j), format_double(e.delta)});
  }
}

GapTable read_gap_table(const std::string& path) {
  const CsvTable t = read_csv(path);
  const auto nu = t.numeric_column("nu");
  const auto nup = t.numeric_column("nu_prime");
  const auto i = t.numeric_column("i");
  const auto j = t.numeric_column("j");
  const auto delta = t.numeric_column("delta");
  GapTable table;
  for (std::size_t r = 0; r < delta.size(); ++r) {
    table.entries.push_back({static_cast<int>(nu[r]), static_cast<int>(nup[r]),
                             static_cast<int>(i[r]), static_cast<int>(j[r]), delta[r], path});
  }
  return table;
}

}  // namespace lrising
