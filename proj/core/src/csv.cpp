#include "sentivol/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sentivol/errors.hpp"

namespace sentivol {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, const std::string& where) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw InvalidInput("non-numeric cell '" + cell + "' at " + where);
  }
  return v;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

bool DateTable::has_column(const std::string& column) const {
  return std::find(columns.begin(), columns.end(), column) != columns.end();
}

ObservationSeries DateTable::series(const std::string& column, std::string unit) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw InvalidInput("no column '" + column + "' in table");
  const auto& col = cells[static_cast<std::size_t>(it - columns.begin())];
  std::vector<Date> d;
  std::vector<double> v;
  for (std::size_t r = 0; r < dates.size(); ++r) {
    if (col[r]) {
      d.push_back(dates[r]);
      v.push_back(*col[r]);
    }
  }
  return {std::move(d), std::move(v), std::move(unit)};
}

DateTable parse_date_table(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  DateTable table;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (header) {
      if (fields.size() < 2) throw InvalidInput(source + ": header needs a date column and at least one value column");
      table.columns.assign(fields.begin() + 1, fields.end());
      table.cells.resize(table.columns.size());
      header = false;
      continue;
    }
    const std::string where = source + ":" + std::to_string(lineno);
    if (fields.size() > table.columns.size() + 1) throw InvalidInput(where + ": too many cells");
    fields.resize(table.columns.size() + 1);
    const Date d = parse_date(fields[0]);
    if (!table.dates.empty() && !(table.dates.back() < d)) {
      throw InvalidInput(where + ": rows not sorted by date (" + fields[0] + ")");
    }
    table.dates.push_back(d);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& cell = fields[c + 1];
      table.cells[c].push_back(cell.empty() ? std::nullopt : std::optional<double>(parse_number(cell, where)));
    }
  }
  if (header) throw InvalidInput(source + ": empty file");
  return table;
}

DateTable read_date_table(const std::filesystem::path& path) {
  return parse_date_table(read_text_file(path), path.string());
}

std::string format_date_table(const std::vector<std::string>& names, const std::vector<ObservationSeries>& series,
                              const std::string& date_header) {
  if (names.size() != series.size()) throw InvalidInput("format_date_table: names/series size mismatch");
  std::set<Date> all;
  for (const auto& s : series) all.insert(s.dates().begin(), s.dates().end());

  std::string out = date_header;
  for (const auto& n : names) out += "," + n;
  out += "\n";
  std::vector<std::size_t> cursor(series.size(), 0);
  for (const Date d : all) {
    out += format_date(d);
    for (std::size_t k = 0; k < series.size(); ++k) {
      out += ",";
      const auto& s = series[k];
      if (cursor[k] < s.size() && s.dates()[cursor[k]] == d) {
        out += format_double(s.values()[cursor[k]]);
        ++cursor[k];
      }
    }
    out += "\n";
  }
  return out;
}

void write_date_table(const std::filesystem::path& path, const std::vector<std::string>& names,
                      const std::vector<ObservationSeries>& series, const std::string& date_header) {
  write_text_file(path, format_date_table(names, series, date_header));
}

}  // namespace sentivol
