#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sentivol/timeseries.hpp"

namespace sentivol {

/// A date-keyed numeric table: first column ISO dates, remaining columns numeric,
/// blank cell = missing observation for that column.
struct DateTable {
  std::vector<std::string> columns;  // excludes the date column
  std::vector<Date> dates;
  std::vector<std::vector<std::optional<double>>> cells;  // cells[column][row]

  /// Non-missing observations of one column. Throws InvalidInput for an unknown column.
  ObservationSeries series(const std::string& column, std::string unit = {}) const;
  bool has_column(const std::string& column) const;
};

DateTable parse_date_table(const std::string& text, const std::string& source = "<memory>");
DateTable read_date_table(const std::filesystem::path& path);

/// Columns are unioned on dates; dates absent from a series are left blank.
/// Values are printed in shortest round-trip form, so re-reading is bit-identical.
std::string format_date_table(const std::vector<std::string>& names,
                              const std::vector<ObservationSeries>& series,
                              const std::string& date_header = "date");
void write_date_table(const std::filesystem::path& path, const std::vector<std::string>& names,
                      const std::vector<ObservationSeries>& series, const std::string& date_header = "date");

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Splits one CSV line on commas (no quoting support; inputs are numeric tables).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace sentivol
