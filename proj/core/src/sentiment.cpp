#include "sentivol/sentiment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "sentivol/csv.hpp"
#include "sentivol/errors.hpp"

namespace sentivol {

namespace {

constexpr std::array<std::pair<IndicatorKind, std::string_view>, 6> kNames{{
    {IndicatorKind::SMMI, "SMMI"},
    {IndicatorKind::SMSI, "SMSI"},
    {IndicatorKind::SVIX, "SVIX"},
    {IndicatorKind::BMMI, "BMMI"},
    {IndicatorKind::BMSI, "BMSI"},
    {IndicatorKind::DRI, "DRI"},
}};

double parse_cell(const std::string& cell, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw InvalidInput("non-numeric cell '" + cell + "' at " + where);
  }
  return v;
}

// Iterates data rows of a small fixed-schema CSV, checking the header.
template <typename RowFn>
void for_each_row(const std::string& text, const std::string& source, const std::vector<std::string>& header,
                  RowFn&& fn) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (!seen_header) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw InvalidInput(source + ": expected header '" + expected + "'");
      }
      seen_header = true;
      continue;
    }
    const std::string where = source + ":" + std::to_string(lineno);
    if (fields.size() != header.size()) throw InvalidInput(where + ": expected " + std::to_string(header.size()) + " cells");
    fn(fields, where);
  }
  if (!seen_header) throw InvalidInput(source + ": empty file");
}

}  // namespace

std::string_view to_string(IndicatorKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

IndicatorKind parse_indicator_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (const auto& [k, n] : kNames) {
    if (n == upper) return k;
  }
  throw InvalidInput("unknown sentiment indicator '" + std::string(name) + "'");
}

bool is_stock_indicator(IndicatorKind kind) {
  return kind == IndicatorKind::SMMI || kind == IndicatorKind::SMSI || kind == IndicatorKind::SVIX;
}

bool is_gapped_indicator(IndicatorKind kind) { return kind == IndicatorKind::SMSI || kind == IndicatorKind::DRI; }

SentimentSeries::SentimentSeries(ObservationSeries series, IndicatorKind kind, ConstructionParams params)
    : series_(std::move(series)), kind_(kind), params_(params) {
  if (params_.differenced) return;
  const bool nonneg = kind_ == IndicatorKind::SMSI || kind_ == IndicatorKind::BMSI || kind_ == IndicatorKind::DRI;
  for (std::size_t i = 0; i < series_.size(); ++i) {
    const double v = series_.values()[i];
    if ((nonneg && v < 0.0) || (kind_ == IndicatorKind::DRI && v > 1.0)) {
      throw InvalidInput(std::string(to_string(kind_)) + " value " + std::to_string(v) + " out of range at " +
                         format_date(series_.date(i)));
    }
  }
}

SentimentSeries momentum_index(const ObservationSeries& levels, IndicatorKind kind, MomentumOptions options) {
  if (kind != IndicatorKind::SMMI && kind != IndicatorKind::BMMI) {
    throw InvalidInput("momentum_index builds SMMI or BMMI, not " + std::string(to_string(kind)));
  }
  if (options.short_window < 1 || options.short_window >= options.long_window) {
    throw InvalidInput("momentum_index: need 1 <= short_window < long_window");
  }
  if (levels.size() < options.long_window) {
    throw InsufficientData("momentum_index (long_window " + std::to_string(options.long_window) + ")",
                           options.long_window, levels.size());
  }
  const auto fast = moving_average(levels, options.short_window);
  const auto slow = moving_average(levels, options.long_window);
  const std::size_t offset = options.long_window - options.short_window;

  std::vector<double> v(slow.size());
  for (std::size_t i = 0; i < slow.size(); ++i) {
    const double ratio = fast.values()[i + offset] / slow.values()[i];
    v[i] = options.raw_ratio ? ratio : 100.0 * (ratio - 1.0);
  }
  ConstructionParams params;
  params.short_window = options.short_window;
  params.long_window = options.long_window;
  params.raw_ratio = options.raw_ratio;
  std::vector<Date> dates(slow.dates().begin(), slow.dates().end());
  return {ObservationSeries(std::move(dates), std::move(v), options.raw_ratio ? "ratio" : "percent"), kind, params};
}

PutCallResult put_call_ratio(const std::vector<OptionVolumePair>& volumes) {
  std::vector<Date> dates;
  std::vector<double> values;
  std::vector<Date> skipped;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    const auto& p = volumes[i];
    if (!(p.put_volume >= 0.0) || !(p.call_volume >= 0.0)) {
      throw InvalidInput("negative option volume at " + format_date(p.date));
    }
    if (i > 0 && !(volumes[i - 1].date < p.date)) {
      throw InvalidInput("option volumes not strictly date-sorted at " + format_date(p.date));
    }
    if (p.call_volume == 0.0) {
      skipped.push_back(p.date);
      continue;
    }
    dates.push_back(p.date);
    values.push_back(p.put_volume / p.call_volume);
  }
  return {SentimentSeries(ObservationSeries(std::move(dates), std::move(values), "ratio"), IndicatorKind::SMSI),
          std::move(skipped)};
}

SentimentSeries ingest_implied_vol(const ObservationSeries& raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw.values()[i] < 0.0) {
      throw InvalidInput("negative implied volatility " + std::to_string(raw.values()[i]) + " at " +
                         format_date(raw.date(i)));
    }
  }
  return {raw.with_unit("annualized percent implied volatility"), IndicatorKind::SVIX};
}

SentimentSeries stability_index(const ObservationSeries& bond_returns, std::size_t window) {
  ConstructionParams params;
  params.window = window;
  return {rolling_std(bond_returns, window), IndicatorKind::BMSI, params};
}

SentimentSeries default_risk_index(const std::vector<BondSnapshot>& snapshots, double ytm_threshold) {
  std::vector<Date> dates;
  std::vector<double> values;
  dates.reserve(snapshots.size());
  values.reserve(snapshots.size());
  for (const auto& snap : snapshots) {
    std::set<std::string> ids;
    double risky = 0.0;
    double total = 0.0;
    for (const auto& q : snap.entries) {
      if (!ids.insert(q.bond_id).second) {
        throw InvalidInput("duplicate bond id '" + q.bond_id + "' on " + format_date(snap.date));
      }
      if (!(q.market_value >= 0.0)) {
        throw InvalidInput("negative market value for '" + q.bond_id + "' on " + format_date(snap.date));
      }
      total += q.market_value;
      if (q.ytm_percent > ytm_threshold) risky += q.market_value;
    }
    if (!(total > 0.0)) throw InvalidInput("zero total market value on " + format_date(snap.date));
    dates.push_back(snap.date);
    values.push_back(risky / total);
  }
  ConstructionParams params;
  params.ytm_threshold = ytm_threshold;
  return {ObservationSeries(std::move(dates), std::move(values), "share of market value"), IndicatorKind::DRI, params};
}

SentimentSeries delta(const SentimentSeries& sent) {
  ConstructionParams params = sent.params();
  params.differenced = true;
  return {diff(sent.series()), sent.kind(), params};
}

std::vector<OptionVolumePair> parse_option_volumes(const std::string& text, const std::string& source) {
  std::vector<OptionVolumePair> out;
  for_each_row(text, source, {"date", "put_volume", "call_volume"},
               [&](const std::vector<std::string>& f, const std::string& where) {
                 out.push_back({parse_date(f[0]), parse_cell(f[1], where), parse_cell(f[2], where)});
               });
  return out;
}

std::vector<OptionVolumePair> read_option_volumes(const std::filesystem::path& path) {
  return parse_option_volumes(read_text_file(path), path.string());
}

std::vector<BondSnapshot> parse_bond_snapshots(const std::string& text, const std::string& source) {
  std::vector<BondSnapshot> out;
  for_each_row(text, source, {"date", "bond_id", "market_value", "ytm_percent"},
               [&](const std::vector<std::string>& f, const std::string& where) {
                 const Date d = parse_date(f[0]);
                 if (out.empty() || out.back().date < d) {
                   out.push_back({d, {}});
                 } else if (!(out.back().date == d)) {
                   throw InvalidInput(where + ": rows not sorted by date");
                 }
                 out.back().entries.push_back({f[1], parse_cell(f[2], where), parse_cell(f[3], where)});
               });
  return out;
}

std::vector<BondSnapshot> read_bond_snapshots(const std::filesystem::path& path) {
  return parse_bond_snapshots(read_text_file(path), path.string());
}

std::string format_option_volumes(const std::vector<OptionVolumePair>& volumes) {
  std::string out = "date,put_volume,call_volume\n";
  for (const auto& v : volumes) {
    out += format_date(v.date) + "," + format_double(v.put_volume) + "," + format_double(v.call_volume) + "\n";
  }
  return out;
}

std::string format_bond_snapshots(const std::vector<BondSnapshot>& snapshots) {
  std::string out = "date,bond_id,market_value,ytm_percent\n";
  for (const auto& s : snapshots) {
    const auto d = format_date(s.date);
    for (const auto& q : s.entries) {
      out += d + "," + q.bond_id + "," + format_double(q.market_value) + "," + format_double(q.ytm_percent) + "\n";
    }
  }
  return out;
}

}  // namespace sentivol
