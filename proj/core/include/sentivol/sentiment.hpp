#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentivol/timeseries.hpp"

namespace sentivol {

/// Stock-market proxies (SMMI, SMSI, SVIX) and bond-market proxies (BMMI, BMSI, DRI).
enum class IndicatorKind { SMMI, SMSI, SVIX, BMMI, BMSI, DRI };

std::string_view to_string(IndicatorKind kind);
/// Case-insensitive. Throws InvalidInput for unknown names.
IndicatorKind parse_indicator_kind(std::string_view name);
bool is_stock_indicator(IndicatorKind kind);
/// Indicators whose source data is typically discontinuous (zero-call days, snapshot gaps).
bool is_gapped_indicator(IndicatorKind kind);

/// Construction parameters actually used to build an indicator.
struct ConstructionParams {
  std::optional<std::size_t> short_window;
  std::optional<std::size_t> long_window;
  std::optional<std::size_t> window;
  std::optional<double> ytm_threshold;
  bool raw_ratio = false;
  bool differenced = false;

  friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

class SentimentSeries {
 public:
  /// Throws InvalidInput when values violate the kind's range (SMSI/BMSI >= 0, DRI in [0, 1]).
  /// Range checks are skipped for differenced series.
  SentimentSeries(ObservationSeries series, IndicatorKind kind, ConstructionParams params = {});

  const ObservationSeries& series() const noexcept { return series_; }
  IndicatorKind kind() const noexcept { return kind_; }
  const ConstructionParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return series_.size(); }

 private:
  ObservationSeries series_;
  IndicatorKind kind_;
  ConstructionParams params_;
};

struct OptionVolumePair {
  Date date;
  double put_volume = 0.0;
  double call_volume = 0.0;
};

struct BondQuote {
  std::string bond_id;
  double market_value = 0.0;
  double ytm_percent = 0.0;
};

struct BondSnapshot {
  Date date;
  std::vector<BondQuote> entries;
};

struct MomentumOptions {
  std::size_t short_window = 5;
  std::size_t long_window = 250;
  /// Emit MA_short / MA_long instead of 100 * (MA_short / MA_long - 1).
  bool raw_ratio = false;
};

/// SMMI or BMMI: short moving average of the level relative to the long one.
SentimentSeries momentum_index(const ObservationSeries& levels, IndicatorKind kind, MomentumOptions options = {});

struct PutCallResult {
  SentimentSeries index;
  std::vector<Date> skipped;  // zero call volume
};

/// SMSI: put volume / call volume. Zero-call days are dropped and reported.
PutCallResult put_call_ratio(const std::vector<OptionVolumePair>& volumes);

/// SVIX: validated pass-through of an implied-volatility series.
SentimentSeries ingest_implied_vol(const ObservationSeries& raw);

/// BMSI: rolling standard deviation of bond-index returns.
SentimentSeries stability_index(const ObservationSeries& bond_returns, std::size_t window = 20);

/// DRI: market-value share of bonds with yield-to-maturity strictly above the threshold.
SentimentSeries default_risk_index(const std::vector<BondSnapshot>& snapshots, double ytm_threshold = 8.0);

/// First difference, kind preserved, params.differenced = true.
SentimentSeries delta(const SentimentSeries& sent);

/// Columns: date, put_volume, call_volume.
std::vector<OptionVolumePair> read_option_volumes(const std::filesystem::path& path);
std::vector<OptionVolumePair> parse_option_volumes(const std::string& text, const std::string& source = "<memory>");

/// Columns: date, bond_id, market_value, ytm_percent. One row per bond per date, date-sorted.
std::vector<BondSnapshot> read_bond_snapshots(const std::filesystem::path& path);
std::vector<BondSnapshot> parse_bond_snapshots(const std::string& text, const std::string& source = "<memory>");

std::string format_option_volumes(const std::vector<OptionVolumePair>& volumes);
std::string format_bond_snapshots(const std::vector<BondSnapshot>& snapshots);

}  // namespace sentivol
