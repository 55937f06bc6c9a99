#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sentivol/egarch.hpp"
#include "sentivol/regression.hpp"
#include "sentivol/report.hpp"
#include "sentivol/sentiment.hpp"
#include "sentivol/simulate.hpp"
#include "sentivol/timeseries.hpp"

namespace sentivol {

struct SubPeriod {
  std::string label;
  Date start;  // inclusive
  Date end;    // inclusive
};

/// Named date ranges. Ranges may overlap; labels must be unique.
struct SubPeriodSpec {
  std::vector<SubPeriod> periods;

  /// before 2000-01-01..2008-08-31, crisis 2008-09-01..2009-05-31, after 2009-06-01..2019-03-18.
  static SubPeriodSpec defaults();
  /// Throws ConfigError on start > end or a duplicate label.
  void validate() const;
};

struct NamedSubSeries {
  std::string label;
  ObservationSeries series;
  bool empty = true;
};

NamedSubSeries make_sub_series(std::string label, ObservationSeries series);

/// Inclusive date filtering per period. Empty sub-series are kept and flagged.
std::vector<NamedSubSeries> split_periods(const ObservationSeries& series, const SubPeriodSpec& spec);

enum class IndexClass { Stock, Bond };

/// A column of a date table; column defaults depend on the key.
struct SeriesRef {
  std::filesystem::path file;
  std::string column;
};

struct IndexConfig {
  std::string label;
  IndexClass index_class = IndexClass::Stock;
  std::optional<SeriesRef> levels;
  std::optional<SeriesRef> implied_vol;          // SVIX
  std::optional<std::filesystem::path> options;  // SMSI
  std::optional<std::filesystem::path> snapshots;  // DRI
  std::vector<IndicatorKind> proxies;             // stage two
  std::optional<std::vector<IndicatorKind>> egarch_proxies;
};

enum class DeltaMode { Joint, Separate };

struct OutputFormats {
  bool text = true;
  bool csv = false;
};

struct RunConfig {
  std::vector<IndexConfig> indices;
  MomentumOptions momentum;
  std::size_t bmsi_window = 20;
  double dri_threshold = 8.0;
  std::size_t regression_min_obs = 30;
  CovarianceType covariance = CovarianceType::Classical;
  EgarchOptions egarch;
  DeltaMode delta_mode = DeltaMode::Joint;
  bool allow_gapped = false;
  SubPeriodSpec periods = SubPeriodSpec::defaults();
  std::filesystem::path out_dir = "out";
  OutputFormats formats;
  std::uint64_t seed = 0;
};

/// Parses the key = value config format. Relative paths resolve against `base_dir`.
/// Throws ConfigError with line numbers.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form of a config; parse_config(format_config(c), "/") reproduces c.
std::string format_config(const RunConfig& config);

/// Every problem found, one per line. Empty when the config is valid.
std::vector<std::string> validation_errors(const RunConfig& config);

/// Proxies used in EGARCH runs for an index: the explicit list, or the stage-two proxies,
/// with gapped indicators (SMSI, DRI) removed unless allow_gapped is set.
std::vector<IndicatorKind> effective_egarch_proxies(const RunConfig& config, const IndexConfig& index);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& text);

struct IndexInputs {
  std::string label;
  ObservationSeries levels;
  ObservationSeries returns;
  std::vector<SentimentSeries> indicators;
  std::vector<std::pair<IndicatorKind, std::string>> failures;  // indicators that could not be built
  std::vector<Date> skipped_put_call;                           // zero-call days
};

/// Reads every input file and builds the configured indicators for each index.
std::vector<IndexInputs> compute_indicators(const RunConfig& config);

/// Rows (date, return, variance, dsent_<name>...) for an EGARCH fit.
std::string egarch_plot_csv(const EgarchData& data, const EgarchFit& fit);
/// Rows (date, squared_residual, sentiment) over the stage-two sample.
std::string regression_plot_csv(const ObservationSeries& squared_residuals, const SentimentSeries& sentiment);

struct CellStatus {
  std::string id;
  std::string type;  // stage_one | stage_two | egarch
  std::string index;
  std::string proxy;
  std::string period;
  std::string status;  // ok | failed | insufficient_data
  bool converged = false;
  std::string file;
  std::string message;
};

struct RunSummary {
  int exit_code = 0;  // 0 any success, 1 all fits failed, 2 invalid config
  std::vector<CellStatus> cells;
  std::vector<std::string> files;  // relative to out_dir
};

/// Validates, computes every cell and writes artifacts under config.out_dir:
///   cells/<id>.json, tables/<index>_{regression,egarch}.{txt,csv}, plot/<id>.csv, manifest.json.
/// Nothing is written when the config is invalid (exit code 2).
RunSummary run_pipeline(const RunConfig& config, std::ostream& log);

/// Re-renders tables from a run directory's manifest and cell files.
/// format: "text", "csv" or "json".
std::string render_run(const std::filesystem::path& run_dir, const std::string& format);

/// Synthetic market data for an end-to-end run.
struct DatasetSpec {
  EgarchParams params{0.05, -0.10, 0.15, -0.06, 0.95, {0.30}};
  std::size_t length = 5000;  // returns; levels have one more row
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
  double svix_scale = 0.5;  // innovation scale of the SVIX AR(1)
  bool bond = false;        // also write a bond index and snapshot file
};

/// Writes market.csv, options.csv, [bonds.csv], truth.json and config.cfg into `dir`.
/// The stock returns follow the EGARCH-X model with delta-SVIX as the regressor.
/// Returns the written file names.
std::vector<std::string> write_simulated_dataset(const DatasetSpec& spec, const std::filesystem::path& dir);

/// Writes indices/<index>.csv with one column per indicator that could be built.
std::vector<std::string> write_indices(const RunConfig& config, std::ostream& log);

}  // namespace sentivol
