#include "sentivol/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <map>
#include <random>
#include <ostream>
#include <set>
#include <sstream>

#include "sentivol/csv.hpp"
#include "sentivol/errors.hpp"

namespace sentivol {

namespace fs = std::filesystem;

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;

constexpr const char* kDefaultLevelColumn = "level";
constexpr const char* kDefaultImpliedVolColumn = "svix";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool valid_label(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_' || c == '-';
  });
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

SeriesRef parse_series_ref(const fs::path& base, const std::string& value, const std::string& default_column) {
  const auto colon = value.rfind(':');
  if (colon == std::string::npos) return {resolve(base, value), default_column};
  return {resolve(base, trim(value.substr(0, colon))), trim(value.substr(colon + 1))};
}

std::string join_kinds(const std::vector<IndicatorKind>& kinds) {
  std::string out;
  for (auto k : kinds) out += (out.empty() ? "" : ",") + std::string(to_string(k));
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

SubPeriodSpec SubPeriodSpec::defaults() {
  return {{
      {"before", Date{year{2000}, month{1}, day{1}}, Date{year{2008}, month{8}, day{31}}},
      {"crisis", Date{year{2008}, month{9}, day{1}}, Date{year{2009}, month{5}, day{31}}},
      {"after", Date{year{2009}, month{6}, day{1}}, Date{year{2019}, month{3}, day{18}}},
  }};
}

void SubPeriodSpec::validate() const {
  std::set<std::string> labels;
  for (const auto& p : periods) {
    if (p.end < p.start) throw ConfigError("period '" + p.label + "' ends before it starts");
    if (!labels.insert(p.label).second) throw ConfigError("duplicate period label '" + p.label + "'");
  }
}

NamedSubSeries make_sub_series(std::string label, ObservationSeries series) {
  const bool empty = series.empty();
  return {std::move(label), std::move(series), empty};
}

std::vector<NamedSubSeries> split_periods(const ObservationSeries& series, const SubPeriodSpec& spec) {
  std::vector<NamedSubSeries> out;
  out.reserve(spec.periods.size());
  for (const auto& p : spec.periods) out.push_back(make_sub_series(p.label, series.between(p.start, p.end)));
  return out;
}

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  RunConfig config;
  std::vector<SubPeriod> periods;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  auto index_for = [&](const std::string& label) -> IndexConfig& {
    for (auto& ix : config.indices) {
      if (ix.label == label) return ix;
    }
    IndexConfig ix;
    ix.label = label;
    ix.index_class = label == "bond" ? IndexClass::Bond : IndexClass::Stock;
    config.indices.push_back(std::move(ix));
    return config.indices.back();
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));

    auto as_size = [&]() -> std::size_t {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw ConfigError(where + ": '" + key + "' needs a non-negative integer");
      }
    };
    auto as_double = [&]() {
      try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
      } catch (const std::exception&) {
        throw ConfigError(where + ": '" + key + "' needs a number");
      }
    };
    auto as_bool = [&]() {
      const auto v = lower(value);
      if (v == "true" || v == "yes" || v == "1") return true;
      if (v == "false" || v == "no" || v == "0") return false;
      throw ConfigError(where + ": '" + key + "' needs true or false");
    };
    auto as_kinds = [&]() {
      std::vector<IndicatorKind> kinds;
      try {
        for (const auto& item : split_list(value)) kinds.push_back(parse_indicator_kind(item));
      } catch (const InvalidInput& e) {
        throw ConfigError(where + ": " + e.what());
      }
      return kinds;
    };

    if (key == "seed") {
      config.seed = as_size();
    } else if (key == "output.dir") {
      config.out_dir = resolve(base_dir, value);
    } else if (key == "output.formats") {
      config.formats = {false, false};
      for (const auto& f : split_list(lower(value))) {
        if (f == "text") {
          config.formats.text = true;
        } else if (f == "csv") {
          config.formats.csv = true;
        } else if (f != "json") {
          throw ConfigError(where + ": unknown output format '" + f + "'");
        }
      }
    } else if (key == "period") {
      std::istringstream fields(value);
      std::string label, start, end, extra;
      if (!(fields >> label >> start >> end) || (fields >> extra)) {
        throw ConfigError(where + ": period needs '<label> <start> <end>'");
      }
      try {
        periods.push_back({label, parse_date(start), parse_date(end)});
      } catch (const InvalidInput& e) {
        throw ConfigError(where + ": " + e.what());
      }
    } else if (key == "indicators.short_window") {
      config.momentum.short_window = as_size();
    } else if (key == "indicators.long_window") {
      config.momentum.long_window = as_size();
    } else if (key == "indicators.raw_ratio") {
      config.momentum.raw_ratio = as_bool();
    } else if (key == "indicators.bmsi_window") {
      config.bmsi_window = as_size();
    } else if (key == "indicators.dri_threshold") {
      config.dri_threshold = as_double();
    } else if (key == "regression.min_obs") {
      config.regression_min_obs = as_size();
    } else if (key == "regression.covariance") {
      const auto v = lower(value);
      if (v == "classical") {
        config.covariance = CovarianceType::Classical;
      } else if (v == "hc1") {
        config.covariance = CovarianceType::HC1;
      } else {
        throw ConfigError(where + ": regression.covariance must be classical or hc1");
      }
    } else if (key == "egarch.multistart") {
      config.egarch.multistart = as_size();
    } else if (key == "egarch.tolerance") {
      config.egarch.tolerance = as_double();
    } else if (key == "egarch.max_iterations") {
      config.egarch.max_iterations = as_size();
    } else if (key == "egarch.min_obs") {
      config.egarch.min_obs = as_size();
    } else if (key == "egarch.sigma0") {
      const auto v = lower(value);
      if (v == "sample") {
        config.egarch.sigma0 = Sigma0Policy::SampleVariance;
      } else if (v == "unconditional") {
        config.egarch.sigma0 = Sigma0Policy::Unconditional;
      } else {
        throw ConfigError(where + ": egarch.sigma0 must be sample or unconditional");
      }
    } else if (key == "egarch.timing") {
      const auto v = lower(value);
      if (v == "contemporaneous") {
        config.egarch.timing = SentimentTiming::Contemporaneous;
      } else if (v == "lagged") {
        config.egarch.timing = SentimentTiming::Lagged;
      } else {
        throw ConfigError(where + ": egarch.timing must be contemporaneous or lagged");
      }
    } else if (key == "egarch.delta_mode") {
      const auto v = lower(value);
      if (v == "joint") {
        config.delta_mode = DeltaMode::Joint;
      } else if (v == "separate") {
        config.delta_mode = DeltaMode::Separate;
      } else {
        throw ConfigError(where + ": egarch.delta_mode must be joint or separate");
      }
    } else if (key == "egarch.allow_gapped") {
      config.allow_gapped = as_bool();
    } else {
      const auto dot = key.find('.');
      const std::string label = dot == std::string::npos ? "" : key.substr(0, dot);
      const std::string field = dot == std::string::npos ? "" : key.substr(dot + 1);
      if (!valid_label(label) || label == "output" || label == "indicators" || label == "regression" ||
          label == "egarch") {
        throw ConfigError(where + ": unknown key '" + key + "'");
      }
      auto& ix = index_for(label);
      if (field == "class") {
        const auto v = lower(value);
        if (v == "stock") {
          ix.index_class = IndexClass::Stock;
        } else if (v == "bond") {
          ix.index_class = IndexClass::Bond;
        } else {
          throw ConfigError(where + ": class must be stock or bond");
        }
      } else if (field == "levels") {
        ix.levels = parse_series_ref(base_dir, value, kDefaultLevelColumn);
      } else if (field == "implied_vol") {
        ix.implied_vol = parse_series_ref(base_dir, value, kDefaultImpliedVolColumn);
      } else if (field == "options") {
        ix.options = resolve(base_dir, value);
      } else if (field == "snapshots") {
        ix.snapshots = resolve(base_dir, value);
      } else if (field == "proxies") {
        ix.proxies = as_kinds();
      } else if (field == "egarch_proxies") {
        ix.egarch_proxies = as_kinds();
      } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
      }
    }
  }
  if (!periods.empty()) config.periods.periods = std::move(periods);
  return config;
}

RunConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

std::string format_config(const RunConfig& c) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  kv("seed", std::to_string(c.seed));
  kv("output.dir", c.out_dir.string());
  std::string formats = "json";
  if (c.formats.text) formats += ",text";
  if (c.formats.csv) formats += ",csv";
  kv("output.formats", formats);
  for (const auto& p : c.periods.periods) kv("period", p.label + " " + format_date(p.start) + " " + format_date(p.end));
  kv("indicators.short_window", std::to_string(c.momentum.short_window));
  kv("indicators.long_window", std::to_string(c.momentum.long_window));
  kv("indicators.raw_ratio", c.momentum.raw_ratio ? "true" : "false");
  kv("indicators.bmsi_window", std::to_string(c.bmsi_window));
  kv("indicators.dri_threshold", format_double(c.dri_threshold));
  kv("regression.min_obs", std::to_string(c.regression_min_obs));
  kv("regression.covariance", c.covariance == CovarianceType::Classical ? "classical" : "hc1");
  kv("egarch.multistart", std::to_string(c.egarch.multistart));
  kv("egarch.tolerance", format_double(c.egarch.tolerance));
  kv("egarch.max_iterations", std::to_string(c.egarch.max_iterations));
  kv("egarch.min_obs", std::to_string(c.egarch.min_obs));
  kv("egarch.sigma0", c.egarch.sigma0 == Sigma0Policy::SampleVariance ? "sample" : "unconditional");
  kv("egarch.timing", c.egarch.timing == SentimentTiming::Contemporaneous ? "contemporaneous" : "lagged");
  kv("egarch.delta_mode", c.delta_mode == DeltaMode::Joint ? "joint" : "separate");
  kv("egarch.allow_gapped", c.allow_gapped ? "true" : "false");
  for (const auto& ix : c.indices) {
    const std::string p = ix.label + ".";
    kv(p + "class", ix.index_class == IndexClass::Stock ? "stock" : "bond");
    if (ix.levels) kv(p + "levels", ix.levels->file.string() + ":" + ix.levels->column);
    if (ix.implied_vol) kv(p + "implied_vol", ix.implied_vol->file.string() + ":" + ix.implied_vol->column);
    if (ix.options) kv(p + "options", ix.options->string());
    if (ix.snapshots) kv(p + "snapshots", ix.snapshots->string());
    kv(p + "proxies", join_kinds(ix.proxies));
    if (ix.egarch_proxies) kv(p + "egarch_proxies", join_kinds(*ix.egarch_proxies));
  }
  return out;
}

std::vector<IndicatorKind> effective_egarch_proxies(const RunConfig& config, const IndexConfig& index) {
  const auto& source = index.egarch_proxies ? *index.egarch_proxies : index.proxies;
  std::vector<IndicatorKind> out;
  for (auto k : source) {
    if (config.allow_gapped || !is_gapped_indicator(k)) out.push_back(k);
  }
  return out;
}

std::vector<std::string> validation_errors(const RunConfig& c) {
  std::vector<std::string> errors;
  if (c.indices.empty()) errors.emplace_back("no index configured (expected keys like 'stock.levels')");
  auto check_file = [&](const std::string& what, const fs::path& p) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) errors.push_back(what + ": file not found: " + p.string());
  };
  for (const auto& ix : c.indices) {
    const std::string name = "index '" + ix.label + "'";
    if (!ix.levels) {
      errors.push_back(name + ": missing 'levels'");
    } else {
      check_file(name + " levels", ix.levels->file);
    }
    if (ix.proxies.empty()) errors.push_back(name + ": no proxies selected");
    std::vector<IndicatorKind> all = ix.proxies;
    if (ix.egarch_proxies) all.insert(all.end(), ix.egarch_proxies->begin(), ix.egarch_proxies->end());
    std::set<IndicatorKind> seen;
    for (auto k : all) {
      if (!seen.insert(k).second) continue;
      const std::string kind(to_string(k));
      if (is_stock_indicator(k) != (ix.index_class == IndexClass::Stock)) {
        errors.push_back(name + ": " + kind + " does not apply to a " +
                         (ix.index_class == IndexClass::Stock ? "stock" : "bond") + " index");
      }
      if (k == IndicatorKind::SVIX) {
        if (!ix.implied_vol) {
          errors.push_back(name + ": SVIX needs 'implied_vol'");
        } else {
          check_file(name + " implied_vol", ix.implied_vol->file);
        }
      }
      if (k == IndicatorKind::SMSI) {
        if (!ix.options) {
          errors.push_back(name + ": SMSI needs 'options'");
        } else {
          check_file(name + " options", *ix.options);
        }
      }
      if (k == IndicatorKind::DRI) {
        if (!ix.snapshots) {
          errors.push_back(name + ": DRI needs 'snapshots'");
        } else {
          check_file(name + " snapshots", *ix.snapshots);
        }
      }
    }
  }
  std::set<std::string> labels;
  for (const auto& ix : c.indices) {
    if (!labels.insert(ix.label).second) errors.push_back("duplicate index label '" + ix.label + "'");
  }
  try {
    c.periods.validate();
  } catch (const ConfigError& e) {
    errors.emplace_back(e.what());
  }
  if (c.periods.periods.empty()) errors.emplace_back("no sub-periods configured");
  if (c.momentum.short_window < 1 || c.momentum.short_window >= c.momentum.long_window) {
    errors.emplace_back("indicators: need 1 <= short_window < long_window");
  }
  if (c.bmsi_window < 2) errors.emplace_back("indicators.bmsi_window must be >= 2");
  if (c.egarch.multistart < 1) errors.emplace_back("egarch.multistart must be >= 1");
  if (!(c.egarch.tolerance > 0.0)) errors.emplace_back("egarch.tolerance must be positive");
  if (c.egarch.min_obs < 10) errors.emplace_back("egarch.min_obs must be >= 10");
  if (c.regression_min_obs < 4) errors.emplace_back("regression.min_obs must be >= 4");
  return errors;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::vector<IndexInputs> compute_indicators(const RunConfig& config) {
  std::map<fs::path, DateTable> tables;
  auto table = [&](const fs::path& p) -> const DateTable& {
    auto it = tables.find(p);
    if (it == tables.end()) it = tables.emplace(p, read_date_table(p)).first;
    return it->second;
  };

  std::vector<IndexInputs> out;
  for (const auto& ix : config.indices) {
    IndexInputs in;
    in.label = ix.label;
    in.levels = table(ix.levels->file).series(ix.levels->column, "index level");
    in.returns = simple_returns(in.levels);

    std::vector<IndicatorKind> needed = ix.proxies;
    for (auto k : effective_egarch_proxies(config, ix)) {
      if (std::find(needed.begin(), needed.end(), k) == needed.end()) needed.push_back(k);
    }
    for (auto k : needed) {
      try {
        switch (k) {
          case IndicatorKind::SMMI:
          case IndicatorKind::BMMI:
            in.indicators.push_back(momentum_index(in.levels, k, config.momentum));
            break;
          case IndicatorKind::SVIX:
            in.indicators.push_back(
                ingest_implied_vol(table(ix.implied_vol->file).series(ix.implied_vol->column)));
            break;
          case IndicatorKind::SMSI: {
            auto pcr = put_call_ratio(read_option_volumes(*ix.options));
            in.skipped_put_call = std::move(pcr.skipped);
            in.indicators.push_back(std::move(pcr.index));
            break;
          }
          case IndicatorKind::BMSI:
            in.indicators.push_back(stability_index(in.returns, config.bmsi_window));
            break;
          case IndicatorKind::DRI:
            in.indicators.push_back(default_risk_index(read_bond_snapshots(*ix.snapshots), config.dri_threshold));
            break;
        }
      } catch (const InsufficientData& e) {
        in.failures.emplace_back(k, e.what());
      }
    }
    out.push_back(std::move(in));
  }
  return out;
}

std::string egarch_plot_csv(const EgarchData& data, const EgarchFit& fit) {
  std::string out = "date,return,variance";
  for (const auto& n : data.exog_names) out += ",dsent_" + n;
  out += "\n";
  for (std::size_t t = 0; t < data.size(); ++t) {
    out += format_date(data.dates[t]) + "," + format_double(data.returns[t]) + "," +
           format_double(fit.variance.value(t));
    for (const auto& x : data.exog) out += "," + format_double(x[t]);
    out += "\n";
  }
  return out;
}

std::string regression_plot_csv(const ObservationSeries& squared_residuals, const SentimentSeries& sentiment) {
  const auto pair = align(squared_residuals, sentiment.series());
  std::string out = "date,squared_residual,sentiment\n";
  for (std::size_t i = 0; i < pair.size(); ++i) {
    out += format_date(pair.dates[i]) + "," + format_double(pair.left[i]) + "," + format_double(pair.right[i]) + "\n";
  }
  return out;
}

RunSummary run_pipeline(const RunConfig& config, std::ostream& log) {
  RunSummary summary;
  const auto errors = validation_errors(config);
  if (!errors.empty()) {
    for (const auto& e : errors) log << "config error: " << e << "\n";
    summary.exit_code = 2;
    return summary;
  }
  std::vector<IndexInputs> inputs;
  try {
    inputs = compute_indicators(config);
  } catch (const Error& e) {
    log << "input error: " << e.what() << "\n";
    summary.exit_code = 2;
    return summary;
  }

  const fs::path out = config.out_dir;
  fs::create_directories(out);
  std::vector<std::string> plots;
  std::vector<std::string> tables;
  std::size_t ordinal = 0;

  auto write_cell = [&](CellStatus status, Json cell) {
    status.file = "cells/" + status.id + ".json";
    cell["cell"] = status.id;
    write_text_file(out / status.file, dump(cell));
    log << fmt::format("{:<40} {:<18} {}\n", status.id, status.status, status.message);
    summary.cells.push_back(std::move(status));
    return cell;
  };

  for (std::size_t ii = 0; ii < config.indices.size(); ++ii) {
    const auto& ix = config.indices[ii];
    const auto& in = inputs[ii];
    auto find_indicator = [&](IndicatorKind k) -> const SentimentSeries* {
      for (const auto& s : in.indicators) {
        if (s.kind() == k) return &s;
      }
      return nullptr;
    };
    auto indicator_failure = [&](IndicatorKind k) {
      for (const auto& [kind, msg] : in.failures) {
        if (kind == k) return msg;
      }
      return std::string("indicator unavailable");
    };

    // Stage one.
    std::optional<RegressionFit> first;
    Json one_cell{{"type", "stage_one"}, {"index", ix.label}};
    CellStatus one{ix.label + ".stage_one", "stage_one", ix.label, "", "", "ok", true, "", ""};
    try {
      first = stage_one(in.returns, config.regression_min_obs, config.covariance);
      one_cell["status"] = "ok";
      one_cell["fit"] = regression_to_json(*first, {"const", "R(t-1)"});
    } catch (const Error& e) {
      one.status = "failed";
      one.converged = false;
      one.message = e.what();
      one_cell["status"] = "failed";
      one_cell["error"] = e.what();
    }
    one_cell = write_cell(one, one_cell);

    // Stage two.
    std::vector<Json> two_cells;
    const auto sq = first ? squared_residuals(*first) : ObservationSeries{};
    for (auto k : ix.proxies) {
      const std::string proxy(to_string(k));
      CellStatus st{ix.label + ".stage_two." + proxy, "stage_two", ix.label, proxy, "", "ok", true, "", ""};
      Json cell{{"type", "stage_two"}, {"index", ix.label}, {"proxy", proxy}};
      const auto* sent = find_indicator(k);
      try {
        if (!first) throw Error("stage one failed");
        if (!sent) throw Error(indicator_failure(k));
        const auto fit = stage_two(sq, *sent, config.regression_min_obs, config.covariance);
        cell["status"] = "ok";
        cell["fit"] = regression_to_json(fit, {"const", proxy});
        const std::string plot = "plot/" + st.id + ".csv";
        write_text_file(out / plot, regression_plot_csv(sq, *sent));
        plots.push_back(plot);
      } catch (const Error& e) {
        st.status = dynamic_cast<const InsufficientData*>(&e) ? "insufficient_data" : "failed";
        st.converged = false;
        st.message = e.what();
        cell["status"] = st.status;
        cell["error"] = e.what();
      }
      two_cells.push_back(write_cell(st, cell));
    }

    // EGARCH per sub-period.
    const auto egarch_kinds = effective_egarch_proxies(config, ix);
    std::vector<std::vector<IndicatorKind>> groups;
    if (config.delta_mode == DeltaMode::Joint || egarch_kinds.empty()) {
      groups.push_back(egarch_kinds);
    } else {
      for (auto k : egarch_kinds) groups.push_back({k});
    }
    std::vector<Json> egarch_cells;
    for (const auto& period : config.periods.periods) {
      for (const auto& group : groups) {
        std::string id = ix.label + ".egarch." + period.label;
        if (config.delta_mode == DeltaMode::Separate && group.size() == 1) id += "." + std::string(to_string(group[0]));
        std::vector<std::string> names;
        for (auto k : group) names.emplace_back(to_string(k));
        CellStatus st{id, "egarch", ix.label, join_kinds(group), period.label, "ok", false, "", ""};
        Json cell{{"type", "egarch"},
                  {"index", ix.label},
                  {"mode", config.delta_mode == DeltaMode::Joint ? "joint" : "separate"},
                  {"proxies", names},
                  {"period",
                   {{"label", period.label}, {"start", format_date(period.start)}, {"end", format_date(period.end)}}}};
        try {
          std::vector<ObservationSeries> deltas;
          for (auto k : group) {
            const auto* sent = find_indicator(k);
            if (!sent) throw Error(std::string(to_string(k)) + ": " + indicator_failure(k));
            deltas.push_back(delta(*sent).series());
          }
          const auto data = make_egarch_data(in.returns.between(period.start, period.end), deltas, names);
          if (data.size() < config.egarch.min_obs) {
            throw InsufficientData("EGARCH " + period.label, config.egarch.min_obs, data.size());
          }
          EgarchOptions opts = config.egarch;
          opts.seed = config.seed * 1000003ULL + ordinal;
          const auto fit = fit_egarch(data, opts);
          cell["status"] = "ok";
          cell["fit"] = egarch_to_json(fit);
          st.converged = fit.convergence.converged;
          st.message = st.converged ? "" : "not converged";
          const std::string plot = "plot/" + id + ".csv";
          write_text_file(out / plot, egarch_plot_csv(data, fit));
          plots.push_back(plot);
        } catch (const Error& e) {
          st.status = dynamic_cast<const InsufficientData*>(&e) ? "insufficient_data" : "failed";
          st.message = e.what();
          cell["status"] = st.status;
          cell["error"] = e.what();
        }
        ++ordinal;
        egarch_cells.push_back(write_cell(st, cell));
      }
    }

    if (config.formats.text) {
      const std::string reg = "tables/" + ix.label + "_regression.txt";
      const std::string eg = "tables/" + ix.label + "_egarch.txt";
      write_text_file(out / reg, render_regression_text(one_cell, two_cells));
      write_text_file(out / eg, render_egarch_text(ix.label, egarch_cells));
      tables.push_back(reg);
      tables.push_back(eg);
    }
    if (config.formats.csv) {
      const std::string reg = "tables/" + ix.label + "_regression.csv";
      const std::string eg = "tables/" + ix.label + "_egarch.csv";
      write_text_file(out / reg, render_regression_csv(one_cell, two_cells));
      write_text_file(out / eg, render_egarch_csv(egarch_cells));
      tables.push_back(reg);
      tables.push_back(eg);
    }
    if (!in.skipped_put_call.empty()) {
      log << fmt::format("{}: {} zero-call-volume days skipped in SMSI\n", ix.label, in.skipped_put_call.size());
    }
  }

  Json manifest{{"config_hash", fnv1a_hex(format_config(config))},
                {"seed", config.seed},
                {"created_utc", utc_timestamp()},
                {"indices", Json::array()},
                {"cells", Json::array()},
                {"tables", tables},
                {"plots", plots}};
  for (const auto& ix : config.indices) manifest["indices"].push_back(ix.label);
  for (const auto& c : summary.cells) {
    manifest["cells"].push_back({{"id", c.id},
                                 {"type", c.type},
                                 {"index", c.index},
                                 {"proxy", c.proxy},
                                 {"period", c.period},
                                 {"status", c.status},
                                 {"converged", c.converged},
                                 {"file", c.file},
                                 {"message", c.message}});
  }
  write_text_file(out / "manifest.json", dump(manifest));

  for (const auto& c : summary.cells) summary.files.push_back(c.file);
  summary.files.insert(summary.files.end(), tables.begin(), tables.end());
  summary.files.insert(summary.files.end(), plots.begin(), plots.end());
  summary.files.emplace_back("manifest.json");

  const bool any_ok = std::any_of(summary.cells.begin(), summary.cells.end(),
                                  [](const CellStatus& c) { return c.status == "ok"; });
  summary.exit_code = any_ok ? 0 : 1;
  return summary;
}

std::string render_run(const fs::path& run_dir, const std::string& format) {
  Json manifest;
  try {
    manifest = Json::parse(read_text_file(run_dir / "manifest.json"));
  } catch (const Json::exception& e) {
    throw InvalidInput("malformed manifest: " + std::string(e.what()));
  }
  std::vector<Json> cells;
  for (const auto& c : manifest.at("cells")) {
    try {
      cells.push_back(Json::parse(read_text_file(run_dir / c.at("file").get<std::string>())));
    } catch (const Json::exception& e) {
      throw InvalidInput("malformed cell file: " + std::string(e.what()));
    }
  }
  if (format == "json") return dump(Json{{"manifest", manifest}, {"cells", cells}});
  if (format != "text" && format != "csv") throw InvalidInput("unknown format '" + format + "'");

  std::string out;
  for (const auto& label_json : manifest.at("indices")) {
    const auto label = label_json.get<std::string>();
    Json one;
    std::vector<Json> two;
    std::vector<Json> eg;
    for (const auto& c : cells) {
      if (c.value("index", std::string{}) != label) continue;
      const auto type = c.value("type", std::string{});
      if (type == "stage_one") {
        one = c;
      } else if (type == "stage_two") {
        two.push_back(c);
      } else if (type == "egarch") {
        eg.push_back(c);
      }
    }
    if (!out.empty()) out += "\n";
    if (format == "text") {
      out += render_regression_text(one, two) + "\n" + render_egarch_text(label, eg);
    } else {
      out += render_regression_csv(one, two) + "\n" + render_egarch_csv(eg);
    }
  }
  return out;
}

std::vector<std::string> write_simulated_dataset(const DatasetSpec& spec, const fs::path& dir) {
  if (spec.length < 2) throw InvalidInput("simulate: length must be >= 2");
  if (spec.params.delta.size() != 1) throw InvalidInput("simulate: exactly one delta (on delta-SVIX) is required");
  const std::size_t total = spec.burn_in + spec.length + 1;
  const auto calendar = synthetic_calendar(spec.length + 1);

  // SVIX levels over burn-in plus the calendar; its first difference drives the variance.
  const auto svix_full = simulate_sentiment(IndicatorKind::SVIX, total, spec.seed ^ 0x5356495855ULL, spec.svix_scale);
  const auto sv = svix_full.series().values();
  std::vector<double> dsvix(total - 1);
  for (std::size_t i = 0; i + 1 < total; ++i) dsvix[i] = sv[i + 1] - sv[i];

  SimulationSpec sim;
  sim.params = spec.params;
  sim.length = spec.length;
  sim.seed = spec.seed;
  sim.burn_in = spec.burn_in;
  sim.dsent_policy = DsentPolicy::Supplied;
  sim.supplied = {dsvix};
  sim.start = calendar[1];
  const auto result = simulate(sim);

  std::vector<double> stock(spec.length + 1);
  stock[0] = 1000.0;
  for (std::size_t t = 1; t <= spec.length; ++t) stock[t] = stock[t - 1] * (1.0 + result.returns.value(t - 1) / 100.0);
  std::vector<double> svix(sv.end() - static_cast<std::ptrdiff_t>(spec.length + 1), sv.end());

  std::vector<std::string> names{"stock_level", "svix"};
  std::vector<ObservationSeries> columns{ObservationSeries(calendar, stock), ObservationSeries(calendar, svix)};
  std::vector<std::string> files{"market.csv", "options.csv"};

  std::mt19937_64 rng(spec.seed ^ 0x4f5054ULL);
  std::uniform_int_distribution<int> calls(1, 2000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<OptionVolumePair> volumes;
  volumes.reserve(calendar.size());
  for (const auto& d : calendar) {
    const double call = unit(rng) < 0.02 ? 0.0 : static_cast<double>(calls(rng));
    const double ratio = 0.8 * std::exp(0.2 * normal(rng));
    volumes.push_back({d, std::round(ratio * std::max(call, 500.0)), call});
  }
  write_text_file(dir / "options.csv", format_option_volumes(volumes));

  if (spec.bond) {
    SimulationSpec bsim;
    bsim.params = EgarchParams{0.01, -0.30, 0.10, -0.02, 0.90, {}};
    bsim.length = spec.length;
    bsim.seed = spec.seed + 1;
    bsim.burn_in = spec.burn_in;
    bsim.start = calendar[1];
    const auto bres = simulate(bsim);
    std::vector<double> bond(spec.length + 1);
    bond[0] = 100.0;
    for (std::size_t t = 1; t <= spec.length; ++t) bond[t] = bond[t - 1] * (1.0 + bres.returns.value(t - 1) / 100.0);
    names.emplace_back("bond_level");
    columns.emplace_back(calendar, bond);

    std::vector<BondSnapshot> snapshots;
    snapshots.reserve(calendar.size());
    std::normal_distribution<double> ytm(6.5, 1.5);
    std::uniform_real_distribution<double> value(50.0, 500.0);
    for (const auto& d : calendar) {
      BondSnapshot snap{d, {}};
      for (int b = 0; b < 10; ++b) snap.entries.push_back({"B" + std::to_string(b), value(rng), ytm(rng)});
      snapshots.push_back(std::move(snap));
    }
    write_text_file(dir / "bonds.csv", format_bond_snapshots(snapshots));
    files.emplace_back("bonds.csv");
  }
  write_date_table(dir / "market.csv", names, columns);

  Json truth{{"seed", spec.seed},
             {"length", spec.length},
             {"burn_in", spec.burn_in},
             {"svix_scale", spec.svix_scale},
             {"parameters",
              {{"mu", spec.params.mu},
               {"omega", spec.params.omega},
               {"alpha", spec.params.alpha},
               {"beta", spec.params.beta},
               {"gamma", spec.params.gamma},
               {"delta_SVIX", spec.params.delta[0]}}}};
  write_text_file(dir / "truth.json", dump(truth));
  files.emplace_back("truth.json");

  std::string cfg =
      "# Synthetic data written by `sentivol simulate`.\n"
      "seed = " + std::to_string(spec.seed) + "\n"
      "output.dir = out\n"
      "output.formats = text,csv\n"
      "\n"
      "stock.levels = market.csv:stock_level\n"
      "stock.implied_vol = market.csv:svix\n"
      "stock.options = options.csv\n"
      "stock.proxies = SMMI,SMSI,SVIX\n"
      "stock.egarch_proxies = SVIX\n";
  if (spec.bond) {
    cfg +=
        "\n"
        "bond.levels = market.csv:bond_level\n"
        "bond.snapshots = bonds.csv\n"
        "bond.proxies = BMMI,BMSI,DRI\n";
  }
  write_text_file(dir / "config.cfg", cfg);
  files.emplace_back("config.cfg");
  files.insert(files.begin(), "market.csv");
  files.erase(std::find(files.begin() + 1, files.end(), "market.csv"));
  return files;
}

std::vector<std::string> write_indices(const RunConfig& config, std::ostream& log) {
  const auto errors = validation_errors(config);
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  const auto inputs = compute_indicators(config);
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    std::vector<std::string> names{"return"};
    std::vector<ObservationSeries> columns{in.returns};
    for (const auto& s : in.indicators) {
      names.emplace_back(to_string(s.kind()));
      columns.push_back(s.series());
    }
    const std::string file = "indices/" + in.label + ".csv";
    write_date_table(config.out_dir / file, names, columns);
    files.push_back(file);
    log << fmt::format("{}: {} return rows, {} indicators", in.label, in.returns.size(), in.indicators.size());
    for (const auto& [kind, msg] : in.failures) log << fmt::format("; {} failed: {}", to_string(kind), msg);
    log << "\n";
  }
  return files;
}

}  // namespace sentivol
