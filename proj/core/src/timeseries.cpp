#include "sentivol/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "sentivol/errors.hpp"

namespace sentivol {

namespace {

using std::chrono::sys_days;

void require_length(const ObservationSeries& s, std::size_t n, const char* op) {
  if (s.size() < n) throw InsufficientData(op, n, s.size());
}

std::vector<Date> tail_dates(const ObservationSeries& s, std::size_t from) {
  return {s.dates().begin() + static_cast<std::ptrdiff_t>(from), s.dates().end()};
}

}  // namespace

Date parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto bad = [&] { return InvalidInput("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  const char* p = text.data();
  if (std::from_chars(p, p + 4, y).ec != std::errc{} ||
      std::from_chars(p + 5, p + 7, m).ec != std::errc{} ||
      std::from_chars(p + 8, p + 10, d).ec != std::errc{}) {
    throw bad();
  }
  Date out{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!out.ok()) throw bad();
  return out;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::vector<Date> synthetic_calendar(std::size_t count, Date start) {
  std::vector<Date> out;
  out.reserve(count);
  sys_days day{start};
  while (out.size() < count) {
    const std::chrono::weekday wd{day};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.emplace_back(day);
    day += std::chrono::days{1};
  }
  return out;
}

ObservationSeries::ObservationSeries(std::vector<Date> dates, std::vector<double> values, std::string unit)
    : dates_(std::move(dates)), values_(std::move(values)), unit_(std::move(unit)) {
  if (dates_.size() != values_.size()) {
    throw InvalidInput("series has " + std::to_string(dates_.size()) + " dates but " +
                       std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < dates_.size(); ++i) {
    if (!dates_[i].ok()) throw InvalidInput("invalid calendar date in series");
    if (i > 0 && !(dates_[i - 1] < dates_[i])) {
      throw InvalidInput("dates not strictly increasing at " + format_date(dates_[i]));
    }
    if (!std::isfinite(values_[i])) throw InvalidInput("non-finite value at " + format_date(dates_[i]));
  }
}

ObservationSeries ObservationSeries::between(Date first, Date last) const {
  auto lo = std::lower_bound(dates_.begin(), dates_.end(), first);
  auto hi = std::upper_bound(dates_.begin(), dates_.end(), last);
  if (hi < lo) hi = lo;
  const auto i0 = lo - dates_.begin();
  const auto i1 = hi - dates_.begin();
  return ObservationSeries({lo, hi}, {values_.begin() + i0, values_.begin() + i1}, unit_);
}

ObservationSeries ObservationSeries::with_unit(std::string unit) const {
  ObservationSeries out = *this;
  out.unit_ = std::move(unit);
  return out;
}

ObservationSeries simple_returns(const ObservationSeries& prices) {
  require_length(prices, 2, "simple_returns");
  const auto p = prices.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) {
      throw InvalidInput("non-positive price " + std::to_string(p[i]) + " at " + format_date(prices.date(i)));
    }
  }
  std::vector<double> r(p.size() - 1);
  for (std::size_t t = 1; t < p.size(); ++t) r[t - 1] = 100.0 * (p[t] / p[t - 1] - 1.0);
  return {tail_dates(prices, 1), std::move(r), std::string(kUnitPercentReturn)};
}

// Both rolling statistics accumulate deviations from a reference value that is reset to
// the current window mean every `window` steps, so drift from the add/remove updates stays
// bounded and a constant window produces exactly zero deviation.
ObservationSeries moving_average(const ObservationSeries& s, std::size_t window) {
  if (window < 1) throw InvalidInput("moving_average: window must be >= 1");
  require_length(s, window, "moving_average");
  const auto x = s.values();
  const double w = static_cast<double>(window);

  std::vector<double> out;
  out.reserve(x.size() - window + 1);
  double ref = x[0];
  double sum = 0.0;
  for (std::size_t i = 0; i < window; ++i) sum += x[i] - ref;
  out.push_back(ref + sum / w);

  for (std::size_t t = window; t < x.size(); ++t) {
    const std::size_t first = t + 1 - window;
    if (first % window == 0) {
      ref = x[first];
      sum = 0.0;
      for (std::size_t i = first; i <= t; ++i) sum += x[i] - ref;
    } else {
      sum += (x[t] - ref) - (x[t - window] - ref);
    }
    out.push_back(ref + sum / w);
  }
  return {tail_dates(s, window - 1), std::move(out), s.unit()};
}

ObservationSeries rolling_std(const ObservationSeries& s, std::size_t window) {
  if (window < 2) throw InvalidInput("rolling_std: window must be >= 2");
  require_length(s, window, "rolling_std");
  const auto x = s.values();
  const double w = static_cast<double>(window);

  double ref = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  auto resync = [&](std::size_t first, std::size_t last) {
    ref = x[first];
    s1 = 0.0;
    s2 = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
      const double d = x[i] - ref;
      s1 += d;
      s2 += d * d;
    }
  };
  auto current = [&] {
    const double var = (s2 - s1 * s1 / w) / (w - 1.0);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  };

  std::vector<double> out;
  out.reserve(x.size() - window + 1);
  resync(0, window - 1);
  out.push_back(current());
  for (std::size_t t = window; t < x.size(); ++t) {
    const std::size_t first = t + 1 - window;
    if (first % window == 0) {
      resync(first, t);
    } else {
      const double din = x[t] - ref;
      const double dout = x[t - window] - ref;
      s1 += din - dout;
      s2 += din * din - dout * dout;
    }
    out.push_back(current());
  }
  return {tail_dates(s, window - 1), std::move(out), s.unit()};
}

ObservationSeries diff(const ObservationSeries& s) {
  require_length(s, 2, "diff");
  const auto x = s.values();
  std::vector<double> out(x.size() - 1);
  for (std::size_t t = 1; t < x.size(); ++t) out[t - 1] = x[t] - x[t - 1];
  return {tail_dates(s, 1), std::move(out), s.unit()};
}

AlignedPair align(const ObservationSeries& a, const ObservationSeries& b) {
  AlignedPair out;
  const auto da = a.dates();
  const auto db = b.dates();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < da.size() && j < db.size()) {
    if (da[i] < db[j]) {
      ++i;
    } else if (db[j] < da[i]) {
      ++j;
    } else {
      out.dates.push_back(da[i]);
      out.left.push_back(a.values()[i]);
      out.right.push_back(b.values()[j]);
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<ObservationSeries> align_all(std::span<const ObservationSeries> series) {
  if (series.empty()) return {};
  std::vector<Date> common(series[0].dates().begin(), series[0].dates().end());
  for (std::size_t k = 1; k < series.size(); ++k) {
    std::vector<Date> next;
    std::set_intersection(common.begin(), common.end(), series[k].dates().begin(), series[k].dates().end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  std::vector<ObservationSeries> out;
  out.reserve(series.size());
  for (const auto& s : series) {
    std::vector<double> v;
    v.reserve(common.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < s.size() && j < common.size(); ++i) {
      if (s.dates()[i] == common[j]) {
        v.push_back(s.values()[i]);
        ++j;
      }
    }
    out.emplace_back(common, std::move(v), s.unit());
  }
  return out;
}

AlignedPair lag_pair(const ObservationSeries& s) {
  require_length(s, 2, "lag_pair");
  const auto x = s.values();
  AlignedPair out;
  out.dates = tail_dates(s, 1);
  out.left.assign(x.begin() + 1, x.end());
  out.right.assign(x.begin(), x.end() - 1);
  return out;
}

}  // namespace sentivol
