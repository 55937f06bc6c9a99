#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentivol {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws InvalidInput.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// `count` consecutive weekdays starting at `start` (rolled forward to a weekday).
/// Used as the artificial trading calendar for synthetic data.
std::vector<Date> synthetic_calendar(std::size_t count, Date start = Date{std::chrono::year{2000},
                                                                          std::chrono::January,
                                                                          std::chrono::day{3}});

inline constexpr std::string_view kUnitPercentReturn = "percent daily return";

/// Date-indexed daily series. Dates are strictly increasing and every value is finite;
/// a missing observation is an absent date. Immutable after construction.
class ObservationSeries {
 public:
  ObservationSeries() = default;
  /// Throws InvalidInput if the invariants do not hold.
  ObservationSeries(std::vector<Date> dates, std::vector<double> values, std::string unit = {});

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const Date> dates() const noexcept { return dates_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::string& unit() const noexcept { return unit_; }

  Date date(std::size_t i) const { return dates_.at(i); }
  double value(std::size_t i) const { return values_.at(i); }

  /// Observations with first <= date <= last.
  ObservationSeries between(Date first, Date last) const;
  ObservationSeries with_unit(std::string unit) const;

  friend bool operator==(const ObservationSeries&, const ObservationSeries&) = default;

 private:
  std::vector<Date> dates_;
  std::vector<double> values_;
  std::string unit_;
};

/// Two series joined on their common dates.
struct AlignedPair {
  std::vector<Date> dates;
  std::vector<double> left;
  std::vector<double> right;

  std::size_t size() const noexcept { return dates.size(); }
  bool empty() const noexcept { return dates.empty(); }
};

/// 100 * (P_t / P_{t-1} - 1), dated at t.
ObservationSeries simple_returns(const ObservationSeries& prices);

/// Trailing mean over `window` observations; no partial windows.
ObservationSeries moving_average(const ObservationSeries& s, std::size_t window);

/// Trailing sample standard deviation (divisor window - 1); no partial windows.
ObservationSeries rolling_std(const ObservationSeries& s, std::size_t window);

/// s[t] - s[t-1], dated at t.
ObservationSeries diff(const ObservationSeries& s);

/// Inner join on dates. An empty result is valid.
AlignedPair align(const ObservationSeries& a, const ObservationSeries& b);

/// Restricts every series to the dates present in all of them.
std::vector<ObservationSeries> align_all(std::span<const ObservationSeries> series);

/// left = s[1..], right = s[..n-1], dated at the left element.
AlignedPair lag_pair(const ObservationSeries& s);

}  // namespace sentivol
