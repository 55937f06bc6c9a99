#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sentivol/egarch.hpp"
#include "sentivol/regression.hpp"

namespace sentivol {

using Json = nlohmann::json;

/// NaN and infinities are written as null; the reverse mapping is number_or_nan().
Json number_or_null(double v);
double number_or_nan(const Json& j);

/// {"n", "k", "dof", "covariance", "r_squared", "adjusted_r_squared", "rss",
///  "terms": [{"name", "coefficient", "std_error", "t_stat", "p_value"}]}
Json regression_to_json(const RegressionFit& fit, const std::vector<std::string>& term_names);

/// {"index", "panel_a": <regression>, "panel_b": [{"proxy", "status", "fit" | "error"}]}
Json two_stage_to_json(const TwoStageReport& report);

/// Full fit export, including the variance path as [date, variance] rows.
Json egarch_to_json(const EgarchFit& fit, bool include_path = true);

/// Significance stars for a two-sided p-value: *** < 0.01, ** < 0.05, * < 0.10.
std::string significance_stars(double p_value);

/// Table-1 style text from cell documents (see pipeline cell schema): one stage-one cell and
/// any number of stage-two cells for the same index.
std::string render_regression_text(const Json& stage_one_cell, const std::vector<Json>& stage_two_cells);
std::string render_regression_csv(const Json& stage_one_cell, const std::vector<Json>& stage_two_cells);

/// Table-2 style text: one column per EGARCH cell, estimates with stars and standard errors
/// in parentheses, then adjusted R^2, AIC, Schwarz criterion and observation counts.
std::string render_egarch_text(const std::string& index_label, const std::vector<Json>& egarch_cells);
std::string render_egarch_csv(const std::vector<Json>& egarch_cells);

/// Convenience renderings of an in-memory two-stage report.
std::string render_text(const TwoStageReport& report);
std::string render_csv(const TwoStageReport& report);

}  // namespace sentivol
