#include "sentivol/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sentivol/csv.hpp"

namespace sentivol {

namespace {

std::string fixed(const Json& j, int digits) {
  const double v = number_or_nan(j);
  if (std::isnan(v)) return "n/a";
  return fmt::format("{:.{}f}", v, digits);
}

std::string csv_number(const Json& j) {
  const double v = number_or_nan(j);
  return std::isnan(v) ? std::string{} : format_double(v);
}

std::string covariance_name(CovarianceType c) { return c == CovarianceType::Classical ? "classical" : "hc1"; }

Json regression_cell(const std::string& type, const std::string& index, const std::string& proxy,
                     const std::optional<RegressionFit>& fit, const std::vector<std::string>& names,
                     const std::string& error) {
  Json cell{{"type", type}, {"index", index}};
  if (!proxy.empty()) cell["proxy"] = proxy;
  if (fit) {
    cell["status"] = "ok";
    cell["fit"] = regression_to_json(*fit, names);
  } else {
    cell["status"] = "failed";
    cell["error"] = error;
  }
  return cell;
}

const Json* term(const Json& fit, std::size_t i) {
  if (!fit.contains("terms") || fit["terms"].size() <= i) return nullptr;
  return &fit["terms"][i];
}

}  // namespace

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_nan(const Json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

std::string significance_stars(double p) {
  if (!std::isfinite(p)) return "";
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

Json regression_to_json(const RegressionFit& fit, const std::vector<std::string>& term_names) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < fit.k(); ++i) {
    terms.push_back({{"name", i < term_names.size() ? term_names[i] : "x" + std::to_string(i)},
                     {"coefficient", number_or_null(fit.coefficients[i])},
                     {"std_error", number_or_null(fit.standard_errors[i])},
                     {"t_stat", number_or_null(fit.t_stats[i])},
                     {"p_value", number_or_null(fit.p_values[i])}});
  }
  return {{"n", fit.n},
          {"k", fit.k()},
          {"dof", fit.dof()},
          {"covariance", covariance_name(fit.covariance)},
          {"r_squared", number_or_null(fit.r_squared)},
          {"adjusted_r_squared", number_or_null(fit.adjusted_r_squared)},
          {"rss", number_or_null(fit.rss)},
          {"terms", std::move(terms)}};
}

Json two_stage_to_json(const TwoStageReport& report) {
  Json panel_b = Json::array();
  for (const auto& block : report.proxies) {
    const std::string proxy(to_string(block.kind));
    Json entry{{"proxy", proxy}};
    if (block.fit) {
      entry["status"] = "ok";
      entry["fit"] = regression_to_json(*block.fit, {"const", proxy});
    } else {
      entry["status"] = "failed";
      entry["error"] = block.error;
    }
    panel_b.push_back(std::move(entry));
  }
  return {{"index", report.index_label},
          {"panel_a", regression_to_json(report.stage_one, {"const", "R(t-1)"})},
          {"panel_b", std::move(panel_b)}};
}

Json egarch_to_json(const EgarchFit& fit, bool include_path) {
  Json params = Json::array();
  const auto values = fit.params.to_vector();
  for (std::size_t i = 0; i < values.size(); ++i) {
    params.push_back({{"name", fit.parameter_names[i]},
                      {"estimate", number_or_null(values[i])},
                      {"std_error", number_or_null(fit.standard_errors[i])},
                      {"t_stat", number_or_null(fit.t_stats[i])},
                      {"p_value", number_or_null(fit.p_values[i])},
                      {"free", static_cast<bool>(fit.free[i])}});
  }
  Json starts = Json::array();
  for (const auto& s : fit.convergence.starts) {
    starts.push_back({{"index", s.index},
                      {"start", s.start},
                      {"finite", s.finite},
                      {"log_likelihood", number_or_null(s.log_likelihood)},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"message", s.message}});
  }
  Json out{{"n", fit.n},
           {"k", fit.k},
           {"log_likelihood", number_or_null(fit.log_likelihood)},
           {"aic", number_or_null(fit.aic)},
           {"sc", number_or_null(fit.sc)},
           {"adjusted_r_squared", number_or_null(fit.adjusted_r_squared)},
           {"adjusted_r_squared_definition", "1 - sum((r - mu_hat)^2) / sum((r - mean(r))^2), k = 1"},
           {"sigma0_sq", number_or_null(fit.sigma0_sq)},
           {"parameters", std::move(params)},
           {"standard_errors_available", fit.standard_errors_available},
           {"warnings", fit.warnings},
           {"convergence",
            {{"iterations", fit.convergence.iterations},
             {"gradient_norm", number_or_null(fit.convergence.gradient_norm)},
             {"relative_gradient", number_or_null(fit.convergence.relative_gradient)},
             {"converged", fit.convergence.converged},
             {"start_index", fit.convergence.start_index},
             {"trace", fit.convergence.trace},
             {"starts", std::move(starts)}}}};
  if (include_path) {
    Json rows = Json::array();
    for (std::size_t t = 0; t < fit.variance.size(); ++t) {
      rows.push_back(Json::array({format_date(fit.variance.date(t)), fit.variance.value(t)}));
    }
    out["variance_path"] = std::move(rows);
  }
  return out;
}

std::string render_regression_text(const Json& stage_one_cell, const std::vector<Json>& stage_two_cells) {
  std::string out;
  const std::string index = stage_one_cell.value("index", std::string{});
  out += fmt::format("Two-stage regression results: {}\n\n", index);
  out += "Panel A: R(t) = b0 + b1 R(t-1) + e(t)\n";
  if (stage_one_cell.value("status", std::string{}) != "ok") {
    out += fmt::format("  failed: {}\n", stage_one_cell.value("error", std::string{}));
  } else {
    const Json& fit = stage_one_cell["fit"];
    out += fmt::format("  {:<12}{:>14}{:>14}{:>14}{:>10}\n", "Variable", "Coefficient", "Std. Error", "t-Statistic",
                       "Prob.");
    for (const auto& t : fit["terms"]) {
      out += fmt::format("  {:<12}{:>14}{:>14}{:>14}{:>10}\n", t["name"].get<std::string>(),
                         fixed(t["coefficient"], 4) + significance_stars(number_or_nan(t["p_value"])),
                         fixed(t["std_error"], 4), fixed(t["t_stat"], 3), fixed(t["p_value"], 3));
    }
    out += fmt::format("  Observations (after adjustments): {}\n", fit["n"].get<std::size_t>());
    out += fmt::format("  Adjusted R-squared: {}\n", fixed(fit["adjusted_r_squared"], 3));
  }

  out += "\nPanel B: e(t)^2 = b0 + b1 SENT(t) + u(t)\n";
  out += fmt::format("  {:<8}{:>8}  {:<8}{:>14}{:>14}{:>14}{:>10}{:>12}\n", "Proxy", "N", "Term", "Coefficient",
                     "Std. Error", "t-Statistic", "Prob.", "Adj. R2");
  for (const auto& cell : stage_two_cells) {
    const std::string proxy = cell.value("proxy", std::string{});
    if (cell.value("status", std::string{}) != "ok") {
      out += fmt::format("  {:<8}  failed: {}\n", proxy, cell.value("error", std::string{}));
      continue;
    }
    const Json& fit = cell["fit"];
    for (std::size_t i = 0; i < fit["terms"].size(); ++i) {
      const Json& t = *term(fit, i);
      const bool first = i == 0;
      out += fmt::format("  {:<8}{:>8}  {:<8}{:>14}{:>14}{:>14}{:>10}{:>12}\n", first ? proxy : "",
                         first ? std::to_string(fit["n"].get<std::size_t>()) : "", t["name"].get<std::string>(),
                         fixed(t["coefficient"], 4) + significance_stars(number_or_nan(t["p_value"])),
                         fixed(t["std_error"], 4), fixed(t["t_stat"], 3), fixed(t["p_value"], 3),
                         first ? fixed(fit["adjusted_r_squared"], 3) : "");
    }
  }
  out += "\n*, ** and *** indicate significance at the 10%, 5% and 1% levels.\n";
  return out;
}

std::string render_regression_csv(const Json& stage_one_cell, const std::vector<Json>& stage_two_cells) {
  std::string out = "index,panel,proxy,status,n,term,coefficient,std_error,t_stat,p_value,adjusted_r_squared\n";
  auto rows = [&](const Json& cell, const std::string& panel) {
    const std::string index = cell.value("index", std::string{});
    const std::string proxy = cell.value("proxy", std::string{});
    if (cell.value("status", std::string{}) != "ok") {
      out += fmt::format("{},{},{},{},,,,,,,\n", index, panel, proxy, cell.value("status", std::string{}));
      return;
    }
    const Json& fit = cell["fit"];
    for (const auto& t : fit["terms"]) {
      out += fmt::format("{},{},{},ok,{},{},{},{},{},{},{}\n", index, panel, proxy, fit["n"].get<std::size_t>(),
                         t["name"].get<std::string>(), csv_number(t["coefficient"]), csv_number(t["std_error"]),
                         csv_number(t["t_stat"]), csv_number(t["p_value"]), csv_number(fit["adjusted_r_squared"]));
    }
  };
  rows(stage_one_cell, "A");
  for (const auto& c : stage_two_cells) rows(c, "B");
  return out;
}

std::string render_egarch_text(const std::string& index_label, const std::vector<Json>& cells) {
  constexpr int kLabel = 22;
  constexpr int kCol = 24;
  std::string out = fmt::format("EGARCH(1,1) results: {}\n\n", index_label);

  std::vector<std::string> row_names;
  for (const auto& c : cells) {
    if (c.value("status", std::string{}) != "ok") continue;
    for (const auto& p : c["fit"]["parameters"]) {
      const auto name = p["name"].get<std::string>();
      if (std::find(row_names.begin(), row_names.end(), name) == row_names.end()) row_names.push_back(name);
    }
  }

  auto header_cell = [](const Json& c) {
    std::string label = c.contains("period") ? c["period"].value("label", std::string{}) : std::string{};
    if (c.contains("proxies") && c["proxies"].size() == 1 && c.value("mode", std::string{}) == "separate") {
      label += " " + c["proxies"][0].get<std::string>();
    }
    return label;
  };
  out += fmt::format("{:<{}}", "", kLabel);
  for (const auto& c : cells) out += fmt::format("{:>{}}", header_cell(c), kCol);
  out += "\n";
  out += fmt::format("{:<{}}", "", kLabel);
  for (const auto& c : cells) {
    std::string range;
    if (c.contains("period")) {
      range = c["period"].value("start", std::string{}) + ".." + c["period"].value("end", std::string{});
    }
    out += fmt::format("{:>{}}", range, kCol);
  }
  out += "\n";

  auto find_param = [](const Json& c, const std::string& name) -> const Json* {
    for (const auto& p : c["fit"]["parameters"]) {
      if (p["name"] == name) return &p;
    }
    return nullptr;
  };
  auto section = [&](const std::string& title, auto&& pick) {
    out += title + "\n";
    for (const auto& name : row_names) {
      if (!pick(name)) continue;
      std::string est = fmt::format("{:<{}}", "  " + name, kLabel);
      std::string se = fmt::format("{:<{}}", "", kLabel);
      for (const auto& c : cells) {
        const Json* p = c.value("status", std::string{}) == "ok" ? find_param(c, name) : nullptr;
        if (!p) {
          est += fmt::format("{:>{}}", "", kCol);
          se += fmt::format("{:>{}}", "", kCol);
          continue;
        }
        est += fmt::format("{:>{}}", fixed((*p)["estimate"], 4) + significance_stars(number_or_nan((*p)["p_value"])),
                           kCol);
        se += fmt::format("{:>{}}", "(" + fixed((*p)["std_error"], 4) + ")", kCol);
      }
      out += est + "\n" + se + "\n";
    }
  };
  section("Panel A: mean equation r(t) = mu + e(t)", [](const std::string& n) { return n == "mu"; });
  section("Panel B: variance equation log s2(t)", [](const std::string& n) { return n != "mu"; });

  auto stat_row = [&](const std::string& label, auto&& value) {
    std::string line = fmt::format("{:<{}}", label, kLabel);
    for (const auto& c : cells) {
      line += fmt::format("{:>{}}", c.value("status", std::string{}) == "ok" ? value(c["fit"]) : std::string{}, kCol);
    }
    out += line + "\n";
  };
  stat_row("Adjusted R-squared", [&](const Json& f) { return fixed(f["adjusted_r_squared"], 4); });
  stat_row("Akaike info criterion", [&](const Json& f) { return fixed(f["aic"], 4); });
  stat_row("Schwarz criterion", [&](const Json& f) { return fixed(f["sc"], 4); });
  stat_row("Observations", [&](const Json& f) { return std::to_string(f["n"].get<std::size_t>()); });
  stat_row("Converged", [&](const Json& f) { return f["convergence"]["converged"].get<bool>() ? "yes" : "no"; });

  std::string status = fmt::format("{:<{}}", "Status", kLabel);
  for (const auto& c : cells) status += fmt::format("{:>{}}", c.value("status", std::string{}), kCol);
  out += status + "\n";
  for (const auto& c : cells) {
    if (c.value("status", std::string{}) != "ok") {
      out += fmt::format("  {}: {}\n", c.value("cell", std::string{}), c.value("error", std::string{}));
    }
  }
  out += "\nStandard errors in parentheses. *, ** and *** indicate significance at the 10%, 5% and 1% levels.\n";
  return out;
}

std::string render_egarch_csv(const std::vector<Json>& cells) {
  std::string out =
      "cell,index,period,start,end,status,n,parameter,estimate,std_error,t_stat,p_value,log_likelihood,aic,sc,"
      "adjusted_r_squared,converged\n";
  for (const auto& c : cells) {
    const std::string id = c.value("cell", std::string{});
    const std::string index = c.value("index", std::string{});
    std::string label;
    std::string start;
    std::string end;
    if (c.contains("period")) {
      label = c["period"].value("label", std::string{});
      start = c["period"].value("start", std::string{});
      end = c["period"].value("end", std::string{});
    }
    const std::string status = c.value("status", std::string{});
    if (status != "ok") {
      out += fmt::format("{},{},{},{},{},{},,,,,,,,,,,\n", id, index, label, start, end, status);
      continue;
    }
    const Json& f = c["fit"];
    for (const auto& p : f["parameters"]) {
      out += fmt::format("{},{},{},{},{},ok,{},{},{},{},{},{},{},{},{},{},{}\n", id, index, label, start, end,
                         f["n"].get<std::size_t>(), p["name"].get<std::string>(), csv_number(p["estimate"]),
                         csv_number(p["std_error"]), csv_number(p["t_stat"]), csv_number(p["p_value"]),
                         csv_number(f["log_likelihood"]), csv_number(f["aic"]), csv_number(f["sc"]),
                         csv_number(f["adjusted_r_squared"]), f["convergence"]["converged"].get<bool>() ? 1 : 0);
    }
  }
  return out;
}

std::string render_text(const TwoStageReport& report) {
  const auto one = regression_cell("stage_one", report.index_label, "", report.stage_one, {"const", "R(t-1)"}, "");
  std::vector<Json> two;
  for (const auto& b : report.proxies) {
    const std::string proxy(to_string(b.kind));
    two.push_back(regression_cell("stage_two", report.index_label, proxy, b.fit, {"const", proxy}, b.error));
  }
  return render_regression_text(one, two);
}

std::string render_csv(const TwoStageReport& report) {
  const auto one = regression_cell("stage_one", report.index_label, "", report.stage_one, {"const", "R(t-1)"}, "");
  std::vector<Json> two;
  for (const auto& b : report.proxies) {
    const std::string proxy(to_string(b.kind));
    two.push_back(regression_cell("stage_two", report.index_label, proxy, b.fit, {"const", proxy}, b.error));
  }
  return render_regression_csv(one, two);
}

}  // namespace sentivol
