#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sentivol {

/// Objective to maximize. Returns -inf (or NaN) for points outside the usable region.
using Objective = std::function<double(std::span<const double>)>;

/// Largest usable finite-difference step for coordinate i at x. Lets callers keep a stencil
/// inside the smooth piece of a piecewise-smooth objective. Empty means no limit.
using StepCap = std::function<double(std::span<const double> x, std::size_t i)>;

/// Central-difference step for coordinate x: cbrt(eps) * max(|x|, 1), rounded so that
/// (x + h) - x == h exactly. Never smaller than cbrt(eps).
double central_step(double x);

/// Central-difference gradient with central_step per coordinate, limited by `cap`. This is
/// the gradient the optimizer works with.
std::vector<double> central_gradient(const Objective& f, std::span<const double> x, const StepCap& cap = {});

/// Five-point stencil gradient with step `scale * max(|x|, 1)`, limited so the outer points
/// stay within `cap`; used only to validate central_gradient.
std::vector<double> five_point_gradient(const Objective& f, std::span<const double> x, double scale = 1e-4,
                                        const StepCap& cap = {});

/// Symmetric numerical Hessian from function values.
std::vector<std::vector<double>> numerical_hessian(const Objective& f, std::span<const double> x);

struct BfgsOptions {
  std::size_t max_iterations = 500;
  /// Stop when max_i |g_i| * max(|x_i|, 1) / max(|f|, 1) falls below this.
  double tolerance = 1e-7;
  /// A line-search stall still counts as converged below this relative gradient.
  double stall_tolerance = 1e-4;
  /// Largest trial step in any coordinate.
  double max_step = 1.0;
  /// Passed to central_gradient.
  StepCap step_cap;
};

struct BfgsResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> gradient;
  double relative_gradient = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective after each accepted step, starting with the initial value. Non-decreasing.
  std::vector<double> trace;
};

double relative_gradient(std::span<const double> g, std::span<const double> x, double value);

/// Maximizes f from x0 by BFGS with a backtracking line search that accepts only strict
/// improvements. Returns std::nullopt when f(x0) is not finite.
std::optional<BfgsResult> maximize_bfgs(const Objective& f, std::vector<double> x0, const BfgsOptions& options = {});

}  // namespace sentivol
