#include "sentivol/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sentivol {

namespace {

const double kCbrtEps = std::cbrt(std::numeric_limits<double>::epsilon());
const double kQuarticEps = std::pow(std::numeric_limits<double>::epsilon(), 0.25);

double usable(double v) { return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity(); }

double exact_step(double x, double h) {
  volatile double tmp = x + h;
  return tmp - x;
}

double capped(double h, double x, const StepCap& cap, std::span<const double> at, std::size_t i) {
  if (!cap) return h;
  const double limit = cap(at, i);
  return limit < h ? exact_step(x, limit) : h;
}

}  // namespace

double central_step(double x) { return exact_step(x, kCbrtEps * std::max(std::fabs(x), 1.0)); }

std::vector<double> central_gradient(const Objective& f, std::span<const double> x, const StepCap& cap) {
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = capped(central_step(x[i]), x[i], cap, x, i);
    p[i] = x[i] + h;
    const double up = f(p);
    p[i] = x[i] - h;
    const double down = f(p);
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double> five_point_gradient(const Objective& f, std::span<const double> x, double scale,
                                        const StepCap& cap) {
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> g(x.size());
  const StepCap half = cap ? StepCap([&](std::span<const double> at, std::size_t i) { return 0.5 * cap(at, i); })
                           : StepCap{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = capped(exact_step(x[i], scale * std::max(std::fabs(x[i]), 1.0)), x[i], half, x, i);
    auto at = [&](double k) {
      p[i] = x[i] + k * h;
      return f(p);
    };
    const double fm2 = at(-2.0);
    const double fm1 = at(-1.0);
    const double fp1 = at(1.0);
    const double fp2 = at(2.0);
    p[i] = x[i];
    g[i] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  }
  return g;
}

std::vector<std::vector<double>> numerical_hessian(const Objective& f, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = exact_step(x[i], kQuarticEps * std::max(std::fabs(x[i]), 1.0));
  const double f0 = f(p);

  std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = x[i] + h[i];
    const double up = f(p);
    p[i] = x[i] - h[i];
    const double down = f(p);
    p[i] = x[i];
    H[i][i] = (up - 2.0 * f0 + down) / (h[i] * h[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        p[i] = x[i] + si * h[i];
        p[j] = x[j] + sj * h[j];
        const double v = f(p);
        p[i] = x[i];
        p[j] = x[j];
        return v;
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
      H[i][j] = v;
      H[j][i] = v;
    }
  }
  return H;
}

double relative_gradient(std::span<const double> g, std::span<const double> x, double value) {
  double worst = 0.0;
  const double denom = std::max(std::fabs(value), 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::fabs(g[i]) * std::max(std::fabs(x[i]), 1.0) / denom);
  }
  return worst;
}

std::optional<BfgsResult> maximize_bfgs(const Objective& f, std::vector<double> x0, const BfgsOptions& options) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const auto n = static_cast<Eigen::Index>(x0.size());
  auto eval = [&](const VectorXd& v) { return usable(f(std::span<const double>(v.data(), v.size()))); };
  auto grad = [&](const VectorXd& v) {
    const auto g = central_gradient(f, std::span<const double>(v.data(), v.size()), options.step_cap);
    return VectorXd(Eigen::Map<const VectorXd>(g.data(), n));
  };

  VectorXd x = Eigen::Map<const VectorXd>(x0.data(), n);
  double fx = eval(x);
  if (!std::isfinite(fx)) return std::nullopt;

  BfgsResult res;
  res.trace.push_back(fx);
  VectorXd g = grad(x);
  // Inverse Hessian approximation of -f, so the ascent direction is H g.
  MatrixXd H = MatrixXd::Identity(n, n);
  bool scaled = false;
  auto rel = [&] {
    return relative_gradient({g.data(), static_cast<std::size_t>(g.size())}, {x.data(), static_cast<std::size_t>(x.size())}, fx);
  };

  while (res.iterations < options.max_iterations) {
    if (!g.allFinite()) break;
    if (rel() < options.tolerance) {
      res.converged = true;
      break;
    }
    VectorXd dir = H * g;
    if (!(dir.dot(g) > 0.0)) {
      H.setIdentity();
      dir = g;
    }
    const double longest = dir.cwiseAbs().maxCoeff();
    if (longest > options.max_step) dir *= options.max_step / longest;

    const double slope = dir.dot(g);
    double step = 1.0;
    bool accepted = false;
    VectorXd x_new;
    double f_new = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
      x_new = x + step * dir;
      f_new = eval(x_new);
      if (std::isfinite(f_new) && f_new > fx && f_new >= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // A stall also happens with a stale curvature model; retry once along the gradient.
      if (!H.isIdentity()) {
        H.setIdentity();
        scaled = false;
        continue;
      }
      res.converged = rel() < options.stall_tolerance;
      break;
    }

    const VectorXd g_new = grad(x_new);
    const VectorXd s = x_new - x;
    // Curvature of -f: y = -(g_new - g).
    const VectorXd y = g - g_new;
    const double sy = s.dot(y);
    x = x_new;
    fx = f_new;
    g = g_new;
    ++res.iterations;
    res.trace.push_back(fx);

    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        H = MatrixXd::Identity(n, n) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const MatrixXd I = MatrixXd::Identity(n, n);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
  }
  if (!res.converged && res.iterations < options.max_iterations && rel() < options.tolerance) res.converged = true;

  res.x.assign(x.data(), x.data() + n);
  res.value = fx;
  res.gradient.assign(g.data(), g.data() + n);
  res.relative_gradient = rel();
  return res;
}

}  // namespace sentivol
