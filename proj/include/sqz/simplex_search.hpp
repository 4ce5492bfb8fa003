#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace sqz {

// Derivative-free Nelder-Mead maximization. Infeasible candidates must
// return -inf; the search never steps on them as the incumbent.
struct SimplexOptions {
  int max_iterations = 400;
  double f_tol = 2e-6;     // spread of simplex values
  double x_tol = 1e-5;     // simplex diameter
};

struct SimplexResult {
  std::vector<double> best_x;
  double best_f = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  int infeasible = 0;
  double simplex_diameter = 0.0;
  std::vector<double> history;  // incumbent objective per iteration
  bool converged = false;
};

inline SimplexResult simplex_maximize(
    const std::function<double(const std::vector<double>&)>& fn,
    const std::vector<double>& x0, const std::vector<double>& steps,
    const SimplexOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  SimplexResult out;

  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double f = fn(x);
    if (!(f > -std::numeric_limits<double>::infinity())) ++out.infeasible;
    if (f > out.best_f) {
      out.best_f = f;
      out.best_x = x;
    }
    return f;
  };

  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 1; i <= n; ++i) xs[i][i - 1] += steps[i - 1];
  for (int i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

  auto order = [&]() {
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (fs[j] > fs[i]) {
          std::swap(fs[i], fs[j]);
          std::swap(xs[i], xs[j]);
        }
  };
  auto diameter = [&]() {
    double d = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int k = 0; k < n; ++k) d = std::max(d, std::abs(xs[i][k] - xs[0][k]));
    return d;
  };

  for (int it = 0; it < opt.max_iterations; ++it) {
    order();
    out.iterations = it + 1;
    out.history.push_back(fs[0]);
    out.simplex_diameter = diameter();
    const bool f_done = std::isfinite(fs[n]) && std::isfinite(fs[0]) &&
                        std::abs(fs[0] - fs[n]) < opt.f_tol;
    if (out.simplex_diameter < opt.x_tol || f_done) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) centroid[k] += xs[i][k] / n;

    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b,
                     double t) {
      std::vector<double> r(n);
      for (int k = 0; k < n; ++k) r[k] = a[k] + t * (b[k] - a[k]);
      return r;
    };

    const auto reflected = blend(centroid, xs[n], -1.0);
    const double fr = eval(reflected);
    if (fr > fs[0]) {
      const auto expanded = blend(centroid, xs[n], -2.0);
      const double fe = eval(expanded);
      if (fe > fr) {
        xs[n] = expanded;
        fs[n] = fe;
      } else {
        xs[n] = reflected;
        fs[n] = fr;
      }
    } else if (fr > fs[n - 1]) {
      xs[n] = reflected;
      fs[n] = fr;
    } else {
      const auto contracted = blend(centroid, xs[n], 0.5);
      const double fc = eval(contracted);
      if (fc > fs[n]) {
        xs[n] = contracted;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          xs[i] = blend(xs[0], xs[i], 0.5);
          fs[i] = eval(xs[i]);
        }
      }
    }
  }
  order();
  out.simplex_diameter = diameter();
  return out;
}

}  // namespace sqz
