#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "blowuplab/errors.hpp"

namespace blowuplab::ode {

using State2 = std::array<double, 2>;

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double h_init = 1e-6;
  double h_min = 1e-15;
  std::size_t max_steps = 2'000'000;
};

/// Adaptive embedded Cash-Karp 4(5) step for a 2-component system.
/// F has signature void(double x, const State2& y, State2& dydx).
template <typename F>
class Rk45 {
 public:
  Rk45(F f, Options opt = {}) : f_(std::move(f)), opt_(opt) {}

  /// Integrates y from x0 to x1 (x1 > x0). Calls `watch(x, y)` after each
  /// accepted step when provided.
  template <typename Watch>
  State2 integrate(double x0, double x1, State2 y, Watch&& watch) {
    double x = x0;
    double h = std::min(opt_.h_init, x1 - x0);
    std::size_t steps = 0;
    while (x < x1) {
      if (++steps > opt_.max_steps) {
        throw numerical_error("ode: step budget exhausted at x = " + std::to_string(x));
      }
      if (x + h > x1) h = x1 - x;
      State2 ynew;
      double err = attempt(x, y, h, ynew);
      const double scale = opt_.abs_tol + opt_.rel_tol * norm(ynew);
      if (err <= scale || h <= opt_.h_min) {
        x += h;
        y = ynew;
        watch(x, y);
        const double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        h = std::min(h * std::min(grow, 5.0), x1 - x + 1e-300);
        if (h <= 0.0) h = opt_.h_min;
      } else {
        h = std::max(opt_.h_min, 0.9 * h * std::pow(scale / err, 0.25));
        if (!std::isfinite(err)) h = std::max(opt_.h_min, 0.1 * h);
      }
      if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
        throw numerical_error("ode: state became non-finite at x = " + std::to_string(x));
      }
    }
    return y;
  }

  State2 integrate(double x0, double x1, State2 y) {
    return integrate(x0, x1, y, [](double, const State2&) {});
  }

 private:
  static double norm(const State2& y) { return std::max(std::abs(y[0]), std::abs(y[1])); }

  double attempt(double x, const State2& y, double h, State2& out) {
    // Cash-Karp tableau
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    static constexpr double b21 = 0.2;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
    static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
    static constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                            d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                            d6 = c6 - 0.25;

    State2 k1, k2, k3, k4, k5, k6, t;
    f_(x, y, k1);
    for (int i = 0; i < 2; ++i) t[i] = y[i] + h * b21 * k1[i];
    f_(x + a2 * h, t, k2);
    for (int i = 0; i < 2; ++i) t[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
    f_(x + a3 * h, t, k3);
    for (int i = 0; i < 2; ++i) t[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    f_(x + a4 * h, t, k4);
    for (int i = 0; i < 2; ++i)
      t[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    f_(x + a5 * h, t, k5);
    for (int i = 0; i < 2; ++i)
      t[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] + b64 * k4[i] + b65 * k5[i]);
    f_(x + a6 * h, t, k6);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      out[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
      const double e = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
      err = std::max(err, std::abs(e));
    }
    return err;
  }

  F f_;
  Options opt_;
};

template <typename F>
Rk45<F> make_rk45(F f, Options opt = {}) {
  return Rk45<F>(std::move(f), opt);
}

} // namespace blowuplab::ode
