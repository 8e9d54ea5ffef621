#include <doctest.h>

#include <cmath>

#include "blowuplab/grid.hpp"
#include "blowuplab/ode.hpp"

using namespace blowuplab;

TEST_CASE("simpson weights integrate smooth functions to high order") {
  const Grid1D g = uniform_grid(0.0, M_PI / 2.0, 513);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += std::sin(g.node[i]) * g.weight[i];
  CHECK(std::abs(s - 1.0) <= 1e-10);
}

TEST_CASE("log grid integrates power laws with a Gaussian tail") {
  const Grid1D g = log_grid(1e-8, 20.0, 801);
  // int_0^inf r^{3.4} e^{-r^2/4} dr = 0.5 * 2^{4.4} Gamma(2.2)
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += std::pow(g.node[i], 3.4) * std::exp(-0.25 * g.node[i] * g.node[i]) * g.weight[i];
  const double want = 0.5 * std::pow(2.0, 4.4) * std::tgamma(2.2);
  CHECK(std::abs(s - want) / want <= 1e-10);
}

TEST_CASE("sphere surface anchors") {
  CHECK(std::abs(sphere_surface(1) - 2.0 * M_PI) <= 1e-12);
  CHECK(std::abs(sphere_surface(2) - 4.0 * M_PI) <= 1e-11);
}

TEST_CASE("inner_rho requires a shared grid") {
  auto g1 = make_grid(6, 1e-4, 10.0, 65, 33);
  auto g2 = make_grid(6, 1e-4, 10.0, 65, 33);
  AxialField a(g1), b(g2);
  CHECK_THROWS(inner_rho(a, b));
}

TEST_CASE("inner_rho reproduces a separable Gaussian integral") {
  const int n = 6;
  auto g = make_grid(n, 1e-7, 18.0, 513, 129);
  auto f = sample_field(g, [](double, double) { return 1.0; });
  // int_{R^n_+} rho dy = (4 pi)^{n/2} / 2
  const double want = 0.5 * std::pow(4.0 * M_PI, n / 2.0);
  CHECK(std::abs(inner_rho(f, f) - want) / want <= 1e-8);
}

TEST_CASE("hermite curve reproduces a smooth function and derivative") {
  HermiteCurve c;
  const std::size_t n = 200;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1) * 3.0;
    c.x.push_back(x);
    c.y.push_back(std::sin(2.0 * x));
    c.dy.push_back(2.0 * std::cos(2.0 * x));
  }
  for (double x : {0.013, 0.5, 1.7231, 2.9}) {
    CHECK(std::abs(c.value(x) - std::sin(2.0 * x)) <= 1e-8);
    CHECK(std::abs(c.deriv(x) - 2.0 * std::cos(2.0 * x)) <= 1e-6);
  }
}

TEST_CASE("rk45 integrates a stiffish linear oscillator accurately") {
  auto rhs = [](double, const ode::State2& y, ode::State2& dy) {
    dy[0] = y[1];
    dy[1] = -25.0 * y[0];
  };
  auto solver = ode::make_rk45(rhs);
  const auto y = solver.integrate(0.0, 2.0, {1.0, 0.0});
  CHECK(std::abs(y[0] - std::cos(5.0 * 2.0)) <= 1e-9);
  CHECK(std::abs(y[1] + 5.0 * std::sin(5.0 * 2.0)) <= 5e-9);
}
