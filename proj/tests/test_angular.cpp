#include <doctest.h>

#include <cmath>

#include "blowuplab/angular.hpp"
#include "blowuplab/errors.hpp"
#include "blowuplab/specfun.hpp"
#include "test_util.hpp"

using namespace blowuplab;

TEST_CASE("trace Hardy constant closed forms") {
  CHECK(std::abs(trace_hardy_constant(6) - M_PI / 2.0) <= 1e-12);
  CHECK(std::abs(trace_hardy_constant(4) - 2.0 / M_PI) <= 1e-12);
  const double g34 = specfun::gamma(0.75), g14 = specfun::gamma(0.25);
  CHECK(std::abs(trace_hardy_constant(3) - 2.0 * g34 * g34 / (g14 * g14)) <= 1e-13);
  CHECK_THROWS_AS(trace_hardy_constant(2), std::domain_error);
}

TEST_CASE("profile solve at (16,10): residuals and independent collocation oracle") {
  const Problem p(16, 10.0);
  const AngularProfile prof = solve_profile_v(p, 2049);
  const double mu = p.m() * (p.n - 2.0 - p.m());

  // interior ODE residual on the 2048-interval reference grid
  const double res = testutil::fd4_max_residual(
      prof.v.x, prof.v.y,
      [&](double th) { return (p.n - 2.0) * std::cos(th) / std::sin(th); },
      [&](double) { return -mu; });
  CHECK(res <= 1e-6);

  // boundary flux residual
  const double vb = prof.v.y.back();
  CHECK(std::abs(prof.v.dy.back() - std::pow(vb, p.q)) <= 1e-8 * std::max(1.0, vb));
  CHECK(prof.K == doctest::Approx(p.q * std::pow(vb, p.q - 1.0)));

  // Richardson-extrapolated collocation re-solve as an independent oracle
  const std::size_t nodes = 2049;
  std::vector<double> init_c(nodes), init_f(2 * nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) init_c[i] = prof.v.y[i];
  for (std::size_t i = 0; i < init_f.size(); ++i) {
    const double th = (M_PI / 2.0) * static_cast<double>(i) / (init_f.size() - 1);
    init_f[i] = prof.value(th);
  }
  const auto uc = testutil::profile_collocation(p.n, p.q, mu, nodes, init_c);
  const auto uf = testutil::profile_collocation(p.n, p.q, mu, 2 * nodes - 1, init_f);
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double extrap = (4.0 * uf[2 * i] - uc[i]) / 3.0;
    worst = std::max(worst, std::abs(prof.v.y[i] - extrap));
  }
  CHECK(worst <= 1e-8 * std::max(1.0, prof.v0));
}

TEST_CASE("profile mismatch has exactly one sign change on the bracket") {
  const Problem p(16, 10.0);
  int changes = 0;
  double prev = profile_mismatch(p, 1e-4);
  for (int k = 1; k < 200; ++k) {
    const double v0 = 1e-4 * std::pow(1e8, k / 199.0);
    const double f = profile_mismatch(p, v0);
    if ((prev > 0.0) != (f > 0.0)) ++changes;
    prev = f;
  }
  CHECK(changes == 1);
}

TEST_CASE("profile precondition boundary is rejected") {
  const Problem p(16, 10.0);
  (void)p;
  const double q_edge = (16.0 - 1.0) / (16.0 - 2.0);
  CHECK_THROWS_AS(solve_profile_v(Problem(16, q_edge)), std::domain_error);
}

TEST_CASE("Neumann limit: K = 0 gives kappa_1 = 0 with constant mode") {
  const auto eigs = solve_angular_eigs(0.0, 8, 2, 1025);
  CHECK(std::abs(eigs[0].kappa) <= 1e-9);
  double spread = 0.0;
  for (std::size_t k = 0; k < eigs[0].e.y.size(); ++k) {
    spread = std::max(spread, std::abs(eigs[0].e.y[k] - eigs[0].e.y[0]));
  }
  CHECK(spread <= 1e-7 * std::abs(eigs[0].e.y[0]));
  CHECK(eigs[1].kappa > 1.0);
}

TEST_CASE("K = c_H reproduces the critical eigenvalue -(n-2)^2/4") {
  for (int n : {6, 10, 16}) {
    const double ch = trace_hardy_constant(n);
    const auto eigs = solve_angular_eigs(ch, n, 1, 2049);
    const double want = -0.25 * (n - 2.0) * (n - 2.0);
    CHECK(std::abs(eigs[0].kappa - want) <= 1e-6 * std::abs(want));
  }
}

TEST_CASE("supercritical point (16,10): kappa_1 above the critical floor, kappa_2 positive") {
  const Problem p(16, 10.0);
  const AngularProfile prof = solve_profile_v(p, 1025);
  CHECK(classify_jl(prof.K, trace_hardy_constant(16)) == JlClass::Supercritical);
  const auto eigs = solve_angular_eigs(prof.K, p.n, 2, 2049);
  CHECK(eigs[0].kappa > -0.25 * (p.n - 2.0) * (p.n - 2.0));
  CHECK(eigs[0].kappa < 0.0);
  CHECK(eigs[1].kappa > 0.0);

  // eigenpair contract checks: Robin residual, normalization, positivity
  const auto& e1 = eigs[0];
  CHECK(std::abs(e1.e.dy.back() - prof.K * e1.e.y.back()) <= 1e-7 * std::abs(e1.e.y.back()));
  const Grid1D g = uniform_grid(0.0, M_PI / 2.0, 2049);
  double nrm = 0.0, cross = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = std::pow(std::sin(g.node[k]), p.n - 2) * g.weight[k];
    nrm += e1.e.y[k] * e1.e.y[k] * w;
    cross += e1.e.y[k] * eigs[1].e.y[k] * w;
  }
  const double sph = sphere_surface(p.n - 2);
  CHECK(std::abs(nrm * sph - 1.0) <= 1e-9);
  CHECK(std::abs(cross * sph) <= 1e-8);
  for (double v : e1.e.y) CHECK(v > 0.0);

  // interior residual of e1 on the reference grid
  const double res = testutil::fd4_max_residual(
      e1.e.x, e1.e.y,
      [&](double th) { return (p.n - 2.0) * std::cos(th) / std::sin(th); },
      [&](double) { return e1.kappa; });
  CHECK(res <= 1e-6);
}

TEST_CASE("finite-difference eigenvalue oracle converges at second order") {
  const Problem p(16, 10.0);
  const AngularProfile prof = solve_profile_v(p, 1025);
  const auto eigs = solve_angular_eigs(prof.K, p.n, 1, 1025);
  const double kappa = eigs[0].kappa;
  const double e1 = std::abs(testutil::fd_robin_eigenvalue(p.n, prof.K, 513, kappa) - kappa);
  const double e2 = std::abs(testutil::fd_robin_eigenvalue(p.n, prof.K, 1025, kappa) - kappa);
  CHECK(e2 <= e1 / 3.0); // O(h^2) halving ratio is 4; leave slack
  CHECK(e2 <= 2e-3);
}

TEST_CASE("classification branches") {
  CHECK(classify_jl(1.0, 2.0) == JlClass::Supercritical);
  CHECK(classify_jl(2.0, 2.0) == JlClass::Critical);
  CHECK(classify_jl(3.0, 2.0) == JlClass::Subcritical);
  CHECK_THROWS_AS(classify_jl(-1.0, 2.0), std::domain_error);
}

TEST_CASE("(3, 3.01) just above the Sobolev exponent is JL-subcritical") {
  const Problem p(3, 3.01);
  const AngularProfile prof = solve_profile_v(p, 1025);
  CHECK(classify_jl(prof.K, trace_hardy_constant(3)) == JlClass::Subcritical);
}

TEST_CASE("mu1 closed-form anchors and failure branch") {
  const Problem p(16, 10.0);
  const double m = p.m();
  // kappa_1 = -m(n-2-m): the constant term vanishes, roots are 0 and n-2-2m
  CHECK(std::abs(mu1(-m * (p.n - 2.0 - m), p)) <= 1e-14);
  // discriminant zero: double root (n-2-2m)/2
  const double kd = -0.25 * (p.n - 2.0 - 2.0 * m) * (p.n - 2.0 - 2.0 * m) - m * (p.n - 2.0 - m);
  CHECK(std::abs(mu1(kd, p) - 0.5 * (p.n - 2.0 - 2.0 * m)) <= 1e-12);
  CHECK_THROWS_AS(mu1(kd - 1.0, p), numerical_error);
}

TEST_CASE("gamma = m + mu1 satisfies the radial quadratic at (16,10)") {
  const Problem p(16, 10.0);
  const AngularProfile prof = solve_profile_v(p, 2049);
  const auto eigs = solve_angular_eigs(prof.K, p.n, 1, 2049);
  const double g = p.m() + mu1(eigs[0].kappa, p);
  CHECK(std::abs(g * g - (p.n - 2.0) * g - eigs[0].kappa) <= 1e-10 * std::max(1.0, std::abs(eigs[0].kappa)));
  CHECK(g > p.m());
  CHECK(g < 0.5 * (p.n - 2.0));
}

TEST_CASE("jl_scan trichotomy and regime structure") {
  const auto cells = jl_scan(12, 20, 4.0, 14.0, 3, 4, 1);
  bool any_super = false;
  for (const auto& c : cells) {
    REQUIRE(c.ok);
    const double floor = -0.25 * (c.n - 2.0) * (c.n - 2.0);
    if (c.cls == JlClass::Supercritical) {
      any_super = true;
      CHECK(c.kappa1 > floor);
      CHECK(c.gamma == doctest::Approx(1.0 / (c.q - 1.0) + c.mu1));
    } else if (c.cls == JlClass::Subcritical) {
      CHECK(c.kappa1 < floor);
    }
  }
  CHECK(any_super);

  // (n=3, q near 3) cells are subcritical; out-of-range q fails per-cell
  const auto low = jl_scan(3, 3, 3.0, 3.2, 1, 3, 1);
  for (const auto& c : low) {
    REQUIRE(c.ok);
    CHECK(c.cls == JlClass::Subcritical);
  }
  const auto bad = jl_scan(3, 3, 1.6, 1.9, 1, 2, 1);
  for (const auto& c : bad) CHECK_FALSE(c.ok);

  const std::string csv = scan_to_csv(cells);
  CHECK(csv.rfind("n,q,K,cH,class,kappa1,mu1,gamma\n", 0) == 0);
}
