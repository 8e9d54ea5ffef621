#include "blowuplab/angular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "blowuplab/errors.hpp"
#include "blowuplab/ode.hpp"
#include "blowuplab/specfun.hpp"

namespace blowuplab {

namespace {

constexpr double kPoleStart = 1e-4; // integration starts here with a series corrector

// Quartic Taylor start for u'' + (n-2) cot(th) u' + lam u = 0 with u(0) = 1,
// u'(0) = 0 (regular solution at the pole). Returns (u, u') at theta.
ode::State2 pole_series(int n, double lam, double theta) {
  const double a = -lam / (2.0 * (n - 1.0));
  const double b = a * (2.0 * (n - 2.0) / 3.0 - lam) / (4.0 * (n + 1.0));
  const double t2 = theta * theta;
  return {1.0 + t2 * (a + b * t2), theta * (2.0 * a + 4.0 * b * t2)};
}

struct ShotResult {
  double value = 0.0; // u(pi/2), possibly rescaled by a positive factor
  double deriv = 0.0; // u'(pi/2), same factor
  int sign_changes = 0;
  double scale_log = 0.0; // log of the accumulated rescale factor
};

// One shot of the angular ODE from the pole to pi/2. `lam` multiplies u
// (for the eigenproblem lam = kappa; for the profile lam = -m(n-2-m)).
// The state is renormalized when it grows huge; only signs and ratios of
// the endpoint data survive, which is all the shooting logic needs.
ShotResult shoot_angular(int n, double lam, const ode::Options& opt = {}) {
  auto rhs = [n, lam](double th, const ode::State2& y, ode::State2& dy) {
    dy[0] = y[1];
    dy[1] = -(n - 2.0) * (std::cos(th) / std::sin(th)) * y[1] - lam * y[0];
  };
  auto solver = ode::make_rk45(rhs, opt);

  ShotResult res;
  ode::State2 y = pole_series(n, lam, kPoleStart);
  double prev_sign = (y[0] > 0.0) ? 1.0 : -1.0;
  const int segments = 32;
  const double h = (M_PI / 2.0 - kPoleStart) / segments;
  for (int s = 0; s < segments; ++s) {
    const double x0 = kPoleStart + s * h;
    const double x1 = (s + 1 == segments) ? M_PI / 2.0 : x0 + h;
    y = solver.integrate(x0, x1, y, [&](double, const ode::State2& yy) {
      if (yy[0] != 0.0) {
        const double sgn = (yy[0] > 0.0) ? 1.0 : -1.0;
        if (sgn != prev_sign) {
          ++res.sign_changes;
          prev_sign = sgn;
        }
      }
    });
    const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
    if (mag > 1e120) {
      y[0] /= mag;
      y[1] /= mag;
      res.scale_log += std::log(mag);
    }
  }
  res.value = y[0];
  res.deriv = y[1];
  return res;
}

// Integrates the angular ODE once more, recording value and derivative on a
// uniform grid (node 0 at the pole is filled from the series limit).
void sample_angular(int n, double lam, double u0_scale, std::size_t nodes,
                    HermiteCurve& out) {
  out.x.resize(nodes);
  out.y.resize(nodes);
  out.dy.resize(nodes);
  const double h = (M_PI / 2.0) / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) out.x[i] = h * static_cast<double>(i);
  out.x.back() = M_PI / 2.0;

  out.y[0] = u0_scale;
  out.dy[0] = 0.0;

  auto rhs = [n, lam](double th, const ode::State2& y, ode::State2& dy) {
    dy[0] = y[1];
    dy[1] = -(n - 2.0) * (std::cos(th) / std::sin(th)) * y[1] - lam * y[0];
  };
  auto solver = ode::make_rk45(rhs);

  ode::State2 y = pole_series(n, lam, kPoleStart);
  y[0] *= u0_scale;
  y[1] *= u0_scale;
  double x = kPoleStart;
  for (std::size_t i = 1; i < nodes; ++i) {
    const double target = out.x[i];
    if (target <= x) {
      // nodes inside the series region
      const ode::State2 s = pole_series(n, lam, target);
      out.y[i] = u0_scale * s[0];
      out.dy[i] = u0_scale * s[1];
      continue;
    }
    y = solver.integrate(x, target, y);
    x = target;
    out.y[i] = y[0];
    out.dy[i] = y[1];
  }
}

// Plain bisection for a sign change of f on [a, b]; f(a) and f(b) must have
// opposite signs. Tolerance is on the argument.
template <typename F>
double bisect(F&& f, double a, double b, double fa, double tol_abs, int max_iter = 200) {
  double fb = 0.0;
  (void)fb;
  for (int it = 0; it < max_iter && (b - a) > tol_abs; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fa > 0.0) == (fm > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double eig_mismatch(int n, double K, double kappa) {
  const ShotResult s = shoot_angular(n, kappa);
  return s.deriv - K * s.value;
}

} // namespace

Problem::Problem(int n_, double q_) : n(n_), q(q_) {
  if (n < 3) throw std::domain_error("Problem: dimension n must be >= 3");
  if (!(q > 1.0)) throw std::domain_error("Problem: exponent q must exceed 1");
}

double trace_hardy_constant(int n) {
  if (n < 3) throw std::domain_error("trace_hardy_constant: n must be >= 3");
  const double g1 = specfun::gamma(n / 4.0);
  const double g2 = specfun::gamma((n - 2.0) / 4.0);
  return 2.0 * (g1 / g2) * (g1 / g2);
}

double profile_mismatch(const Problem& p, double v0) {
  // interior equation is linear in V, so one unit shot is rescaled
  const double mu = p.m() * (p.n - 2.0 - p.m());
  const ShotResult s = shoot_angular(p.n, -mu);
  const double scale = std::exp(s.scale_log);
  const double val = v0 * s.value * scale;
  const double der = v0 * s.deriv * scale;
  return der - std::pow(val, p.q);
}

AngularProfile solve_profile_v(const Problem& p, std::size_t nodes) {
  if (!(p.q > p.q_profile_min())) {
    throw std::domain_error("solve_profile_v: requires q > (n-1)/(n-2)");
  }
  const double mu = p.m() * (p.n - 2.0 - p.m());
  const ShotResult unit = shoot_angular(p.n, -mu);
  const double scale = std::exp(unit.scale_log);
  const double cd = unit.deriv * scale; // V'(pi/2) for V(0) = 1
  const double cv = unit.value * scale; // V(pi/2)  for V(0) = 1
  if (!(cv > 0.0)) {
    throw numerical_error("solve_profile_v: unit shot is not positive at the boundary");
  }

  auto mismatch = [&](double v0) { return v0 * cd - std::pow(v0 * cv, p.q); };

  // geometric sweep, then bisection on the first sign change
  const int sweep = 200;
  const double lo = 1e-4, hi = 1e4;
  double a = lo, fa = mismatch(lo);
  double b = 0.0, fb = 0.0;
  bool found = false;
  for (int k = 1; k < sweep; ++k) {
    const double v = lo * std::pow(hi / lo, static_cast<double>(k) / (sweep - 1));
    const double fv = mismatch(v);
    if ((fa > 0.0) != (fv > 0.0)) {
      b = v;
      fb = fv;
      found = true;
      break;
    }
    a = v;
    fa = fv;
  }
  (void)fb;
  if (!found) {
    throw numerical_error("solve_profile_v: no sign change of the boundary mismatch on the "
                          "bracket [1e-4, 1e4]; parameter regime outside existence range?");
  }
  const double v0 = bisect(mismatch, a, b, fa, 1e-14 * std::max(1.0, b));

  AngularProfile out;
  sample_angular(p.n, -mu, v0, nodes, out.v);
  out.v0 = v0;
  out.K = p.q * std::pow(out.v.y.back(), p.q - 1.0);
  for (double val : out.v.y) {
    if (!(val > 0.0)) throw numerical_error("solve_profile_v: profile lost positivity");
  }
  return out;
}

std::vector<AngularEigenpair> solve_angular_eigs(double K, int n, int count,
                                                 std::size_t nodes) {
  if (count < 1) throw std::invalid_argument("solve_angular_eigs: count must be >= 1");
  if (n < 3) throw std::domain_error("solve_angular_eigs: n must be >= 3");
  if (nodes < 3 || nodes % 2 == 0) {
    throw std::invalid_argument("solve_angular_eigs: nodes must be odd and >= 3");
  }
  // Resolution guard: a mode with kappa ~ (2 count)^2 needs several nodes
  // per oscillation on the recording grid.
  const double kappa_guess = 4.0 * count * (count + n);
  if (std::sqrt(kappa_guess) * M_PI / 2.0 > 0.25 * static_cast<double>(nodes)) {
    throw numerical_error("solve_angular_eigs: grid too coarse for requested mode count");
  }

  // Walk kappa downward until certifiably below the ground eigenvalue:
  // no interior sign change, positive endpoint and logarithmic slope above K.
  double kappa_lo = -std::max({(n - 2.0) * (n - 2.0), 4.0 * K * K, 16.0});
  for (int tries = 0;; ++tries) {
    const ShotResult s = shoot_angular(n, kappa_lo);
    if (s.sign_changes == 0 && s.value > 0.0 && s.deriv > K * s.value) break;
    if (tries > 60) throw numerical_error("solve_angular_eigs: failed to bracket ground mode");
    kappa_lo *= 2.0;
  }

  std::vector<double> kappas;
  double a = kappa_lo, fa = eig_mismatch(n, K, a);
  const double step = 1.0;
  double b = a;
  while (static_cast<int>(kappas.size()) < count) {
    b += step;
    const double fb = eig_mismatch(n, K, b);
    if ((fa > 0.0) != (fb > 0.0)) {
      auto f = [&](double k) { return eig_mismatch(n, K, k); };
      // |dkappa| <= 1e-10 max(1, |kappa|) refinement contract
      const double tol = 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
      kappas.push_back(bisect(f, a, b, fa, tol));
    }
    a = b;
    fa = fb;
    if (b > kappa_guess * 4.0 + 100.0) {
      throw numerical_error("solve_angular_eigs: eigenvalue scan ran past its budget");
    }
  }

  std::vector<AngularEigenpair> out;
  out.reserve(kappas.size());
  const double sphere = sphere_surface(n - 2);
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    AngularEigenpair pair;
    pair.index = static_cast<int>(i) + 1;
    pair.kappa = kappas[i];
    sample_angular(n, kappas[i], 1.0, nodes, pair.e);

    // normalize over the half-sphere measure and fix the boundary sign
    const Grid1D g = uniform_grid(0.0, M_PI / 2.0, nodes);
    double nrm2 = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
      const double s = std::pow(std::sin(g.node[k]), n - 2);
      nrm2 += pair.e.y[k] * pair.e.y[k] * s * g.weight[k];
    }
    nrm2 *= sphere;
    double fac = 1.0 / std::sqrt(nrm2);
    if (pair.e.y.back() < 0.0) fac = -fac;
    for (std::size_t k = 0; k < nodes; ++k) {
      pair.e.y[k] *= fac;
      pair.e.dy[k] *= fac;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

const char* to_string(JlClass c) {
  switch (c) {
    case JlClass::Subcritical: return "Subcritical";
    case JlClass::Critical: return "Critical";
    case JlClass::Supercritical: return "Supercritical";
  }
  return "?";
}

JlClass classify_jl(double K, double c_h, double tol_rel) {
  if (!(K > 0.0) || !(c_h > 0.0)) {
    throw std::domain_error("classify_jl: K and c_H must be positive");
  }
  if (std::abs(K - c_h) <= tol_rel * c_h) return JlClass::Critical;
  return (K < c_h) ? JlClass::Supercritical : JlClass::Subcritical;
}

double mu1(double kappa1, const Problem& p) {
  const double m = p.m();
  const double beta = p.n - 2.0 - 2.0 * m;
  const double disc = beta * beta + 4.0 * (m * (p.n - 2.0 - m) + kappa1);
  if (disc < 0.0) {
    throw numerical_error("mu1: negative discriminant; (n, q) is not JL-supercritical");
  }
  return 0.5 * (beta - std::sqrt(disc));
}

std::vector<ScanCell> jl_scan(int n_lo, int n_hi, double q_lo, double q_hi,
                              std::size_t steps_n, std::size_t steps_q, int threads) {
  if (steps_n < 1 || steps_q < 1) throw std::invalid_argument("jl_scan: steps must be >= 1");
  std::vector<int> ns;
  for (std::size_t i = 0; i < steps_n; ++i) {
    const double t = steps_n == 1 ? 0.0 : static_cast<double>(i) / (steps_n - 1);
    const int n = static_cast<int>(std::lround(n_lo + t * (n_hi - n_lo)));
    if (ns.empty() || ns.back() != n) ns.push_back(n);
  }
  std::vector<double> qs;
  for (std::size_t i = 0; i < steps_q; ++i) {
    const double t = steps_q == 1 ? 0.0 : static_cast<double>(i) / (steps_q - 1);
    qs.push_back(q_lo + t * (q_hi - q_lo));
  }

  std::vector<ScanCell> cells(ns.size() * qs.size());
  auto work = [&](std::size_t idx) {
    ScanCell& c = cells[idx];
    c.n = ns[idx / qs.size()];
    c.q = qs[idx % qs.size()];
    c.mu1 = std::nan("");
    c.gamma = std::nan("");
    try {
      const Problem p(c.n, c.q);
      if (!(c.q > p.q_profile_min())) {
        throw std::domain_error("q below the profile existence threshold (n-1)/(n-2)");
      }
      const AngularProfile prof = solve_profile_v(p, 1025);
      c.K = prof.K;
      c.c_h = trace_hardy_constant(c.n);
      c.cls = classify_jl(c.K, c.c_h);
      const auto eigs = solve_angular_eigs(c.K, c.n, 1, 1025);
      c.kappa1 = eigs[0].kappa;
      if (c.cls == JlClass::Supercritical) {
        c.mu1 = mu1(c.kappa1, p);
        c.gamma = p.m() + c.mu1;
      }
      c.ok = true;
    } catch (const std::exception& e) {
      c.ok = false;
      c.error = e.what();
    }
  };

  const std::size_t total = cells.size();
  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < total; i += nthreads) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return cells;
}

std::string scan_to_csv(const std::vector<ScanCell>& cells) {
  std::string out = "n,q,K,cH,class,kappa1,mu1,gamma\n";
  char buf[512];
  for (const auto& c : cells) {
    if (!c.ok) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,nan,nan,Failed,nan,nan,nan\n", c.n, c.q);
      out += buf;
      continue;
    }
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", c.n, c.q,
                  c.K, c.c_h, to_string(c.cls), c.kappa1, c.mu1, c.gamma);
    out += buf;
  }
  return out;
}

} // namespace blowuplab
