#include "blowuplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "blowuplab/errors.hpp"
#include "blowuplab/specfun.hpp"

namespace blowuplab {

std::vector<RadialExponent> radial_exponents(const std::vector<double>& kappas, int n) {
  if (kappas.empty()) throw std::invalid_argument("radial_exponents: empty kappa list");
  std::vector<RadialExponent> out;
  out.reserve(kappas.size());
  const double nm2 = n - 2.0;
  for (std::size_t idx = 0; idx < kappas.size(); ++idx) {
    const double kappa = kappas[idx];
    RadialExponent e;
    e.i = static_cast<int>(idx) + 1;
    if (idx == 0) {
      if (!(kappa < 0.0)) {
        throw std::domain_error("radial_exponents: kappa_1 must be negative");
      }
      const double disc = nm2 * nm2 + 4.0 * kappa;
      if (disc <= 0.0) {
        throw numerical_error(
            "radial_exponents: kappa_1 <= -(n-2)^2/4, no root in (0, (n-2)/2) "
            "(JL-subcritical/critical regime)");
      }
      e.value = 0.5 * (nm2 - std::sqrt(disc)); // small root, in (0, (n-2)/2)
    } else {
      if (!(kappa > 0.0)) {
        throw std::domain_error("radial_exponents: kappa_i must be positive for i >= 2");
      }
      e.value = 0.5 * (-nm2 + std::sqrt(nm2 * nm2 + 4.0 * kappa));
    }
    out.push_back(e);
  }
  return out;
}

double eigenvalue(int i, int j, const std::vector<RadialExponent>& exps, const Problem& p) {
  if (i < 1 || j < 1) throw std::invalid_argument("eigenvalue: indices are 1-based");
  if (static_cast<std::size_t>(i) > exps.size()) {
    throw std::invalid_argument("eigenvalue: angular index beyond available exponents");
  }
  const double g = exps[i - 1].value;
  const double base = (i == 1) ? -0.5 * g : 0.5 * g;
  return base + 0.5 * p.m() + (j - 1);
}

double EigenMode::radial(double r) const {
  if (!(r > 0.0)) throw std::domain_error("EigenMode::radial: r must be positive");
  const double z = 0.25 * r * r;
  return norm_const * std::pow(r, beta) *
         specfun::kummer_m(static_cast<double>(-poly_degree), kummer_b, z);
}

double EigenMode::radial_deriv(double r) const {
  if (!(r > 0.0)) throw std::domain_error("EigenMode::radial_deriv: r must be positive");
  const double z = 0.25 * r * r;
  const double m = specfun::kummer_m(static_cast<double>(-poly_degree), kummer_b, z);
  const double mdz = specfun::kummer_m_dz(static_cast<double>(-poly_degree), kummer_b, z);
  return norm_const * (beta * std::pow(r, beta - 1.0) * m +
                       std::pow(r, beta) * mdz * 0.5 * r);
}

const EigenMode& EigenSystem::mode(int i, int j) const {
  for (const auto& m : modes) {
    if (m.i == i && m.j == j) return m;
  }
  throw std::invalid_argument("EigenSystem::mode: (" + std::to_string(i) + "," +
                              std::to_string(j) + ") not in the inventory");
}

const AngularEigenpair& EigenSystem::eigenpair(int i) const {
  if (i < 1 || static_cast<std::size_t>(i) > angular.size()) {
    throw std::invalid_argument("EigenSystem::eigenpair: index out of range");
  }
  return angular[i - 1];
}

double EigenSystem::phi(int i, int j, double r, double theta) const {
  return eigenpair(i).value(theta) * mode(i, j).radial(r);
}

double EigenSystem::eta(int i, int j, double r, double theta) const {
  const EigenMode& m = mode(i, j);
  const double gamma = gamma_;
  const double z = 0.25 * r * r;
  const double kum = specfun::kummer_m(static_cast<double>(-m.poly_degree), m.kummer_b, z);
  const double angular_ratio = eigenpair(i).value(theta) / eigenpair(1).value(theta);
  // beta + gamma = 0 for i = 1: the singular powers cancel exactly
  return angular_ratio * m.norm_const * std::pow(r, m.beta + gamma) * kum;
}

namespace {

EigenMode make_mode(int i, int j, const RadialExponent& exp_entry, int n, double lambda) {
  EigenMode m;
  m.i = i;
  m.j = j;
  m.lambda = lambda;
  m.exponent = exp_entry;
  m.beta = (i == 1) ? -exp_entry.value : exp_entry.value;
  m.poly_degree = j - 1;
  m.kummer_b = m.beta + 0.5 * n;
  if (!(m.kummer_b > 0.0)) {
    throw numerical_error("make_mode: Kummer parameter b must be positive");
  }
  // int_0^inf a^2 e^{-r^2/4} r^{n-1} dr reduces to the Laguerre weight
  // integral; in log form to dodge overflow:
  //   ||a||^2 = 2^{2 beta + n - 1} p! Gamma(b)^2 / Gamma(p + b) * A^2
  const double p = m.poly_degree;
  const double b = m.kummer_b;
  const double log_norm2 = (2.0 * m.beta + n - 1.0) * std::log(2.0) +
                           specfun::log_gamma(p + 1.0) + 2.0 * specfun::log_gamma(b) -
                           specfun::log_gamma(p + b);
  m.norm_const = std::exp(-0.5 * log_norm2);
  m.c_small = m.norm_const;
  const double sign = (m.poly_degree % 2 == 0) ? 1.0 : -1.0;
  const double log_tail = -p * std::log(4.0) -
                          (specfun::log_gamma(b + p) - specfun::log_gamma(b));
  m.c_large = m.norm_const * sign * std::exp(log_tail);
  return m;
}

} // namespace

EigenSystem build_eigensystem(const Problem& p, const AngularProfile& prof,
                              double lambda_cap, int max_angular, std::size_t nodes) {
  EigenSystem sys(p);
  sys.angular = solve_angular_eigs(prof.K, p.n, max_angular, nodes);
  std::vector<double> kappas;
  for (const auto& e : sys.angular) kappas.push_back(e.kappa);
  sys.exponents = radial_exponents(kappas, p.n);
  sys.gamma_ = sys.exponents[0].value;

  for (int i = 1; i <= max_angular; ++i) {
    for (int j = 1;; ++j) {
      const double lam = eigenvalue(i, j, sys.exponents, p);
      if (lam > lambda_cap && j > 1) break;
      if (lam > lambda_cap && j == 1) break; // ladder starts above the cap
      sys.modes.push_back(make_mode(i, j, sys.exponents[i - 1], p.n, lam));
    }
  }
  std::sort(sys.modes.begin(), sys.modes.end(), [](const EigenMode& a, const EigenMode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return sys;
}

std::string eigs_to_csv(const EigenSystem& sys) {
  std::string out = "i,j,kappa_i,exponent,lambda_ij,A_ij,c_small,c_large\n";
  char buf[512];
  for (const auto& m : sys.modes) {
    const double kappa = sys.angular[m.i - 1].kappa;
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", m.i, m.j,
                  kappa, m.exponent.value, m.lambda, m.norm_const, m.c_small, m.c_large);
    out += buf;
  }
  return out;
}

AxialField sample_phi(const EigenSystem& sys, int i, int j,
                      std::shared_ptr<const Grid2D> grid) {
  const EigenMode& m = sys.mode(i, j);
  const AngularEigenpair& e = sys.eigenpair(i);
  return sample_field(std::move(grid), [&](double r, double th) {
    return e.value(th) * m.radial(r);
  });
}

WeightContext make_weight_context(const EigenSystem& sys) {
  WeightContext ctx;
  ctx.n = sys.p.n;
  ctx.gamma = sys.gamma();
  ctx.e1 = sys.eigenpair(1).e;
  return ctx;
}

double inner_c_boundary(const AxialField& f, const AxialField& g, const WeightContext& ctx) {
  if (f.grid != g.grid) throw std::invalid_argument("inner_c_boundary: grid mismatch");
  const Grid2D& gr = *f.grid;
  const std::size_t jb = gr.ntheta() - 1;
  double total = 0.0;
  for (std::size_t i = 0; i < gr.nr(); ++i) {
    const double r = gr.r.node[i];
    total += f.at(i, jb) * g.at(i, jb) * ctx.C(r, M_PI / 2.0) *
             std::pow(r, gr.dim - 2) * gr.r.weight[i];
  }
  return total * gr.sphere_factor;
}

namespace {

// Smooth random trial field with closed-form partial derivatives:
// sum of radial Gaussian bumps times low cosine polynomials in theta.
struct TrialField {
  struct Term {
    double c, a, r0, alpha, beta;
  };
  std::vector<Term> terms;

  double value(double r, double th) const {
    double s = 0.0;
    for (const auto& t : terms) {
      s += t.c * std::exp(-t.a * (r - t.r0) * (r - t.r0)) *
           (1.0 + t.alpha * std::cos(th) + t.beta * std::cos(2.0 * th));
    }
    return s;
  }
  double dr(double r, double th) const {
    double s = 0.0;
    for (const auto& t : terms) {
      s += t.c * (-2.0 * t.a * (r - t.r0)) * std::exp(-t.a * (r - t.r0) * (r - t.r0)) *
           (1.0 + t.alpha * std::cos(th) + t.beta * std::cos(2.0 * th));
    }
    return s;
  }
  double dth(double r, double th) const {
    double s = 0.0;
    for (const auto& t : terms) {
      s += t.c * std::exp(-t.a * (r - t.r0) * (r - t.r0)) *
           (-t.alpha * std::sin(th) - 2.0 * t.beta * std::sin(2.0 * th));
    }
    return s;
  }
};

struct FormParts {
  double grad2 = 0.0; // ||grad Phi||_rho^2
  double l2 = 0.0;    // ||Phi||_rho^2
  double bdry = 0.0;  // int_bdry r^{-1} Phi^2 rho
};

template <typename Val, typename Dr, typename Dth>
FormParts quadratic_form_parts(const Grid2D& g, Val&& val, Dr&& dr, Dth&& dth) {
  const int n = g.dim;
  FormParts out;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    const double r = g.r.node[i];
    const double radial = std::pow(r, n - 1) * std::exp(-0.25 * r * r) * g.r.weight[i];
    double row_g = 0.0, row_l = 0.0;
    for (std::size_t j = 0; j < g.ntheta(); ++j) {
      const double th = g.theta.node[j];
      const double s = std::pow(std::sin(th), n - 2) * g.theta.weight[j];
      const double v = val(r, th);
      const double gr2 = dr(r, th) * dr(r, th) + dth(r, th) * dth(r, th) / (r * r);
      row_g += gr2 * s;
      row_l += v * v * s;
    }
    out.grad2 += radial * row_g;
    out.l2 += radial * row_l;
    const double vb = val(r, M_PI / 2.0);
    out.bdry += vb * vb * std::exp(-0.25 * r * r) * std::pow(r, n - 2) / r * g.r.weight[i];
  }
  out.grad2 *= g.sphere_factor;
  out.l2 *= g.sphere_factor;
  out.bdry *= g.sphere_factor;
  return out;
}

} // namespace

CoercivityReport coercivity_check(const Problem& p, const AngularProfile& prof,
                                  const EigenSystem& sys, int trial_count, double mu,
                                  unsigned seed, std::shared_ptr<const Grid2D> grid) {
  if (trial_count < 1) throw std::invalid_argument("coercivity_check: trial_count must be >= 1");
  if (!grid) grid = make_grid(p.n, 1e-6, 14.0, 513, 129);
  const double K = prof.K;
  const double m = p.m();

  CoercivityReport rep;
  rep.mu = mu;
  rep.trials = trial_count;

  // eigenfunction identity: the form at phi_11 equals lambda_11 + mu
  {
    const EigenMode& md = sys.mode(1, 1);
    const AngularEigenpair& e1 = sys.eigenpair(1);
    auto val = [&](double r, double th) { return e1.value(th) * md.radial(r); };
    auto dr = [&](double r, double th) { return e1.value(th) * md.radial_deriv(r); };
    auto dth = [&](double r, double th) { return e1.deriv(th) * md.radial(r); };
    const FormParts fp = quadratic_form_parts(*grid, val, dr, dth);
    rep.eig_form_value =
        (fp.grad2 + (0.5 * m + mu) * fp.l2 - K * fp.bdry) / fp.l2;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  std::uniform_real_distribution<double> ua(0.05, 1.5);
  std::uniform_real_distribution<double> ur(0.0, 6.0);

  double min_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trial_count; ++t) {
    TrialField f;
    const int nterm = 2 + static_cast<int>(rng() % 3);
    for (int k = 0; k < nterm; ++k) {
      f.terms.push_back({uc(rng), ua(rng), ur(rng), uc(rng), uc(rng)});
    }
    auto val = [&](double r, double th) { return f.value(r, th); };
    auto dr = [&](double r, double th) { return f.dr(r, th); };
    auto dth = [&](double r, double th) { return f.dth(r, th); };
    const FormParts fp = quadratic_form_parts(*grid, val, dr, dth);
    if (fp.l2 <= 0.0) continue;
    const double q = fp.grad2 + (0.5 * m + mu) * fp.l2 - K * fp.bdry;
    min_ratio = std::min(min_ratio, q / (fp.grad2 + fp.l2));
  }
  rep.min_ratio = min_ratio;
  rep.pass = (min_ratio > 0.0);
  return rep;
}

} // namespace blowuplab
