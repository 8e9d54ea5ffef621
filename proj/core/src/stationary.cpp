#include "blowuplab/stationary.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "blowuplab/errors.hpp"

namespace blowuplab {

double u_infinity(const Problem& p, const AngularProfile& prof, double r, double theta) {
  if (!(r > 0.0)) {
    throw std::domain_error("u_infinity: the singular solution needs r > 0");
  }
  return prof.value(theta) * std::pow(r, -p.m());
}

namespace {

struct FdWorkspace {
  std::size_t nr, nt;
  std::vector<double> r, th;
  double dth;

  std::size_t idx(std::size_t i, std::size_t j) const { return i * nt + j; }
};

// Residual and Jacobian rows of the discrete problem; see solve_u1 for the
// continuous statement.
void assemble_system(const FdWorkspace& w, const Problem& p, const AngularProfile& prof,
                     double gamma, double alpha, const std::vector<double>& u,
                     Eigen::VectorXd& res, std::vector<Eigen::Triplet<double>>* jac) {
  const int n = p.n;
  const double q = p.q;
  const double m = p.m();
  const std::size_t nr = w.nr, nt = w.nt;
  const double dth = w.dth;
  res.setZero();

  auto push = [&](std::size_t row, std::size_t col, double v) {
    if (jac) jac->emplace_back(row, col, v);
  };

  for (std::size_t i = 0; i < nr; ++i) {
    const double r = w.r[i];
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t row = w.idx(i, j);

      if (i == 0) {
        // origin expansion: U = alpha - alpha^q r cos(theta)
        res[row] = u[row] - (alpha - std::pow(alpha, q) * r * std::cos(w.th[j]));
        push(row, row, 1.0);
        continue;
      }
      if (i == nr - 1) {
        // far-field Robin closure: d_r U + (gamma/R) U = (gamma - m) V R^{-m-1}
        const double rhs = (gamma - m) * prof.value(w.th[j]) * std::pow(r, -m - 1.0);
        const double h1 = w.r[i - 1] - w.r[i - 2], h2 = w.r[i] - w.r[i - 1];
        const double wa = h2 / (h1 * (h1 + h2));
        const double wb = -(h1 + h2) / (h1 * h2);
        const double wc = (h1 + 2.0 * h2) / (h2 * (h1 + h2));
        res[row] = wa * u[w.idx(i - 2, j)] + wb * u[w.idx(i - 1, j)] + wc * u[row] +
                   (gamma / r) * u[row] - rhs;
        push(row, w.idx(i - 2, j), wa);
        push(row, w.idx(i - 1, j), wb);
        push(row, row, wc + gamma / r);
        continue;
      }

      // interior Laplacian, non-uniform in r
      const double h1 = w.r[i] - w.r[i - 1], h2 = w.r[i + 1] - w.r[i];
      const double arr_m = 2.0 / (h1 * (h1 + h2));
      const double arr_p = 2.0 / (h2 * (h1 + h2));
      const double arr_c = -2.0 / (h1 * h2);
      const double ar_m = -h2 / (h1 * (h1 + h2));
      const double ar_p = h1 / (h2 * (h1 + h2));
      const double ar_c = (h2 - h1) / (h1 * h2);
      const double cr = (n - 1.0) / r;

      double cm = arr_m + cr * ar_m;
      double cp = arr_p + cr * ar_p;
      double cc = arr_c + cr * ar_c;

      res[row] += cm * u[w.idx(i - 1, j)] + cc * u[row] + cp * u[w.idx(i + 1, j)];
      push(row, w.idx(i - 1, j), cm);
      push(row, w.idx(i + 1, j), cp);

      // angular part (1/r^2)(u_tt + (n-2) cot u_t) with pole/boundary rows
      const double ir2 = 1.0 / (r * r);
      if (j == 0) {
        // pole: Delta_S -> (n-1) u_tt with symmetric ghost
        const double c1 = ir2 * (n - 1.0) * 2.0 / (dth * dth);
        res[row] += c1 * (u[w.idx(i, 1)] - u[row]) + cc * 0.0;
        push(row, w.idx(i, 1), c1);
        push(row, row, cc - c1);
      } else if (j == nt - 1) {
        // nonlinear flux ghost: u_g = u_{j-1} + 2 dth r u^q
        const double ub = u[row];
        const double c1 = ir2 / (dth * dth);
        res[row] += c1 * (2.0 * u[w.idx(i, j - 1)] + 2.0 * dth * r * std::pow(ub, q) - 2.0 * ub);
        push(row, w.idx(i, j - 1), 2.0 * c1);
        push(row, row, cc + c1 * (2.0 * dth * r * q * std::pow(ub, q - 1.0) - 2.0));
      } else {
        const double ct = (n - 2.0) * std::cos(w.th[j]) / std::sin(w.th[j]);
        const double c_m = ir2 * (1.0 / (dth * dth) - ct / (2.0 * dth));
        const double c_p = ir2 * (1.0 / (dth * dth) + ct / (2.0 * dth));
        const double c_c = ir2 * (-2.0 / (dth * dth));
        res[row] += c_m * u[w.idx(i, j - 1)] + c_c * u[row] + c_p * u[w.idx(i, j + 1)];
        push(row, w.idx(i, j - 1), c_m);
        push(row, w.idx(i, j + 1), c_p);
        push(row, row, cc + c_c);
      }
    }
  }
}

} // namespace

StationarySolution solve_u1(const Problem& p, const AngularProfile& prof,
                            const AngularEigenpair& e1, double mu_1,
                            const StationaryOptions& opt) {
  if (!(mu_1 > 0.0)) throw std::domain_error("solve_u1: mu_1 must be positive");
  const double gamma = p.m() + mu_1;
  const double alpha = opt.alpha;
  if (!(alpha > 0.0)) throw std::domain_error("solve_u1: alpha must be positive");

  auto grid = make_grid(p.n, opt.r_min, opt.r_max, opt.nr, opt.ntheta);
  FdWorkspace w;
  w.nr = opt.nr;
  w.nt = opt.ntheta;
  w.r = grid->r.node;
  w.th = grid->theta.node;
  w.dth = w.th[1] - w.th[0];
  const std::size_t total = w.nr * w.nt;

  // Initial guess: below the singular solution, matching the origin
  // expansion, and with the boundary flux satisfied exactly on the whole
  // boundary (both branches solve d_nu u = u^q at theta = pi/2), so Newton
  // only has to fix the interior harmonicity.
  std::vector<double> u(total);
  for (std::size_t i = 0; i < w.nr; ++i) {
    for (std::size_t j = 0; j < w.nt; ++j) {
      const double rational =
          alpha / (1.0 + std::pow(alpha, p.q - 1.0) * w.r[i] * std::cos(w.th[j]));
      u[w.idx(i, j)] = std::min(prof.value(w.th[j]) * std::pow(w.r[i], -p.m()), rational);
    }
  }

  Eigen::VectorXd res(total);
  Eigen::SparseMatrix<double> J(total, total);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

  // rows carry wildly different scales (1/h^2 near r_min); convergence and
  // backtracking are judged on the row-equilibrated residual
  Eigen::VectorXd row_scale(total);
  auto scaled_norm = [&](const Eigen::VectorXd& v) {
    return (v.cwiseQuotient(row_scale)).cwiseAbs().maxCoeff();
  };

  double res_norm = 0.0;
  bool converged = false;
  for (int it = 0; it < opt.max_newton; ++it) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(total * 6);
    assemble_system(w, p, prof, gamma, alpha, u, res, &trips);
    row_scale.setConstant(1e-300);
    for (const auto& t : trips) row_scale[t.row()] += std::abs(t.value());
    row_scale *= std::max(1.0, alpha);
    res_norm = scaled_norm(res);
    if (res_norm <= opt.newton_tol) {
      converged = true;
      break;
    }
    // row-equilibrated solve: the raw rows span ~9 decades (1/h^2 near r_min
    // against O(1) far-field rows) and un-scaled LU loses the small rows
    for (auto& t : trips) t = {t.row(), t.col(), t.value() / row_scale[t.row()]};
    J.setFromTriplets(trips.begin(), trips.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      throw numerical_error("solve_u1: Jacobian factorization failed");
    }
    Eigen::VectorXd du = lu.solve(-res.cwiseQuotient(row_scale));

    // damped update; only the boundary powers need positive arguments
    double lambda = 1.0;
    Eigen::VectorXd trial(total), res2(total);
    bool accepted = false;
    for (int back = 0; back < 40; ++back) {
      for (std::size_t k = 0; k < total; ++k) trial[k] = u[k] + lambda * du[k];
      bool bdry_positive = true;
      for (std::size_t i = 0; i < w.nr; ++i) {
        if (!(trial[w.idx(i, w.nt - 1)] > 0.0)) {
          bdry_positive = false;
          break;
        }
      }
      if (bdry_positive) {
        std::vector<double> tv(trial.data(), trial.data() + total);
        assemble_system(w, p, prof, gamma, alpha, tv, res2, nullptr);
        if (scaled_norm(res2) < (1.0 - 0.25 * lambda) * res_norm) {
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      throw numerical_error("solve_u1: Newton backtracking stalled at scaled residual " +
                            std::to_string(res_norm));
    }
    for (std::size_t k = 0; k < total; ++k) u[k] += lambda * du[k];
  }
  if (!converged) {
    throw numerical_error("solve_u1: Newton did not converge, scaled residual " +
                          std::to_string(res_norm));
  }

  StationarySolution sol(p);
  sol.alpha = alpha;
  sol.gamma = gamma;
  sol.v = prof.v;
  sol.e1 = e1.e;
  sol.field = AxialField(grid);
  sol.field.v.assign(u.begin(), u.end());

  // far-field coefficient: project U_inf - U on e1 and fit k r^{-gamma}
  const double lo = opt.fit_lo_frac * opt.r_max, hi = opt.fit_hi_frac * opt.r_max;
  const Grid1D tg = grid->theta;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < w.nr; ++i) {
    const double r = w.r[i];
    if (r < lo || r > hi) continue;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < w.nt; ++j) {
      const double sw = std::pow(std::sin(w.th[j]), p.n - 2) * tg.weight[j];
      const double ev = e1.value(w.th[j]);
      num += (prof.value(w.th[j]) * std::pow(r, -p.m()) - u[w.idx(i, j)]) * ev * sw;
      den += ev * ev * sw;
    }
    const double c = num / den;
    if (!(c > 0.0)) {
      throw numerical_error("solve_u1: far-field coefficient non-positive inside fit band");
    }
    lx.push_back(std::log(r));
    ly.push_back(std::log(c));
  }
  if (lx.size() < 4) {
    throw numerical_error("solve_u1: far-field fit band too narrow (raise r_max or nr)");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double N = static_cast<double>(lx.size());
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double det = N * sxx - sx * sx;
  sol.fit_condition = (N * sxx + sx * sx) / std::abs(det);
  if (sol.fit_condition > 1e8) {
    throw numerical_error("solve_u1: far-field fit ill-conditioned (r_max too small?)");
  }
  sol.far_slope = (N * sxy - sx * sy) / det;
  const double intercept = (sy - sol.far_slope * sx) / N;
  // evaluate the fitted coefficient at the band midpoint with the exact
  // exponent -gamma, to decouple k from slope-fit error
  const double mid = 0.5 * (std::log(lo) + std::log(hi));
  sol.k_alpha = std::exp(intercept + sol.far_slope * mid + gamma * mid);
  return sol;
}

double StationarySolution::eval(double r, double theta) const {
  if (!(r >= 0.0)) throw std::domain_error("StationarySolution::eval: r must be >= 0");
  const Grid2D& g = *field.grid;
  const double rmin = g.r.front(), rmax = g.r.back();
  if (r < rmin) {
    return alpha - std::pow(alpha, p.q) * r * std::cos(theta);
  }
  if (r > rmax) {
    return v.value(theta) * std::pow(r, -p.m()) - k_alpha * e1.value(theta) * std::pow(r, -gamma);
  }
  // bilinear in (log r, theta)
  const double lr = std::log(r);
  const double l0 = std::log(rmin);
  const double dl = (std::log(rmax) - l0) / static_cast<double>(g.nr() - 1);
  std::size_t i = std::min(g.nr() - 2, static_cast<std::size_t>(std::max(0.0, (lr - l0) / dl)));
  const double tr = (lr - (l0 + dl * i)) / dl;
  const double dth = g.theta.node[1] - g.theta.node[0];
  std::size_t j = std::min(g.ntheta() - 2,
                           static_cast<std::size_t>(std::max(0.0, theta / dth)));
  const double tt = (theta - g.theta.node[j]) / dth;
  const double a = field.at(i, j) * (1 - tr) * (1 - tt) + field.at(i + 1, j) * tr * (1 - tt) +
                   field.at(i, j + 1) * (1 - tr) * tt + field.at(i + 1, j + 1) * tr * tt;
  return a;
}

double u_alpha(const StationarySolution& base, double alpha, double r, double theta) {
  if (!(alpha > 0.0)) throw std::domain_error("u_alpha: alpha must be positive");
  return alpha * base.eval(std::pow(alpha, base.p.q - 1.0) * r, theta);
}

double k_alpha_scaling(const StationarySolution& base, double alpha) {
  const double mu_1 = base.gamma - base.p.m();
  return std::pow(alpha, -mu_1 / base.p.m()) * base.k_alpha;
}

double calibrate_alpha(double k1, double c, const Problem& p, double mu_1) {
  if (!(k1 > 0.0) || !(c > 0.0) || !(mu_1 > 0.0)) {
    throw std::domain_error("calibrate_alpha: inputs must be positive");
  }
  return std::pow(k1 / c, p.m() / mu_1);
}

std::string field_to_csv(const AxialField& f) {
  std::string out = "r,theta,value\n";
  char buf[160];
  const Grid2D& g = *f.grid;
  for (std::size_t i = 0; i < g.nr(); ++i) {
    for (std::size_t j = 0; j < g.ntheta(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.r.node[i], g.theta.node[j],
                    f.at(i, j));
      out += buf;
    }
  }
  return out;
}

std::string far_field_report_json(const StationarySolution& s, double r_max) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "{\"k1\": %.17g, \"slope\": %.17g, \"rmax\": %.17g, \"condition\": %.17g}\n",
                s.k_alpha, s.far_slope, r_max, s.fit_condition);
  return buf;
}

} // namespace blowuplab
