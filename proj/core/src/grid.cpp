#include "blowuplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blowuplab/specfun.hpp"

namespace blowuplab {

namespace {

std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("simpson_weights: node count must be odd and >= 3");
  }
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  return w;
}

} // namespace

Grid1D uniform_grid(double a, double b, std::size_t n) {
  if (!(b > a)) throw std::invalid_argument("uniform_grid: need b > a");
  const double h = (b - a) / static_cast<double>(n - 1);
  Grid1D g;
  g.node.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.node[i] = a + h * static_cast<double>(i);
  g.node.back() = b;
  g.weight = simpson_weights(n, h);
  return g;
}

Grid1D log_grid(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > a)) throw std::invalid_argument("log_grid: need 0 < a < b");
  const double ta = std::log(a), tb = std::log(b);
  const double h = (tb - ta) / static_cast<double>(n - 1);
  Grid1D g;
  g.node.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.node[i] = std::exp(ta + h * static_cast<double>(i));
  g.node.back() = b;
  g.weight = simpson_weights(n, h);
  for (std::size_t i = 0; i < n; ++i) g.weight[i] *= g.node[i]; // dr = r dt
  return g;
}

double sphere_surface(int k) {
  if (k < 0) throw std::invalid_argument("sphere_surface: k must be >= 0");
  // |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  const double half = 0.5 * static_cast<double>(k + 1);
  return 2.0 * std::pow(M_PI, half) / specfun::gamma(half);
}

std::shared_ptr<const Grid2D> make_grid(int dim, double r_min, double r_max,
                                        std::size_t nr, std::size_t ntheta) {
  if (dim < 3) throw std::invalid_argument("make_grid: dim must be >= 3");
  auto g = std::make_shared<Grid2D>();
  g->r = log_grid(r_min, r_max, nr);
  g->theta = uniform_grid(0.0, M_PI / 2.0, ntheta);
  g->dim = dim;
  g->sphere_factor = sphere_surface(dim - 2);
  return g;
}

double AxialField::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double AxialField::max() const { return *std::max_element(v.begin(), v.end()); }
double AxialField::min() const { return *std::min_element(v.begin(), v.end()); }

double inner_rho(const AxialField& f, const AxialField& g) {
  if (f.grid != g.grid) throw std::invalid_argument("inner_rho: fields do not share a grid");
  const Grid2D& gr = *f.grid;
  const int n = gr.dim;
  double total = 0.0;
  for (std::size_t i = 0; i < gr.nr(); ++i) {
    const double r = gr.r.node[i];
    const double radial = std::pow(r, n - 1) * std::exp(-0.25 * r * r) * gr.r.weight[i];
    double row = 0.0;
    for (std::size_t j = 0; j < gr.ntheta(); ++j) {
      const double s = std::pow(std::sin(gr.theta.node[j]), n - 2);
      row += f.at(i, j) * g.at(i, j) * s * gr.theta.weight[j];
    }
    total += radial * row;
  }
  return total * gr.sphere_factor;
}

double integrate_volume(const AxialField& f, const std::vector<double>& pw) {
  const Grid2D& gr = *f.grid;
  if (pw.size() != gr.size()) throw std::invalid_argument("integrate_volume: weight size mismatch");
  const int n = gr.dim;
  double total = 0.0;
  for (std::size_t i = 0; i < gr.nr(); ++i) {
    const double r = gr.r.node[i];
    const double radial = std::pow(r, n - 1) * gr.r.weight[i];
    double row = 0.0;
    for (std::size_t j = 0; j < gr.ntheta(); ++j) {
      const double s = std::pow(std::sin(gr.theta.node[j]), n - 2);
      row += f.at(i, j) * pw[i * gr.ntheta() + j] * s * gr.theta.weight[j];
    }
    total += radial * row;
  }
  return total * gr.sphere_factor;
}

namespace {

std::size_t bracket_index(const std::vector<double>& x, double xi) {
  // nodes strictly increasing; clamp to the end intervals
  if (xi <= x.front()) return 0;
  if (xi >= x[x.size() - 2]) return x.size() - 2;
  auto it = std::upper_bound(x.begin(), x.end(), xi);
  return static_cast<std::size_t>(it - x.begin()) - 1;
}

} // namespace

double HermiteCurve::value(double xi) const {
  const std::size_t k = bracket_index(x, xi);
  const double h = x[k + 1] - x[k];
  const double t = (xi - x[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y[k] + h10 * h * dy[k] + h01 * y[k + 1] + h11 * h * dy[k + 1];
}

double HermiteCurve::deriv(double xi) const {
  const std::size_t k = bracket_index(x, xi);
  const double h = x[k + 1] - x[k];
  const double t = (xi - x[k]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return d00 * y[k] + d10 * dy[k] + d01 * y[k + 1] + d11 * dy[k + 1];
}

} // namespace blowuplab
