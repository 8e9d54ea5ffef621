#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace blowuplab {

/// 1D quadrature grid: nodes plus weights such that
/// integral f dx ~= sum_i f(node[i]) * weight[i].
struct Grid1D {
  std::vector<double> node;
  std::vector<double> weight;

  std::size_t size() const { return node.size(); }
  double front() const { return node.front(); }
  double back() const { return node.back(); }
};

/// Uniformly spaced nodes on [a, b] with composite Simpson weights.
/// n must be odd and >= 3.
Grid1D uniform_grid(double a, double b, std::size_t n);

/// Geometrically spaced nodes on [a, b] (a > 0) with composite Simpson
/// weights in the log coordinate. n must be odd and >= 3.
Grid1D log_grid(double a, double b, std::size_t n);

/// Surface measure of the unit sphere S^k in R^{k+1}.
double sphere_surface(int k);

/// Tensor (r, theta) grid on (0, r_max] x [0, pi/2] for x_n-axial symmetric
/// fields in dimension dim. Carries the surface factor |S^{dim-2}| so that
/// volume integrals are
///   |S^{dim-2}| * int f(r,th) r^{dim-1} (sin th)^{dim-2} dr dth.
struct Grid2D {
  Grid1D r;
  Grid1D theta;
  int dim = 0;
  double sphere_factor = 0.0;

  std::size_t nr() const { return r.size(); }
  std::size_t ntheta() const { return theta.size(); }
  std::size_t size() const { return nr() * ntheta(); }
};

std::shared_ptr<const Grid2D> make_grid(int dim, double r_min, double r_max,
                                        std::size_t nr, std::size_t ntheta);

/// Scalar field sampled on a shared Grid2D, stored row-major in r.
struct AxialField {
  std::shared_ptr<const Grid2D> grid;
  std::vector<double> v;

  AxialField() = default;
  explicit AxialField(std::shared_ptr<const Grid2D> g)
      : grid(std::move(g)), v(grid->size(), 0.0) {}

  double& at(std::size_t ir, std::size_t it) { return v[ir * grid->ntheta() + it]; }
  double at(std::size_t ir, std::size_t it) const { return v[ir * grid->ntheta() + it]; }

  double max_abs() const;
  double max() const;
  double min() const;
};

/// Fills a field from a callable f(r, theta).
template <typename F>
AxialField sample_field(std::shared_ptr<const Grid2D> grid, F&& f) {
  AxialField out(std::move(grid));
  const auto& g = *out.grid;
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.ntheta(); ++j)
      out.at(i, j) = f(g.r.node[i], g.theta.node[j]);
  return out;
}

/// Volume integral of f against the Gaussian weight rho = exp(-r^2/4):
///   |S^{dim-2}| int f g rho r^{dim-1} (sin th)^{dim-2} dr dth.
/// Throws std::invalid_argument if the fields do not share a grid.
double inner_rho(const AxialField& f, const AxialField& g);

/// Plain volume integral with a caller-supplied pointwise weight w(r, theta)
/// (the r^{dim-1} (sin th)^{dim-2} |S^{dim-2}| factors are applied here).
double integrate_volume(const AxialField& f,
                        const std::vector<double>& pointwise_weight);

/// Pointwise weight vector for a grid from a callable w(r, theta).
template <typename F>
std::vector<double> pointwise_weight(const Grid2D& g, F&& w) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.ntheta(); ++j)
      out[i * g.ntheta() + j] = w(g.r.node[i], g.theta.node[j]);
  return out;
}

/// Cubic Hermite interpolant through (x_k, y_k) with derivatives dy_k.
/// Nodes must be strictly increasing. Fourth-order accurate when the data
/// comes from a smooth function with exact derivatives.
struct HermiteCurve {
  std::vector<double> x, y, dy;

  double value(double xi) const;
  double deriv(double xi) const;
  double front_x() const { return x.front(); }
  double back_x() const { return x.back(); }
};

} // namespace blowuplab
