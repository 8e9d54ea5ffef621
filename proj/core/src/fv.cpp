#include "fv.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace blowuplab::fv {

namespace {

// 5-point Gauss-Legendre on [a, b]
template <typename F>
double gl5(F&& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += ws[k] * f(mid + half * xs[k]);
  return s * half;
}

} // namespace

Operator assemble(std::shared_ptr<const Grid2D> grid,
                  const std::function<double(double, double)>& weight) {
  const Grid2D& g = *grid;
  const int n = g.dim;
  const std::size_t nr = g.nr(), nt = g.ntheta();
  if (nr < 3 || nt < 3) throw std::invalid_argument("fv::assemble: grid too small");

  // dual-cell edges: geometric midpoints in r, arithmetic midpoints in theta
  std::vector<double> re(nr + 1), te(nt + 1);
  re[0] = g.r.node[0];
  re[nr] = g.r.node[nr - 1];
  for (std::size_t i = 1; i < nr; ++i) re[i] = std::sqrt(g.r.node[i - 1] * g.r.node[i]);
  te[0] = g.theta.node[0];
  te[nt] = g.theta.node[nt - 1];
  for (std::size_t j = 1; j < nt; ++j) te[j] = 0.5 * (g.theta.node[j - 1] + g.theta.node[j]);

  Operator op;
  op.grid = grid;
  const std::size_t total = nr * nt;
  op.mass = Eigen::VectorXd::Zero(total);
  op.boundary_area = Eigen::VectorXd::Zero(nr);
  op.boundary_area_rinv = Eigen::VectorXd::Zero(nr);

  const double sphere = g.sphere_factor;
  auto sinp = [n](double th) { return std::pow(std::sin(th), n - 2); };

  // cell masses: tensor 5x5 Gauss of w r^{n-1} sin^{n-2}
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const double m = gl5(
          [&](double r) {
            return std::pow(r, n - 1) *
                   gl5([&](double th) { return weight(r, th) * sinp(th); }, te[j], te[j + 1]);
          },
          re[i], re[i + 1]);
      op.mass[op.index(i, j)] = sphere * m;
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(total * 5);
  auto add_pair = [&](std::size_t p, std::size_t q, double t) {
    trips.emplace_back(p, p, t);
    trips.emplace_back(q, q, t);
    trips.emplace_back(p, q, -t);
    trips.emplace_back(q, p, -t);
  };

  // radial faces at r = re[i+1] between (i, j) and (i+1, j)
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double rf = re[i + 1];
    const double dr = g.r.node[i + 1] - g.r.node[i];
    for (std::size_t j = 0; j < nt; ++j) {
      const double aw =
          gl5([&](double th) { return weight(rf, th) * sinp(th); }, te[j], te[j + 1]);
      const double t = sphere * std::pow(rf, n - 1) * aw / dr;
      add_pair(op.index(i, j), op.index(i + 1, j), t);
    }
  }

  // angular faces at theta = te[j+1] between (i, j) and (i, j+1)
  for (std::size_t j = 0; j + 1 < nt; ++j) {
    const double tf = te[j + 1];
    const double dth = g.theta.node[j + 1] - g.theta.node[j];
    const double sf = sinp(tf);
    for (std::size_t i = 0; i < nr; ++i) {
      const double aw =
          gl5([&](double r) { return weight(r, tf) * std::pow(r, n - 3); }, re[i], re[i + 1]);
      const double t = sphere * sf * aw / dth;
      add_pair(op.index(i, j), op.index(i, j + 1), t);
    }
  }

  // boundary face integrals along theta = pi/2
  for (std::size_t i = 0; i < nr; ++i) {
    op.boundary_area[i] = sphere * gl5([&](double r) { return weight(r, M_PI / 2.0) * std::pow(r, n - 2); },
                                       re[i], re[i + 1]);
    op.boundary_area_rinv[i] =
        sphere * gl5([&](double r) { return weight(r, M_PI / 2.0) * std::pow(r, n - 3); }, re[i],
                     re[i + 1]);
  }

  op.stiffness.resize(total, total);
  op.stiffness.setFromTriplets(trips.begin(), trips.end());
  op.stiffness.makeCompressed();
  return op;
}

} // namespace blowuplab::fv
