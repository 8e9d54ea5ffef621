#pragma once

// Internal vertex-centered finite-volume assembly on an (r, theta) tensor
// grid for operators of the form (1/w) div(w grad u) on the half-space in
// axial symmetry. The stiffness matrix is symmetric with zero row sums, so
// the induced flow conserves sum(mass .* u) exactly and dissipates the
// w-weighted L2 norm.

#include <Eigen/Sparse>
#include <functional>
#include <memory>

#include "blowuplab/grid.hpp"

namespace blowuplab::fv {

struct Operator {
  std::shared_ptr<const Grid2D> grid;
  Eigen::SparseMatrix<double> stiffness; // S, PSD, S 1 = 0
  Eigen::VectorXd mass;                  // cell integrals of w dV
  // theta = pi/2 face integrals per radial node (for boundary flux terms):
  //   boundary_area[i]      ~ |S| int_cell w(r, pi/2) r^{n-2} dr
  //   boundary_area_rinv[i] ~ |S| int_cell w(r, pi/2) r^{n-3} dr
  Eigen::VectorXd boundary_area;
  Eigen::VectorXd boundary_area_rinv;

  std::size_t index(std::size_t ir, std::size_t it) const {
    return ir * grid->ntheta() + it;
  }
};

Operator assemble(std::shared_ptr<const Grid2D> grid,
                  const std::function<double(double, double)>& weight);

} // namespace blowuplab::fv
