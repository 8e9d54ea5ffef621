#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "blowuplab/angular.hpp"
#include "blowuplab/grid.hpp"

namespace blowuplab {

/// Radial decay/growth exponent attached to the i-th angular eigenvalue:
/// for i = 1 the root of  g^2 - (n-2) g = kappa_1  inside (0, (n-2)/2),
/// for i >= 2 the positive root of  g^2 + (n-2) g = kappa_i.
struct RadialExponent {
  int i = 0;
  double value = 0.0;
};

std::vector<RadialExponent> radial_exponents(const std::vector<double>& kappas, int n);

/// lambda_{1j} = -gamma/2 + m/2 + j - 1,  lambda_{ij} = gamma_i/2 + m/2 + j - 1.
double eigenvalue(int i, int j, const std::vector<RadialExponent>& exps, const Problem& p);

/// One separated eigenmode phi_ij = e_i(theta) a_ij(r) of the linearized
/// self-similar operator. The radial factor is
///   a_ij(r) = A_ij r^{beta_i} M(-(j-1), beta_i + n/2, r^2/4)
/// normalized so that  int_0^inf a_ij^2 e^{-r^2/4} r^{n-1} dr = 1, with the
/// r->0 coefficient positive.
struct EigenMode {
  int i = 0;
  int j = 0;
  double lambda = 0.0;
  RadialExponent exponent;   // beta_i (negative of gamma for i = 1)
  double beta = 0.0;         // actual power at the origin (-gamma or +gamma_i)
  double norm_const = 0.0;   // A_ij
  double c_small = 0.0;      // r -> 0 coefficient (= A_ij)
  double c_large = 0.0;      // r -> inf coefficient of r^{2 lambda - m}
  int poly_degree = 0;       // j - 1
  double kummer_b = 0.0;     // beta + n/2

  double radial(double r) const;
  double radial_deriv(double r) const;
};

/// The assembled eigensystem: angular pairs, exponents and the mode
/// inventory with lambda_ij <= lambda_cap.
struct EigenSystem {
  Problem p;
  std::vector<AngularEigenpair> angular;
  std::vector<RadialExponent> exponents;
  std::vector<EigenMode> modes;

  explicit EigenSystem(const Problem& prob) : p(prob) {}

  double gamma() const { return gamma_; }
  const EigenMode& mode(int i, int j) const;
  const AngularEigenpair& eigenpair(int i) const;

  double phi(int i, int j, double r, double theta) const;
  /// phi_ij / sigma with the r^{-gamma} cancellation done analytically
  /// (bounded near the origin for i = 1).
  double eta(int i, int j, double r, double theta) const;

  double gamma_ = 0.0; // set by the builder
};

/// Builds angular pairs e_1..e_{max_angular}, exponents, and every mode with
/// lambda_ij <= lambda_cap (at least j = 1 per angular index whose ladder
/// starts below the cap).
EigenSystem build_eigensystem(const Problem& p, const AngularProfile& prof,
                              double lambda_cap, int max_angular = 4,
                              std::size_t nodes = 2049);

/// CSV with header i,j,kappa_i,exponent,lambda_ij,A_ij,c_small,c_large.
std::string eigs_to_csv(const EigenSystem& sys);

/// Samples phi_ij on a grid.
AxialField sample_phi(const EigenSystem& sys, int i, int j,
                      std::shared_ptr<const Grid2D> grid);

/// Weights used throughout the linearized theory:
///   rho = exp(-r^2/4), sigma = r^{-gamma} e_1(theta), B = sigma^2,
///   C = sigma^2 rho.
struct WeightContext {
  int n = 0;
  double gamma = 0.0;
  HermiteCurve e1;

  double rho(double r) const { return std::exp(-0.25 * r * r); }
  double sigma(double r, double theta) const {
    return std::pow(r, -gamma) * e1.value(theta);
  }
  double B(double r, double theta) const {
    const double s = sigma(r, theta);
    return s * s;
  }
  double C(double r, double theta) const { return B(r, theta) * rho(r); }
};

WeightContext make_weight_context(const EigenSystem& sys);

/// Boundary inner product  |S^{n-2}| int f g C(r, pi/2) r^{n-2} dr  over the
/// theta = pi/2 edge of the shared grid.
double inner_c_boundary(const AxialField& f, const AxialField& g, const WeightContext& ctx);

struct CoercivityReport {
  double mu = 0.0;
  int trials = 0;
  double min_ratio = 0.0;     // over random trials
  double eig_form_value = 0.0; // quadratic form at phi_11 (should be lambda_11 + mu)
  bool pass = false;
};

/// Evaluates the coercivity quadratic form
///   Q(Phi) = ||grad Phi||_rho^2 + (m/2 + mu) ||Phi||_rho^2
///            - K int_bdry r^{-1} Phi^2 rho
/// against ||grad Phi||_rho^2 + ||Phi||_rho^2 for random smooth trial fields
/// with analytic gradients. PASS when every ratio stays positive.
CoercivityReport coercivity_check(const Problem& p, const AngularProfile& prof,
                                  const EigenSystem& sys, int trial_count, double mu,
                                  unsigned seed = 12345,
                                  std::shared_ptr<const Grid2D> grid = nullptr);

} // namespace blowuplab
