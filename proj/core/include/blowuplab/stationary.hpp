#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "blowuplab/angular.hpp"
#include "blowuplab/grid.hpp"

namespace blowuplab {

/// Singular separable solution V(theta) r^{-m}. Throws on r <= 0.
double u_infinity(const Problem& p, const AngularProfile& prof, double r, double theta);

struct StationaryOptions {
  double r_min = 2e-3;
  double r_max = 50.0;
  std::size_t nr = 385;
  std::size_t ntheta = 65;
  double alpha = 1.0;      // normalization U(0) = alpha
  int max_newton = 60;
  double newton_tol = 1e-11;
  double fit_lo_frac = 0.25; // far-field fit band [lo, hi] * r_max
  double fit_hi_frac = 0.5;
};

/// A solved member of the regular stationary family together with its
/// far-field data. The evaluator extends the grid solution by the origin
/// expansion below r_min and the first-order asymptote beyond r_max.
struct StationarySolution {
  Problem p;
  double alpha = 1.0;         // U(0)
  double gamma = 0.0;         // m + mu1
  double k_alpha = 0.0;       // far-field coefficient of this member
  double far_slope = 0.0;     // fitted log-log slope of U_inf - U (want -gamma)
  double fit_condition = 0.0; // conditioning of the far-field fit
  AxialField field;
  HermiteCurve v;  // profile V
  HermiteCurve e1; // first Robin eigenfunction

  StationarySolution(const Problem& prob) : p(prob) {}

  /// Point evaluation with the origin/far-field extensions.
  double eval(double r, double theta) const;
};

/// Newton solve of the harmonic problem with nonlinear boundary flux,
/// U(0) = alpha normalization at the inner edge and the far-field Robin
/// closure  d_r U + (gamma/R) U = (gamma - m) V(theta) R^{-m-1}  at r_max.
/// mu_1 fixes gamma = m + mu_1; e1 is used for the far-field coefficient
/// extraction.
StationarySolution solve_u1(const Problem& p, const AngularProfile& prof,
                            const AngularEigenpair& e1, double mu_1,
                            const StationaryOptions& opt = {});

/// Evaluates the scaled member  U_alpha(y) = alpha U_1(alpha^{q-1} y)  from a
/// solved base solution (base.alpha must be 1).
double u_alpha(const StationarySolution& base, double alpha, double r, double theta);

/// k_alpha attached to the scaled member: alpha^{-mu1/m} k_1.
double k_alpha_scaling(const StationarySolution& base, double alpha);

/// alpha such that k_alpha equals the prescribed coefficient:
/// alpha = (k1 / c)^{m/mu1}. All inputs must be positive.
double calibrate_alpha(double k1, double c, const Problem& p, double mu_1);

/// Field dump as CSV r,theta,value.
std::string field_to_csv(const AxialField& f);

/// Far-field fit report as JSON {k1, slope, rmax, condition}.
std::string far_field_report_json(const StationarySolution& s, double r_max);

} // namespace blowuplab
