#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blowuplab/grid.hpp"

namespace blowuplab {

/// The problem pair (n, q) with the derived exponent m = 1/(q-1).
struct Problem {
  int n;
  double q;

  Problem(int n_, double q_);
  double m() const { return 1.0 / (q - 1.0); }
  /// Sobolev-trace critical exponent n/(n-2).
  double q_sobolev() const { return static_cast<double>(n) / (n - 2.0); }
  /// Existence threshold for the boundary profile, (n-1)/(n-2).
  double q_profile_min() const { return (n - 1.0) / (n - 2.0); }
};

/// Positive profile V(theta) of the separable singular solution V(theta) r^{-m}:
///   V'' + (n-2) cot(theta) V' = m(n-2-m) V on (0, pi/2),  V'(0) = 0,
///   V'(pi/2) = V(pi/2)^q.
/// K = q V(pi/2)^{q-1} is the Robin coefficient of the linearization.
struct AngularProfile {
  HermiteCurve v;
  double K = 0.0;
  double v0 = 0.0; // shooting value V(0)

  double value(double theta) const { return v.value(theta); }
  double deriv(double theta) const { return v.deriv(theta); }
  double boundary_value() const { return v.y.back(); }
};

/// Eigenpair of the half-sphere Robin problem
///   -(e'' + (n-2) cot(theta) e') = kappa e,  e'(0) = 0,  e'(pi/2) = K e(pi/2),
/// normalized to unit L^2 norm over the half-sphere and e(pi/2) > 0.
struct AngularEigenpair {
  int index = 0; // 1-based
  double kappa = 0.0;
  HermiteCurve e;

  double value(double theta) const { return e.value(theta); }
  double deriv(double theta) const { return e.deriv(theta); }
};

/// Sharp constant of the boundary-trace Hardy inequality on the half-space,
/// 2 Gamma(n/4)^2 / Gamma((n-2)/4)^2. Requires n >= 3.
double trace_hardy_constant(int n);

/// Solves the profile equation by shooting over V(0) with a geometric
/// bracket sweep followed by bisection on the boundary mismatch
/// F(V0) = V'(pi/2) - V(pi/2)^q. Requires q > (n-1)/(n-2).
AngularProfile solve_profile_v(const Problem& p, std::size_t nodes = 2049);

/// Boundary mismatch F(V0) for one shot; exposed for the bracket-scan tests.
double profile_mismatch(const Problem& p, double v0);

/// Lowest `count` eigenpairs by a sign-change scan in kappa refined by
/// bisection to |dkappa| <= 1e-10 max(1, |kappa|).
std::vector<AngularEigenpair> solve_angular_eigs(double K, int n, int count,
                                                 std::size_t nodes = 2049);

enum class JlClass { Subcritical, Critical, Supercritical };

const char* to_string(JlClass c);

/// Supercritical iff K < c_H, with a relative band around equality.
JlClass classify_jl(double K, double c_h, double tol_rel = 1e-8);

/// Small positive root mu1 of
///   mu^2 - (n-2-2m) mu - (m(n-2-m) + kappa1) = 0.
/// Throws numerical_error when the discriminant is negative (not
/// JL-supercritical).
double mu1(double kappa1, const Problem& p);

struct ScanCell {
  int n = 0;
  double q = 0.0;
  double K = 0.0;
  double c_h = 0.0;
  double kappa1 = 0.0;
  double mu1 = 0.0;   // NaN when not supercritical
  double gamma = 0.0; // m + mu1, NaN when not supercritical
  JlClass cls = JlClass::Subcritical;
  bool ok = false;
  std::string error;
};

/// Classification sweep over an (n, q) rectangle. Cells where the profile
/// solve fails are recorded with ok = false and the scan continues.
std::vector<ScanCell> jl_scan(int n_lo, int n_hi, double q_lo, double q_hi,
                              std::size_t steps_n, std::size_t steps_q,
                              int threads = 1);

/// CSV serialization with header n,q,K,cH,class,kappa1,mu1,gamma.
std::string scan_to_csv(const std::vector<ScanCell>& cells);

} // namespace blowuplab
