#pragma once

namespace blowuplab::specfun {

/// Gamma function for strictly positive real arguments (Lanczos rational
/// approximation, ~15 correct digits). Negative and zero arguments are not
/// needed anywhere in this project and are rejected with std::domain_error.
double gamma(double x);

/// log Gamma for x > 0. Used where products of Gamma values would overflow.
double log_gamma(double x);

/// Parameters of the confluent hypergeometric function M(a, b, z).
/// b must not be a non-positive integer; z must be non-negative.
/// a equal to a non-positive integer -j makes M a degree-j polynomial in z,
/// which is evaluated exactly term by term.
struct KummerParams {
  double a;
  double b;
  double z;
};

/// Largest z accepted by kummer_m. The direct Taylor series is accurate and
/// fast for moderate z; all callers in this project have z = r^2/4 with r on
/// a bounded grid, so no asymptotic branch is provided.
inline constexpr double kKummerMaxZ = 1.0e4;

double kummer_m(const KummerParams& p);
double kummer_m(double a, double b, double z);

/// d/dz M(a, b, z) = (a/b) M(a+1, b+1, z).
double kummer_m_dz(double a, double b, double z);

} // namespace blowuplab::specfun
