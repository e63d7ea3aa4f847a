#pragma once

#include <optional>

#include "oraclebench/complexity.hpp"

namespace oraclebench {

/// lambda(n, d, x) = c0 K(d)^q (log n)^{(4q-2)/q} (log d)^2 (x + log n).
double theorem_c_penalty(double n, double d, double x, double q, double Kd, double c0 = 1.0);

/// rho_n(x) = max(lambda*, c0 (b_n + B_n / eps) x / (n eps)) for ERM over a fixed class.
struct ResidualSpec {
  double lambda_star = 0.0;
  double bn_term = 0.0;
  double Bn_term = 0.0;
  double epsilon = 0.25;
  double x = 1.0;
  long n = 1;
  double value = 0.0;
};

ResidualSpec rho_n_theorem_a(double lambdaStar, double bn, double Bn, double epsilon, double x,
                             long n, double c0 = 1.0);

/// rho_n(r, x) = max(lambda*(r), c0 (phi_n(r) + B_n(r) / eps) (x + 1) / (n eps)).
double rho_n_theorem_b(const ComplexityProfile& profile, double r, double x, double c0 = 1.0);

/// sup { r > 0 : fn(r) <= y }, or 0 when fn(0+) > y.
///
/// Tabulated maps return the largest grid point satisfying the bound.
/// Closed forms are bracketed by doubling and then bisected; a map that stays
/// <= y up to 2^60 raises InvalidProfile.
double generalized_inverse(const MonotoneMap& fn, double y, double tol = 1e-12);

/// alpha_n(eps, x) of the regularised procedure. With a bounded criterion
/// (boundedCritCn) the bound itself is returned; otherwise
///   max(K1 (crit(f0) + 2),
///       inverse lambda*((1+2eps)(3 R(f0) + 2K'(b_n(l_f0) + B_n(crit f0))(x+1)/n))).
double alpha_n(const ComplexityProfile& profile, double f0Risk, double f0Crit, double f0bn,
               double x, double epsilon, double K1 = 1.0, double Kprime = 1.0,
               std::optional<double> boundedCritCn = std::nullopt);

/// reg(f) = 2 / (1 + 2 eps) * rho_n(crit(f) + 1, x + log alpha_n).
double rerm_regularizer(const ComplexityProfile& profile, double crit, double x, double alphaN,
                        double epsilon, double c0 = 1.0);

/// c0 x V log(en / V) / (eps^2 n): nonexact ERM residual for a VC class of dimension V.
double massart_rate(double V, double n, double x, double epsilon, double c0 = 1.0);

}  // namespace oraclebench
