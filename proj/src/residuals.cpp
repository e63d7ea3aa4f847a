#include "oraclebench/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oraclebench {
namespace {

void require_epsilon(double epsilon, const char* where) {
  detail::require(epsilon > 0.0 && epsilon < 0.5,
                  std::string(where) + ": epsilon must lie in (0, 1/2)");
}

}  // namespace

double theorem_c_penalty(double n, double d, double x, double q, double Kd, double c0) {
  detail::require(x > 0.0, "theorem_c_penalty: x must be > 0");
  detail::require(c0 >= 0.0, "theorem_c_penalty: c0 must be >= 0");
  return c0 * theorem_c_h(n, d, q, Kd) * (x + std::log(n));
}

ResidualSpec rho_n_theorem_a(double lambdaStar, double bn, double Bn, double epsilon, double x,
                             long n, double c0) {
  require_epsilon(epsilon, "rho_n_theorem_a");
  detail::require(lambdaStar >= 0.0 && bn >= 0.0 && Bn >= 0.0 && x >= 0.0 && c0 >= 0.0,
                  "rho_n_theorem_a: inputs must be nonnegative");
  detail::require(n >= 1, "rho_n_theorem_a: n must be >= 1");
  ResidualSpec out{lambdaStar, bn, Bn, epsilon, x, n, 0.0};
  const double concentration =
      c0 * (bn + Bn / epsilon) * x / (static_cast<double>(n) * epsilon);
  out.value = std::max(lambdaStar, concentration);
  return out;
}

double rho_n_theorem_b(const ComplexityProfile& profile, double r, double x, double c0) {
  detail::require(r >= 0.0, "rho_n_theorem_b: r must be >= 0");
  detail::require(x > 0.0, "rho_n_theorem_b: x must be > 0");
  require_epsilon(profile.epsilon, "rho_n_theorem_b");
  const double eps = profile.epsilon;
  const double concentration =
      c0 * (profile.phi_n(r) + profile.bn(r) / eps) * (x + 1.0) / (profile.n * eps);
  return std::max(profile.lambda_star(r), concentration);
}

double generalized_inverse(const MonotoneMap& fn, double y, double tol) {
  if (fn.tabulated()) {
    const auto& grid = fn.grid();
    const auto& values = fn.values();
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] > 0.0 && values[i] <= y) best = grid[i];
    if (values.back() <= y)
      throw InvalidProfile("generalized_inverse: tabulated map never exceeds " + std::to_string(y));
    return best;
  }
  if (fn(0.0) > y) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (fn(hi) <= y) {
    if (++doublings > 60)
      throw InvalidProfile("generalized_inverse: map stays below " + std::to_string(y) +
                           " up to 2^60");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fn(mid) <= y)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double alpha_n(const ComplexityProfile& profile, double f0Risk, double f0Crit, double f0bn,
               double x, double epsilon, double K1, double Kprime,
               std::optional<double> boundedCritCn) {
  if (boundedCritCn) {
    detail::require(*boundedCritCn > 0.0, "alpha_n: C_n must be > 0");
    return *boundedCritCn;
  }
  require_epsilon(epsilon, "alpha_n");
  detail::require(f0Risk >= 0.0 && f0Crit >= 0.0 && f0bn >= 0.0 && x >= 0.0,
                  "alpha_n: inputs must be nonnegative");
  const double level = (1.0 + 2.0 * epsilon) *
                       (3.0 * f0Risk + 2.0 * Kprime * (f0bn + profile.bn(f0Crit)) * (x + 1.0) /
                                           profile.n);
  return std::max(K1 * (f0Crit + 2.0), generalized_inverse(profile.lambda_star, level));
}

double rerm_regularizer(const ComplexityProfile& profile, double crit, double x, double alphaN,
                        double epsilon, double c0) {
  detail::require(alphaN >= 1.0, "rerm_regularizer: alpha_n must be >= 1");
  detail::require(crit >= 0.0, "rerm_regularizer: crit must be >= 0");
  require_epsilon(epsilon, "rerm_regularizer");
  ComplexityProfile atEps = profile;
  atEps.epsilon = epsilon;
  return 2.0 / (1.0 + 2.0 * epsilon) * rho_n_theorem_b(atEps, crit + 1.0, x + std::log(alphaN), c0);
}

double massart_rate(double V, double n, double x, double epsilon, double c0) {
  detail::require(V >= 1.0, "massart_rate: V must be >= 1");
  detail::require(V <= n, "massart_rate: V must not exceed n");
  detail::require(x > 0.0, "massart_rate: x must be > 0");
  require_epsilon(epsilon, "massart_rate");
  return c0 * x * V * std::log(std::numbers::e * n / V) / (epsilon * epsilon * n);
}

}  // namespace oraclebench
