#include "oraclebench/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oraclebench {
namespace {

// log of (1/m) sum exp((|x_i| / c)^alpha), evaluated stably.
double log_exponential_moment(const Eigen::Ref<const Eigen::VectorXd>& absValues, double alpha,
                              double c) {
  const Eigen::Index m = absValues.size();
  double top = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd exponents(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    exponents(i) = std::pow(absValues(i) / c, alpha);
    top = std::max(top, exponents(i));
  }
  if (!std::isfinite(top)) return std::numeric_limits<double>::infinity();
  const double sum = (exponents.array() - top).exp().sum();
  return top + std::log(sum) - std::log(static_cast<double>(m));
}

}  // namespace

PsiNormEstimate psi_alpha_norm(const Eigen::Ref<const Eigen::VectorXd>& samples, double alpha,
                               double tol) {
  detail::require(samples.size() >= 1, "psi_alpha_norm: empty input");
  detail::require(samples.allFinite(), "psi_alpha_norm: non-finite sample");
  detail::require(std::isfinite(alpha) && alpha >= 1.0, "psi_alpha_norm: alpha must be >= 1");
  detail::require(tol > 0.0, "psi_alpha_norm: tol must be > 0");

  PsiNormEstimate out{alpha, 0.0, static_cast<long>(samples.size())};
  const Eigen::VectorXd absValues = samples.cwiseAbs();
  const double top = absValues.maxCoeff();
  if (top == 0.0) return out;

  const double target = std::numbers::ln2;
  auto admissible = [&](double c) { return log_exponential_moment(absValues, alpha, c) <= target; };

  // The moment is strictly decreasing in c: grow the upper end until it is
  // admissible, then bisect. lo is never admissible.
  double hi = top;
  double lo = 0.0;
  while (!admissible(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (admissible(mid))
      hi = mid;
    else
      lo = mid;
  }
  out.value = hi;
  return out;
}

double envelope_bn(std::span<const std::vector<double>> classValues, double tol) {
  detail::require(!classValues.empty(), "envelope_bn: need at least one replication");
  const std::size_t n = classValues.front().size();
  detail::require(n >= 1, "envelope_bn: replications must be nonempty");
  Eigen::VectorXd maxima(static_cast<Eigen::Index>(classValues.size()));
  for (std::size_t r = 0; r < classValues.size(); ++r) {
    detail::require(classValues[r].size() == n, "envelope_bn: ragged input");
    double m = 0.0;
    for (double v : classValues[r]) m = std::max(m, std::abs(v));
    maxima(static_cast<Eigen::Index>(r)) = m;
  }
  return psi_alpha_norm(Eigen::Ref<const Eigen::VectorXd>(maxima), 1.0, tol).value;
}

double envelope_bn(const Eigen::MatrixXd& classValues, double tol) {
  detail::require(classValues.rows() >= 1 && classValues.cols() >= 1,
                  "envelope_bn: need at least one replication of length n >= 1");
  const Eigen::VectorXd maxima = classValues.cwiseAbs().rowwise().maxCoeff();
  return psi_alpha_norm(Eigen::Ref<const Eigen::VectorXd>(maxima), 1.0, tol).value;
}

double sigma_g(const Eigen::Ref<const Eigen::VectorXd>& secondMoments) {
  detail::require(secondMoments.size() >= 1, "sigma_g: empty input");
  detail::require(secondMoments.allFinite() && (secondMoments.array() >= 0.0).all(),
                  "sigma_g: second moments must be finite and nonnegative");
  return std::sqrt(secondMoments.maxCoeff());
}

BernsteinCertificate bernstein_from_psi1(double psi1, long n, double c0) {
  detail::require(std::isfinite(psi1) && psi1 >= 0.0, "bernstein_from_psi1: psi1 must be >= 0");
  detail::require(n >= 1, "bernstein_from_psi1: n must be >= 1");
  detail::require(c0 > 0.0, "bernstein_from_psi1: c0 must be > 0");
  const double bn = c0 * psi1 * std::log(std::numbers::e * static_cast<double>(n));
  return {bn, bn * bn / static_cast<double>(n), false};
}

bool bernstein_verify(const Eigen::Ref<const Eigen::VectorXd>& samples, double psi1, double z) {
  detail::require(samples.size() >= 1, "bernstein_verify: empty input");
  detail::require(samples.allFinite() && (samples.array() >= 0.0).all(),
                  "bernstein_verify: samples must be finite and nonnegative");
  detail::require(psi1 >= 0.0, "bernstein_verify: psi1 must be >= 0");
  detail::require(z >= 1.0, "bernstein_verify: z must be >= 1");
  const double first = samples.mean();
  const double second = samples.array().square().mean();
  const double logEz = std::log(std::numbers::e * z);
  const double rhs =
      logEz * psi1 * first + (4.0 + 6.0 * logEz * logEz * psi1 * psi1) / (std::numbers::e * z);
  return second <= rhs;
}

double adamczak_bound(double expSup, double sigma, double bn, long n, double x, double alpha,
                      double K) {
  detail::require(expSup >= 0.0 && sigma >= 0.0 && bn >= 0.0 && x >= 0.0 && K >= 0.0,
                  "adamczak_bound: inputs must be nonnegative");
  detail::require(n >= 1, "adamczak_bound: n must be >= 1");
  detail::require(alpha > 0.0, "adamczak_bound: alpha must be > 0");
  const double nn = static_cast<double>(n);
  return (1.0 + alpha) * expSup + K * sigma * std::sqrt(x / nn) +
         K * (1.0 + 1.0 / alpha) * bn * x / nn;
}

double single_fn_bound(double Pg, double bnG, double Bn, long n, double x, double alpha,
                       double Kprime) {
  detail::require(alpha > 0.0 && alpha < 1.0, "single_fn_bound: alpha must lie in (0, 1)");
  detail::require(Pg >= 0.0 && bnG >= 0.0 && Bn >= 0.0 && x >= 0.0 && Kprime >= 0.0,
                  "single_fn_bound: inputs must be nonnegative");
  detail::require(n >= 1, "single_fn_bound: n must be >= 1");
  return (1.0 + 2.0 * alpha) * Pg +
         Kprime * (1.0 + 1.0 / alpha) * (bnG + Bn) * (x + 1.0) / static_cast<double>(n);
}

}  // namespace oraclebench
