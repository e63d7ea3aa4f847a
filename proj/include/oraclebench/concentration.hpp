#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "oraclebench/errors.hpp"

namespace oraclebench {

/// Empirical Orlicz psi_alpha norm: the smallest c with
/// (1/m) sum exp(|x_i|^alpha / c^alpha) <= 2.
struct PsiNormEstimate {
  double alpha = 1.0;
  double value = 0.0;
  long sample_count = 0;
};

/// Bernstein constant B_n for P l^2 <= B_n P l + B_n^2 / n.
struct BernsteinCertificate {
  double bn = 0.0;
  double residual = 0.0;  // B_n^2 / n
  bool checked = false;
};

inline constexpr double kDefaultPsiTol = 1e-10;

PsiNormEstimate psi_alpha_norm(const Eigen::Ref<const Eigen::VectorXd>& samples, double alpha,
                               double tol = kDefaultPsiTol);

template <typename Derived>
PsiNormEstimate psi_alpha_norm(const Eigen::MatrixBase<Derived>& samples, double alpha,
                               double tol = kDefaultPsiTol) {
  const Eigen::VectorXd values = samples.template cast<double>().reshaped();
  return psi_alpha_norm(Eigen::Ref<const Eigen::VectorXd>(values), alpha, tol);
}

/// b_n(G): psi_1 norm of max_i sup_g |g(Z_i)| across replications.
/// Each inner vector holds the per-sample envelope values sup_g |g(Z_i)|.
double envelope_bn(std::span<const std::vector<double>> classValues, double tol = kDefaultPsiTol);
double envelope_bn(const Eigen::MatrixXd& classValues, double tol = kDefaultPsiTol);

/// sigma(G) = sup_g sqrt(P g^2).
double sigma_g(const Eigen::Ref<const Eigen::VectorXd>& secondMoments);

BernsteinCertificate bernstein_from_psi1(double psi1, long n, double c0 = 1.0);

/// Empirical-moment check of
///   E X^2 <= log(ez) |X|_psi1 E X + (4 + 6 log^2(ez) |X|_psi1^2) / (ez).
bool bernstein_verify(const Eigen::Ref<const Eigen::VectorXd>& samples, double psi1, double z);

/// (1+a) E sup + K sigma sqrt(x/n) + K (1 + 1/a) b_n x / n.
double adamczak_bound(double expSup, double sigma, double bn, long n, double x, double alpha,
                      double K = 1.0);

/// (1+2a) P g + K' (1 + 1/a) (b_n(g) + B_n) (x+1)/n, for 0 < a < 1.
double single_fn_bound(double Pg, double bnG, double Bn, long n, double x, double alpha,
                       double Kprime = 1.0);

}  // namespace oraclebench
