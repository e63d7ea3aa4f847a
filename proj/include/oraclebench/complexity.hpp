#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "oraclebench/core_model.hpp"
#include "oraclebench/errors.hpp"
#include "oraclebench/parallel.hpp"
#include "oraclebench/rng.hpp"

namespace oraclebench {

/// ||P - P_n||_G = max_g |P g - P_n g|.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar sup_deviation(const Eigen::MatrixBase<DerivedA>& means,
                                        const Eigen::MatrixBase<DerivedB>& empiricalMeans) {
  detail::require(means.size() >= 1, "sup_deviation: empty class");
  detail::require(means.size() == empiricalMeans.size(), "sup_deviation: length mismatch");
  detail::require(means.allFinite() && empiricalMeans.allFinite(),
                  "sup_deviation: entries must be finite");
  return (means - empiricalMeans).cwiseAbs().maxCoeff();
}

/// A finite class restricted to the star hull V(G) at level lambda.
struct LocalizedSupInput {
  Eigen::VectorXd means;       // P g, nonnegative
  Eigen::VectorXd deviations;  // |(P - P_n) g|
  double level = 0.0;
};

/// sup over theta g in V(G) with P(theta g) <= level of |(P - P_n)(theta g)|.
///
/// The objective is linear in theta, so each member contributes
/// min(1, level / P g) * deviation; members with P g = 0 are never clipped.
double localized_sup_starhull(const LocalizedSupInput& input);

/// Population and empirical means of every class member on one sample.
struct ClassDraw {
  Eigen::VectorXd means;
  Eigen::VectorXd empirical_means;
};

using ClassSampler = std::function<ClassDraw(Engine&)>;

/// Replicated draws of a finite class, cached so that the localized supremum
/// can be evaluated at many levels with common random numbers. This makes the
/// estimated map level -> E ||P - P_n||_{V(G)_level} exactly nondecreasing.
class LocalizedProcess {
 public:
  static LocalizedProcess sample(const ClassSampler& sampler, long replications,
                                 std::uint64_t masterSeed, unsigned workers = 1);

  RiskEstimate sup_at(double level) const;
  long replications() const { return static_cast<long>(deviations_.size()); }

 private:
  std::vector<Eigen::VectorXd> means_;
  std::vector<Eigen::VectorXd> deviations_;
};

/// Monte Carlo estimate of E ||P - P_n||_{V(G)_level}. Replication i uses the
/// stream derive_seed(masterSeed, 0, 0, i).
RiskEstimate expected_localized_sup(const ClassSampler& sampler, double level, long replications,
                                    std::uint64_t masterSeed, unsigned workers = 1);

/// Smallest lambda (within tol) with phi(lambda) <= (epsilon/4) lambda.
///
/// The lower bracket is tol. bracketHi is doubled up to 60 times until it
/// satisfies the inequality; otherwise BracketError.
double fixed_point_lambda(const std::function<double(double)>& phi, double epsilon,
                          double bracketHi, double tol);

struct PeelingBound {
  double value = 0.0;
  int first_level = 0;  // smallest i with 2^{i+1} lambda >= R*; iMax + 1 if none
};

/// sum over i in [0, iMax] with 2^{i+1} lambda >= R* of 2^{-i} bound(2^{i+1} lambda).
PeelingBound peeling_bound(const std::function<double(double)>& perLevelBound, double lambda,
                           double Rstar, int iMax);

/// Covering-number estimates for a finite point set (rows) in the sup metric.
///
/// For every prefix of the point list a farthest-point traversal is run from
/// its first point; the estimate at radius r is the largest traversal count
/// over all prefixes. Each count is the size of an r-separated subset, so the
/// estimate lies between N(T, r) and N(T, r/2). It is nonincreasing in r and
/// never decreases when points are appended.
class GreedyCover {
 public:
  explicit GreedyCover(const Eigen::MatrixXd& points);

  long count(double radius) const;
  double diameter() const { return diameter_; }
  long distinct_points() const { return count(0.0); }

 private:
  // Sorted descending; count(r) over a prefix is 1 + #{d > r}.
  std::vector<std::vector<double>> prefixSteps_;
  double diameter_ = 0.0;
};

long covering_number(const Eigen::MatrixXd& points, double radius);

/// Dudley entropy integral of sqrt(log N(T, d_inf, e)) over [0, diam], on the
/// geometric grid diam / 2^k, k = 0..scales. The step integrand is integrated
/// exactly on each cell; the last cell [0, diam / 2^scales] is bounded by
/// its left-end value.
double dudley_gamma2(const Eigen::MatrixXd& points, int scales = 20);

/// Maurey bound on gamma_2 of an l1 ball of radius r under coordinate projections:
/// c0 r max_i |X_i|_inf log(d) max(1, log(sqrt(n) / log d)).
double maurey_l1_gamma2(double r, double maxXinf, double n, double d, double c0 = 1.0);

/// Bound on E ||P - P_n|| over an L_q loss class localized at mu.
double lq_localized_bound(double mu, double Un, double M, long n, double q, double c0 = 1.0);

/// A nondecreasing map on r >= 0, either in closed form or tabulated on a grid.
class MonotoneMap {
 public:
  MonotoneMap() : fn_([](double) { return 0.0; }) {}
  explicit MonotoneMap(std::function<double(double)> closedForm) : fn_(std::move(closedForm)) {}
  /// Piecewise-linear interpolation of (grid, values); constant beyond the ends.
  MonotoneMap(std::vector<double> grid, std::vector<double> values);

  double operator()(double r) const;
  bool tabulated() const { return !grid_.empty(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::function<double(double)> fn_;
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// r -> lambda*_eps(r), B_n(r), phi_n(r) for a family (F_r) of models.
struct ComplexityProfile {
  MonotoneMap lambda_star;
  MonotoneMap bn;
  MonotoneMap phi_n;
  double epsilon = 0.25;
  double n = 1.0;
};

struct ProfileConstants {
  double c0 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

/// h(n, d) = K(d)^q (log n)^{(4q-2)/q} (log d)^2.
double theorem_c_h(double n, double d, double q, double Kd);

/// Closed-form profile of the l1-ball family under L_q loss:
///   lambda*(r) = c2 (1+r)^q h(n,d) / (n eps^2)
///   B_n(r)     = c0 (2K(d))^q (1+r)^q log(en)
///   phi_n(r)   = c3 K(d)^q log(n) (1+r)^q
ComplexityProfile theorem_c_profile(double n, double d, double q, double Kd, double epsilon,
                                    const ProfileConstants& constants = {});

}  // namespace oraclebench
