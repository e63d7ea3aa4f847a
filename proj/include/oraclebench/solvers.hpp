#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "oraclebench/core_model.hpp"
#include "oraclebench/errors.hpp"

namespace oraclebench {

/// Euclidean projection onto { beta : ||beta||_1 <= r }.
///
/// Michelot's active-set iteration: the threshold theta is recomputed on the
/// coordinates still above it until the active set is stable.
template <typename Derived>
VectorX<typename Derived::Scalar> project_l1_ball(const Eigen::MatrixBase<Derived>& v,
                                                  typename Derived::Scalar r) {
  using Scalar = typename Derived::Scalar;
  detail::require(r >= Scalar(0), "project_l1_ball: radius must be >= 0");
  VectorX<Scalar> out = v;
  if (out.template lpNorm<1>() <= r) return out;
  if (r == Scalar(0)) return VectorX<Scalar>::Zero(v.size());

  const VectorX<Scalar> magnitude = v.cwiseAbs();
  std::vector<Eigen::Index> active;
  active.reserve(static_cast<std::size_t>(v.size()));
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (magnitude(i) > Scalar(0)) {
      active.push_back(i);
      sum += magnitude(i);
    }
  }
  Scalar theta = (sum - r) / static_cast<Scalar>(active.size());
  for (;;) {
    std::size_t kept = 0;
    sum = 0;
    for (Eigen::Index i : active) {
      if (magnitude(i) > theta) {
        active[kept++] = i;
        sum += magnitude(i);
      }
    }
    if (kept == active.size()) break;
    active.resize(kept);
    theta = (sum - r) / static_cast<Scalar>(kept);
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar shrunk = std::max(magnitude(i) - theta, Scalar(0));
    out(i) = v(i) < Scalar(0) ? -shrunk : shrunk;
  }
  return out;
}

template <typename Scalar>
struct RermSolution {
  VectorX<Scalar> beta;
  Scalar objective = 0;
  Scalar inner_radius = 0;
  Scalar optimality_gap = 0;
};

/// Iteration budget exhausted; `best` holds the best iterate reached.
template <typename Scalar>
class IterationLimitError : public SolverError {
 public:
  IterationLimitError(const std::string& what, RermSolution<Scalar> best)
      : SolverError(what), best(std::move(best)) {}
  RermSolution<Scalar> best;
};

namespace detail {

/// R_n^{(q)}(beta) = (1/n) sum |y_i - <x_i, beta>|^q with its gradient.
/// For q = 2 everything runs through the d x d Gram matrix.
template <typename Scalar>
class LqEmpiricalRisk {
 public:
  LqEmpiricalRisk(const Sample<Scalar>& sample, double q) : sample_(sample), q_(q) {
    const Scalar n = static_cast<Scalar>(sample.n());
    if (q_ == 2.0) {
      gram_ = sample.design().transpose() * sample.design() / n;
      cross_ = sample.design().transpose() * sample.response() / n;
      offset_ = sample.response().squaredNorm() / n;
    }
  }

  Eigen::Index dim() const { return sample_.d(); }
  bool quadratic() const { return q_ == 2.0; }

  Scalar value(const VectorX<Scalar>& beta) const {
    if (quadratic())
      return std::max(Scalar(0), offset_ - 2 * cross_.dot(beta) + beta.dot(gram_ * beta));
    return exact_value(beta);
  }

  Scalar exact_value(const VectorX<Scalar>& beta) const {
    const VectorX<Scalar> r = sample_.response() - sample_.design() * beta;
    if (quadratic()) return r.squaredNorm() / static_cast<Scalar>(sample_.n());
    return r.array().abs().pow(static_cast<Scalar>(q_)).mean();
  }

  VectorX<Scalar> gradient(const VectorX<Scalar>& beta) const {
    if (quadratic()) return 2 * (gram_ * beta - cross_);
    const VectorX<Scalar> r = sample_.response() - sample_.design() * beta;
    const VectorX<Scalar> w =
        r.array().sign() * r.array().abs().pow(static_cast<Scalar>(q_ - 1.0));
    return -static_cast<Scalar>(q_) / static_cast<Scalar>(sample_.n()) *
           (sample_.design().transpose() * w);
  }

  /// Curvature scale used for the first trial step.
  Scalar curvature(const VectorX<Scalar>& beta) const {
    if (quadratic()) {
      if (!lipschitz_) lipschitz_ = power_iteration();
      return *lipschitz_;
    }
    // Secant probe along the gradient direction.
    const VectorX<Scalar> g = gradient(beta);
    const Scalar gn = g.norm();
    if (gn == Scalar(0)) return Scalar(1);
    const Scalar h = Scalar(1e-3) * std::max(Scalar(1), beta.norm());
    const VectorX<Scalar> step = -h / gn * g;
    const Scalar probe = (gradient(beta + step) - g).norm() / h;
    return std::max(probe, std::numeric_limits<Scalar>::epsilon());
  }

  const Sample<Scalar>& sample() const { return sample_; }

 private:
  Scalar power_iteration() const {
    VectorX<Scalar> v = VectorX<Scalar>::Ones(dim()) / std::sqrt(static_cast<Scalar>(dim()));
    Scalar estimate = 0;
    for (int it = 0; it < 200; ++it) {
      const VectorX<Scalar> w = gram_ * v;
      const Scalar norm = w.norm();
      if (norm == Scalar(0)) return Scalar(1);
      const Scalar next = v.dot(w);
      v = w / norm;
      if (std::abs(next - estimate) <= Scalar(1e-10) * std::abs(next)) {
        estimate = next;
        break;
      }
      estimate = next;
    }
    // Lipschitz constant of 2 G beta; power iteration approaches from below.
    return Scalar(2.02) * std::max(estimate, std::numeric_limits<Scalar>::epsilon());
  }

  const Sample<Scalar>& sample_;
  double q_;
  MatrixX<Scalar> gram_;
  VectorX<Scalar> cross_;
  Scalar offset_ = 0;
  mutable std::optional<Scalar> lipschitz_;
};

template <typename Scalar>
struct InnerResult {
  VectorX<Scalar> beta;
  Scalar value = 0;
  Scalar residual = 0;
  bool converged = false;
};

/// min over ||beta||_1 <= radius of the empirical risk, by projected gradient
/// with halving backtracking (sufficient-decrease factor 1e-4).
template <typename Scalar>
InnerResult<Scalar> projected_gradient(const LqEmpiricalRisk<Scalar>& risk, Scalar radius,
                                       const VectorX<Scalar>& start, Scalar tol, long maxIter,
                                       Scalar& step) {
  constexpr Scalar kSufficientDecrease = Scalar(1e-4);
  InnerResult<Scalar> out;
  out.beta = project_l1_ball(start, radius);
  out.value = risk.value(out.beta);
  if (!(step > Scalar(0))) step = Scalar(1) / risk.curvature(out.beta);

  for (long it = 0; it < maxIter; ++it) {
    const VectorX<Scalar> g = risk.gradient(out.beta);
    // Near the optimum, decreases fall below the rounding error of the risk.
    const Scalar rounding =
        Scalar(16) * std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), out.value);
    VectorX<Scalar> trial;
    Scalar trialValue = 0;
    for (int halvings = 0;; ++halvings) {
      trial = project_l1_ball(out.beta - step * g, radius);
      // Gradient-mapping norm; it only grows as the step shrinks, so a pass
      // here certifies the current iterate.
      out.residual = (trial - out.beta).norm() / step;
      if (out.residual <= tol) {
        out.converged = true;
        return out;
      }
      trialValue = risk.value(trial);
      const VectorX<Scalar> move = trial - out.beta;
      bool accept = trialValue <= out.value + kSufficientDecrease * g.dot(move);
      if (!accept && trialValue <= out.value + rounding) {
        // Value differences are lost in rounding; fall back to the local
        // Lipschitz test step * |grad(trial) - grad(beta)| <= |move|.
        accept = step * (risk.gradient(trial) - g).norm() <= move.norm();
      }
      if (accept || halvings > 60) break;
      step /= 2;
    }
    out.beta = std::move(trial);
    out.value = trialValue;
    step *= 2;  // let the step recover after conservative backtracking
  }
  out.residual = (project_l1_ball(out.beta - step * risk.gradient(out.beta), radius) - out.beta)
                     .norm() / step;
  out.converged = out.residual <= tol;
  return out;
}

}  // namespace detail

/// Minimises R_n^{(q)}(beta) + penaltyCoef ||beta||_1^q.
///
/// Radius decomposition: the outer problem min_r V(r) + penaltyCoef r^q is
/// convex in r, with V(r) the empirical risk minimised over the l1 ball of
/// radius r. The outer search doubles r_max from 1 until the objective stops
/// decreasing, then runs golden-section search; each V(r) comes from
/// projected gradient, warm-started from the previous probe.
template <typename Scalar>
RermSolution<Scalar> solve_lq_rerm(const Sample<Scalar>& sample, double q, Scalar penaltyCoef,
                                   Scalar tol = Scalar(1e-8), long maxIter = 100000) {
  detail::require(q >= 2.0, "solve_lq_rerm: q must be >= 2");
  detail::require(penaltyCoef >= Scalar(0) && std::isfinite(static_cast<double>(penaltyCoef)),
                  "solve_lq_rerm: penaltyCoef must be >= 0");
  detail::require(tol > Scalar(0), "solve_lq_rerm: tol must be > 0");
  detail::require(maxIter >= 1, "solve_lq_rerm: maxIter must be >= 1");

  const detail::LqEmpiricalRisk<Scalar> risk(sample, q);
  const Scalar qq = static_cast<Scalar>(q);
  Scalar step = 0;
  VectorX<Scalar> warm = VectorX<Scalar>::Zero(sample.d());
  bool innerFailed = false;

  struct Probe {
    Scalar radius;
    Scalar objective;
    detail::InnerResult<Scalar> inner;
  };
  std::vector<Probe> probes;

  auto evaluate = [&](Scalar r) -> Scalar {
    const Scalar innerTol = Scalar(0.1) * tol / std::max(Scalar(1), 2 * r);
    detail::InnerResult<Scalar> inner = r == Scalar(0)
        ? detail::InnerResult<Scalar>{VectorX<Scalar>::Zero(sample.d()),
                                      risk.value(VectorX<Scalar>::Zero(sample.d())), 0, true}
        : detail::projected_gradient(risk, r, warm, innerTol, maxIter, step);
    innerFailed = innerFailed || !inner.converged;
    if (r > Scalar(0)) warm = inner.beta;
    const Scalar objective = inner.value + penaltyCoef * std::pow(r, qq);
    probes.push_back({r, objective, std::move(inner)});
    return objective;
  };

  auto finish = [&](Scalar outerGap) {
    const auto best = std::min_element(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) {
      return a.objective < b.objective;
    });
    RermSolution<Scalar> sol;
    sol.beta = best->inner.beta;
    sol.inner_radius = best->radius;
    const Scalar l1 = sol.beta.template lpNorm<1>();
    sol.objective = risk.exact_value(sol.beta) + penaltyCoef * std::pow(l1, qq);
    sol.optimality_gap = std::max(outerGap, best->inner.residual);
    return sol;
  };

  // Bracket: grow r_max until the outer objective no longer decreases.
  const Scalar flat = Scalar(1e-3) * tol;
  Scalar rMax = 1;
  Scalar previous = evaluate(Scalar(0));
  Scalar previousRadius = 0;
  int doublings = 0;
  for (;;) {
    const Scalar f = evaluate(rMax);
    if (f >= previous - flat || doublings >= 60) break;
    previous = f;
    previousRadius = rMax;
    rMax *= 2;
    ++doublings;
  }

  // Golden-section on [a, b]; the minimiser is no smaller than the radius two
  // doublings back, by convexity.
  Scalar a = doublings >= 2 ? previousRadius / 2 : Scalar(0);
  Scalar b = rMax;
  auto objectiveAt = [&](Scalar r) {
    for (const Probe& p : probes)
      if (p.radius == r) return p.objective;
    return evaluate(r);
  };
  Scalar fa = objectiveAt(a);
  Scalar fb = objectiveAt(b);
  const Scalar invPhi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar c = b - invPhi * (b - a);
  Scalar d = a + invPhi * (b - a);
  Scalar fc = evaluate(c);
  Scalar fd = evaluate(d);
  Scalar outerGap = std::numeric_limits<Scalar>::infinity();
  for (long it = 0; it < maxIter; ++it) {
    outerGap = std::max(fa, fb) - std::min({fa, fb, fc, fd});
    if (outerGap <= tol / 2 || b - a <= std::numeric_limits<Scalar>::epsilon() * (1 + b)) break;
    if (fc <= fd) {
      b = d;
      fb = fd;
      d = c;
      fd = fc;
      c = b - invPhi * (b - a);
      fc = evaluate(c);
    } else {
      a = c;
      fa = fc;
      c = d;
      fc = fd;
      d = a + invPhi * (b - a);
      fd = evaluate(d);
    }
  }
  outerGap = std::max(Scalar(0), outerGap);
  RermSolution<Scalar> sol = finish(outerGap);
  if (innerFailed && sol.optimality_gap > tol)
    throw IterationLimitError<Scalar>("solve_lq_rerm: inner projected gradient hit maxIter", sol);
  if (sol.optimality_gap > tol)
    throw IterationLimitError<Scalar>("solve_lq_rerm: outer search did not reach tol", sol);
  return sol;
}

/// (1/n) sum (Y_i - <X_i, beta>)^2 + kappa ||beta||_1^2 / n.
template <typename Scalar>
RermSolution<Scalar> solve_square_lasso(const Sample<Scalar>& sample, Scalar kappa,
                                        Scalar tol = Scalar(1e-8), long maxIter = 100000) {
  detail::require(kappa >= Scalar(0), "solve_square_lasso: kappa must be >= 0");
  return solve_lq_rerm(sample, 2.0, kappa / static_cast<Scalar>(sample.n()), tol, maxIter);
}

/// (1/n) sum (Y_i - <X_i, beta>)^2 + lambda1 ||beta||_1, by accelerated
/// proximal gradient with coordinatewise soft-thresholding. Stops when the
/// fixed-point residual of the proximal map is <= tol.
template <typename Scalar>
VectorX<Scalar> solve_lasso(const Sample<Scalar>& sample, Scalar lambda1,
                            Scalar tol = Scalar(1e-8), long maxIter = 100000) {
  detail::require(lambda1 >= Scalar(0), "solve_lasso: lambda1 must be >= 0");
  detail::require(tol > Scalar(0), "solve_lasso: tol must be > 0");
  const detail::LqEmpiricalRisk<Scalar> risk(sample, 2.0);
  const Scalar step = Scalar(1) / risk.curvature(VectorX<Scalar>::Zero(sample.d()));

  auto prox = [&](const VectorX<Scalar>& point) {
    const VectorX<Scalar> z = point - step * risk.gradient(point);
    const Scalar t = step * lambda1;
    return VectorX<Scalar>(z.unaryExpr([t](Scalar v) {
      return v > t ? v - t : (v < -t ? v + t : Scalar(0));
    }));
  };
  auto objective = [&](const VectorX<Scalar>& beta) {
    return risk.value(beta) + lambda1 * beta.template lpNorm<1>();
  };

  VectorX<Scalar> beta = VectorX<Scalar>::Zero(sample.d());
  VectorX<Scalar> momentum = beta;
  Scalar t = 1;
  for (long it = 0; it < maxIter; ++it) {
    VectorX<Scalar> next = prox(momentum);
    // Monotone restart keeps the objective nonincreasing.
    if (objective(next) > objective(beta)) {
      momentum = beta;
      t = 1;
      next = prox(beta);
    }
    const Scalar tNext = (1 + std::sqrt(1 + 4 * t * t)) / 2;
    momentum = next + ((t - 1) / tNext) * (next - beta);
    beta = std::move(next);
    t = tNext;
    if ((prox(beta) - beta).norm() / step <= tol) return beta;
  }
  RermSolution<Scalar> best{beta, objective(beta), beta.template lpNorm<1>(),
                            (prox(beta) - beta).norm() / step};
  throw IterationLimitError<Scalar>("solve_lasso: proximal gradient hit maxIter", best);
}

}  // namespace oraclebench
