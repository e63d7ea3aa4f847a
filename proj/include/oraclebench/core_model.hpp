#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <utility>

#include "oraclebench/errors.hpp"

namespace oraclebench {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Observations (X_i, Y_i), i = 1..n: an n x d design and n responses.
template <typename Scalar>
class Sample {
 public:
  Sample(MatrixX<Scalar> design, VectorX<Scalar> response)
      : design_(std::move(design)), response_(std::move(response)) {
    detail::require(design_.rows() >= 1 && design_.cols() >= 1,
                    "Sample: design must have n >= 1 rows and d >= 1 columns");
    detail::require(response_.size() == design_.rows(),
                    "Sample: response length must equal the number of rows");
    detail::require(design_.allFinite() && response_.allFinite(),
                    "Sample: entries must be finite");
  }

  const MatrixX<Scalar>& design() const { return design_; }
  const VectorX<Scalar>& response() const { return response_; }
  Eigen::Index n() const { return design_.rows(); }
  Eigen::Index d() const { return design_.cols(); }

 private:
  MatrixX<Scalar> design_;
  VectorX<Scalar> response_;
};

using SampleD = Sample<double>;

/// L_q loss |y - f(x)|^q (q >= 2) or the sign-disagreement 0-1 loss.
///
/// The 0-1 loss uses labels in {-1, +1}; a prediction p is read as the label
/// +1 when p >= 0 and -1 otherwise.
class LossSpec {
 public:
  enum class Kind { Lq, ZeroOne };

  static LossSpec lq(double q) {
    detail::require(std::isfinite(q) && q >= 2.0, "LossSpec: L_q loss requires q >= 2");
    return LossSpec(Kind::Lq, q);
  }
  static LossSpec zero_one() { return LossSpec(Kind::ZeroOne, 0.0); }

  Kind kind() const { return kind_; }
  double q() const { return q_; }

  template <typename Scalar>
  Scalar operator()(Scalar prediction, Scalar response) const {
    if (kind_ == Kind::ZeroOne) {
      detail::require(response == Scalar(1) || response == Scalar(-1),
                      "LossSpec: 0-1 loss requires responses in {-1, +1}");
      const Scalar label = prediction >= Scalar(0) ? Scalar(1) : Scalar(-1);
      return label == response ? Scalar(0) : Scalar(1);
    }
    const Scalar r = std::abs(response - prediction);
    if (q_ == 2.0) return r * r;
    return std::pow(r, static_cast<Scalar>(q_));
  }

 private:
  LossSpec(Kind kind, double q) : kind_(kind), q_(q) {}
  Kind kind_;
  double q_;
};

/// M candidate functions given by their values on the n sample points.
template <typename Scalar>
class FiniteModel {
 public:
  explicit FiniteModel(MatrixX<Scalar> predictions,
                       std::optional<VectorX<Scalar>> trueRisks = std::nullopt)
      : predictions_(std::move(predictions)), trueRisks_(std::move(trueRisks)) {
    detail::require(predictions_.rows() >= 1, "FiniteModel: empty model (M = 0)");
    detail::require(predictions_.allFinite(), "FiniteModel: predictions must be finite");
    if (trueRisks_) {
      detail::require(trueRisks_->size() == predictions_.rows(),
                      "FiniteModel: trueRisks must have length M");
      detail::require(trueRisks_->allFinite() && (trueRisks_->array() >= Scalar(0)).all(),
                      "FiniteModel: trueRisks must be finite and nonnegative");
    }
  }

  const MatrixX<Scalar>& predictions() const { return predictions_; }
  const std::optional<VectorX<Scalar>>& trueRisks() const { return trueRisks_; }
  Eigen::Index size() const { return predictions_.rows(); }

 private:
  MatrixX<Scalar> predictions_;
  std::optional<VectorX<Scalar>> trueRisks_;
};

/// F_r = { x -> <x, beta> : ||beta||_1 <= r }.
struct L1BallModel {
  double radius = 0.0;

  explicit L1BallModel(double r) : radius(r) {
    detail::require(std::isfinite(r) && r >= 0.0, "L1BallModel: radius must be >= 0");
  }
  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& beta, double tol = 0.0) const {
    return static_cast<double>(beta.template lpNorm<1>()) <= radius + tol;
  }
};

/// Monte Carlo estimate of a population mean.
struct RiskEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  long count = 0;
};

/// Per-sample losses l_f(Z_i) for predictions f(X_i).
template <typename DerivedP, typename DerivedY>
VectorX<typename DerivedP::Scalar> loss_values(const Eigen::MatrixBase<DerivedP>& predictions,
                                               const Eigen::MatrixBase<DerivedY>& responses,
                                               const LossSpec& loss) {
  using Scalar = typename DerivedP::Scalar;
  detail::require(predictions.size() == responses.size(),
                  "loss_values: predictions and responses differ in length");
  VectorX<Scalar> out(predictions.size());
  for (Eigen::Index i = 0; i < predictions.size(); ++i)
    out(i) = loss(predictions(i), static_cast<Scalar>(responses(i)));
  return out;
}

/// R_n = mean of the per-sample losses.
template <typename Derived>
typename Derived::Scalar empirical_risk(const Eigen::MatrixBase<Derived>& losses) {
  detail::require(losses.size() >= 1, "empirical_risk: need at least one loss value");
  detail::require(losses.allFinite(), "empirical_risk: non-finite loss value");
  detail::require((losses.array() >= 0).all(), "empirical_risk: negative loss value");
  return losses.mean();
}

template <typename DerivedP, typename DerivedY>
typename DerivedP::Scalar empirical_risk(const Eigen::MatrixBase<DerivedP>& predictions,
                                         const Eigen::MatrixBase<DerivedY>& responses,
                                         const LossSpec& loss) {
  return empirical_risk(loss_values(predictions, responses, loss));
}

/// Empirical risk of the linear predictor x -> <x, beta>.
template <typename Scalar, typename Derived>
Scalar linear_empirical_risk(const Eigen::MatrixBase<Derived>& beta, const Sample<Scalar>& sample,
                             const LossSpec& loss) {
  detail::require(beta.size() == sample.d(), "linear_empirical_risk: beta has wrong dimension");
  const VectorX<Scalar> predictions = sample.design() * beta;
  return empirical_risk(predictions, sample.response(), loss);
}

/// Smallest index whose empirical risk is within `slack` of the minimum.
template <typename Scalar>
Eigen::Index erm_finite(const FiniteModel<Scalar>& model, const Sample<Scalar>& sample,
                        const LossSpec& loss, double slack = 0.0) {
  detail::require(slack >= 0.0, "erm_finite: slack must be >= 0");
  detail::require(model.predictions().cols() == sample.n(),
                  "erm_finite: model predictions must have one column per sample");
  VectorX<Scalar> risks(model.size());
  for (Eigen::Index j = 0; j < model.size(); ++j)
    risks(j) = empirical_risk(model.predictions().row(j).transpose(), sample.response(), loss);
  const Scalar best = risks.minCoeff();
  for (Eigen::Index j = 0; j < model.size(); ++j)
    if (risks(j) <= best + static_cast<Scalar>(slack)) return j;
  return 0;  // unreachable: the minimiser itself qualifies
}

/// Mean and standard error of a vector of losses (count >= 2).
template <typename Derived>
RiskEstimate summarize_losses(const Eigen::MatrixBase<Derived>& losses) {
  const Eigen::Index m = losses.size();
  detail::require(m >= 2, "risk_estimate: testSize must be >= 2");
  detail::require(losses.allFinite(), "risk_estimate: non-finite loss value");
  const double mean = static_cast<double>(losses.mean());
  const double ss = (losses.array().template cast<double>() - mean).square().sum();
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));
  return {mean, sd / std::sqrt(static_cast<double>(m)), static_cast<long>(m)};
}

/// Monte Carlo estimate of R(f) = E l_f(Z) on a fresh sample.
///
/// `generator(testSize, rng)` returns a Sample; `predictor(design)` returns the
/// prediction vector for every row of `design`.
template <typename Predictor, typename Generator, typename Rng>
RiskEstimate risk_estimate(Predictor&& predictor, Generator&& generator, const LossSpec& loss,
                           long testSize, Rng& rng) {
  detail::require(testSize >= 2, "risk_estimate: testSize must be >= 2");
  const auto sample = generator(testSize, rng);
  const auto predictions = predictor(sample.design());
  return summarize_losses(loss_values(predictions, sample.response(), loss));
}

}  // namespace oraclebench
