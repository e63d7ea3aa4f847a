#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oraclebench/core_model.hpp"
#include "oraclebench/rng.hpp"

using namespace oraclebench;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Model whose empirical risks under squared loss against zero responses are `risks`.
std::pair<FiniteModel<double>, SampleD> model_with_risks(const Eigen::VectorXd& risks) {
  Eigen::MatrixXd preds(risks.size(), 1);
  preds.col(0) = risks.cwiseSqrt();
  return {FiniteModel<double>(preds), SampleD(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1))};
}

}  // namespace

TEST_CASE("Sample validates its shape and entries") {
  CHECK_NOTHROW(SampleD(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Zero(3)));
  CHECK_THROWS_AS(SampleD(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Zero(2)), InvalidInput);
  CHECK_THROWS_AS(SampleD(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)), InvalidInput);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SampleD(bad, Eigen::VectorXd::Zero(2)), InvalidInput);
  const SampleD s(Eigen::MatrixXd::Ones(4, 3), Eigen::VectorXd::Zero(4));
  CHECK(s.n() == 4);
  CHECK(s.d() == 3);
}

TEST_CASE("LossSpec") {
  CHECK_THROWS_AS(LossSpec::lq(1.5), InvalidInput);
  const LossSpec l2 = LossSpec::lq(2.0);
  CHECK(l2(1.0, 3.0) == doctest::Approx(4.0));
  CHECK(LossSpec::lq(3.0)(0.0, -2.0) == doctest::Approx(8.0));
  const LossSpec zo = LossSpec::zero_one();
  CHECK(zo(0.0, 1.0) == 0.0);
  CHECK(zo(-0.5, 1.0) == 1.0);
  CHECK(zo(-0.5, -1.0) == 0.0);
  CHECK_THROWS_AS(zo(1.0, 0.0), InvalidInput);
}

TEST_CASE("empirical_risk examples") {
  CHECK(empirical_risk(vec({0, 0, 0, 0})) == 0.0);
  CHECK(empirical_risk(vec({1, 3})) == 2.0);
  const SampleD one(Eigen::MatrixXd::Ones(1, 1), vec({3}));
  CHECK(linear_empirical_risk(vec({1}), one, LossSpec::lq(2.0)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(empirical_risk(vec({1, std::numeric_limits<double>::infinity()})), InvalidInput);
  CHECK_THROWS_AS(empirical_risk(vec({1, -1})), InvalidInput);
  CHECK_THROWS_AS(empirical_risk(Eigen::VectorXd(0)), InvalidInput);
}

TEST_CASE("empirical_risk is permutation invariant") {
  Engine engine = make_engine(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const long n = 50;
    Eigen::VectorXd pred(n), y(n);
    for (long i = 0; i < n; ++i) {
      pred(i) = g(engine);
      y(i) = g(engine);
    }
    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), engine);
    Eigen::VectorXd pp(n), yp(n);
    for (long i = 0; i < n; ++i) {
      pp(i) = pred(perm[i]);
      yp(i) = y(perm[i]);
    }
    const LossSpec loss = LossSpec::lq(2.5);
    CHECK(empirical_risk(pred, y, loss) == doctest::Approx(empirical_risk(pp, yp, loss)).epsilon(1e-14));
  }
}

TEST_CASE("zero-one empirical risk lies in [0, 1]; Lq risk is homogeneous of degree q") {
  Engine engine = make_engine(2);
  std::normal_distribution<double> g;
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 20; ++trial) {
    const long n = 30;
    Eigen::VectorXd pred(n), labels(n), y(n);
    for (long i = 0; i < n; ++i) {
      pred(i) = g(engine);
      labels(i) = coin(engine) ? 1.0 : -1.0;
      y(i) = g(engine);
    }
    const double r01 = empirical_risk(pred, labels, LossSpec::zero_one());
    CHECK(r01 >= 0.0);
    CHECK(r01 <= 1.0);
    for (double q : {2.0, 3.0, 4.5}) {
      const double c = 1.7;
      const double base = empirical_risk(pred, y, LossSpec::lq(q));
      const Eigen::VectorXd sp = c * pred, sy = c * y;
      CHECK(empirical_risk(sp, sy, LossSpec::lq(q)) ==
            doctest::Approx(std::pow(c, q) * base).epsilon(1e-12));
    }
  }
}

TEST_CASE("erm_finite examples") {
  {
    auto [model, sample] = model_with_risks(vec({0.7}));
    CHECK(erm_finite(model, sample, LossSpec::lq(2.0)) == 0);
  }
  {
    auto [model, sample] = model_with_risks(vec({0.5, 0.3}));
    CHECK(erm_finite(model, sample, LossSpec::lq(2.0)) == 1);
    // 0.5 is within slack 0.25 of the minimum, so the lower index wins.
    CHECK(erm_finite(model, sample, LossSpec::lq(2.0), 0.25) == 0);
  }
  {
    auto [model, sample] = model_with_risks(vec({0.4, 0.4}));
    CHECK(erm_finite(model, sample, LossSpec::lq(2.0)) == 0);
  }
  auto [model, sample] = model_with_risks(vec({0.4}));
  CHECK_THROWS_AS(erm_finite(model, sample, LossSpec::lq(2.0), -1.0), InvalidInput);
  CHECK_THROWS_AS(FiniteModel<double>(Eigen::MatrixXd(0, 3)), InvalidInput);
}

TEST_CASE("erm_finite ignores appended functions with strictly larger risk") {
  Engine engine = make_engine(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd risks(5);
    for (int j = 0; j < 5; ++j) risks(j) = u(engine);
    auto [model, sample] = model_with_risks(risks);
    const Eigen::Index chosen = erm_finite(model, sample, LossSpec::lq(2.0));
    Eigen::VectorXd extended(8);
    extended << risks, risks.maxCoeff() + 0.1, risks.maxCoeff() + 1.0, risks.maxCoeff() + 0.5;
    auto [bigger, sample2] = model_with_risks(extended);
    CHECK(erm_finite(bigger, sample2, LossSpec::lq(2.0)) == chosen);
  }
}

TEST_CASE("risk_estimate") {
  Engine engine = make_engine(4);
  auto noiseGenerator = [](long m, Engine& e) {
    std::normal_distribution<double> g;
    Eigen::VectorXd y(m);
    for (long i = 0; i < m; ++i) y(i) = g(e);
    return SampleD(Eigen::MatrixXd::Ones(m, 1), y);
  };
  auto zero = [](const Eigen::MatrixXd& X) { return Eigen::VectorXd::Zero(X.rows()).eval(); };

  const RiskEstimate e = risk_estimate(zero, noiseGenerator, LossSpec::lq(2.0), 100000, engine);
  CHECK(e.count == 100000);
  CHECK(std::abs(e.mean - 1.0) <= 4.0 * e.standard_error);

  auto noiseless = [](long m, Engine&) {
    return SampleD(Eigen::MatrixXd::Ones(m, 1), Eigen::VectorXd::Constant(m, 2.0));
  };
  auto two = [](const Eigen::MatrixXd& X) { return Eigen::VectorXd::Constant(X.rows(), 2.0).eval(); };
  CHECK(risk_estimate(two, noiseless, LossSpec::lq(2.0), 10, engine).mean == 0.0);

  auto labels = [](long m, Engine&) {
    return SampleD(Eigen::MatrixXd::Ones(m, 1), Eigen::VectorXd::Ones(m));
  };
  auto positive = [](const Eigen::MatrixXd& X) { return Eigen::VectorXd::Ones(X.rows()).eval(); };
  const RiskEstimate agree = risk_estimate(positive, labels, LossSpec::zero_one(), 50, engine);
  CHECK(agree.mean == 0.0);
  CHECK(agree.standard_error == 0.0);

  CHECK_THROWS_AS(risk_estimate(zero, noiseGenerator, LossSpec::lq(2.0), 1, engine), InvalidInput);
}

TEST_CASE("summarize_losses uses the sample standard deviation") {
  const RiskEstimate e = summarize_losses(vec({1, 2, 3, 4}));
  // sd = sqrt(((1.5^2 + 0.5^2) * 2) / 3)
  CHECK(e.mean == doctest::Approx(2.5));
  CHECK(e.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("L1BallModel") {
  CHECK_THROWS_AS(L1BallModel(-1.0), InvalidInput);
  const L1BallModel ball(2.0);
  CHECK(ball.contains(vec({1.0, -1.0})));
  CHECK_FALSE(ball.contains(vec({1.5, -1.0})));
  CHECK(ball.contains(vec({1.5, -1.0}), 0.5));
}
