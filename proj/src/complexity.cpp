#include "oraclebench/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oraclebench {
namespace {

void require_epsilon(double epsilon, const char* where) {
  detail::require(epsilon > 0.0 && epsilon < 0.5,
                  std::string(where) + ": epsilon must lie in (0, 1/2)");
}

RiskEstimate mean_and_stderr(const Eigen::VectorXd& values) {
  const long m = static_cast<long>(values.size());
  const double mean = values.mean();
  double se = 0.0;
  if (m >= 2) se = std::sqrt((values.array() - mean).square().sum() / (m - 1) / m);
  return {mean, se, m};
}

}  // namespace

double localized_sup_starhull(const LocalizedSupInput& input) {
  detail::require(input.means.size() >= 1, "localized_sup_starhull: empty class");
  detail::require(input.means.size() == input.deviations.size(),
                  "localized_sup_starhull: means and deviations differ in length");
  detail::require(input.means.allFinite() && input.deviations.allFinite(),
                  "localized_sup_starhull: entries must be finite");
  detail::require((input.means.array() >= 0.0).all(),
                  "localized_sup_starhull: negative mean");
  detail::require((input.deviations.array() >= 0.0).all(),
                  "localized_sup_starhull: deviations are absolute values");
  detail::require(input.level >= 0.0, "localized_sup_starhull: level must be >= 0");

  double best = 0.0;
  for (Eigen::Index j = 0; j < input.means.size(); ++j) {
    const double mean = input.means(j);
    const double theta = mean > input.level ? input.level / mean : 1.0;
    best = std::max(best, theta * input.deviations(j));
  }
  return best;
}

LocalizedProcess LocalizedProcess::sample(const ClassSampler& sampler, long replications,
                                          std::uint64_t masterSeed, unsigned workers) {
  detail::require(replications >= 1, "expected_localized_sup: replications must be >= 1");
  LocalizedProcess process;
  process.means_.resize(static_cast<std::size_t>(replications));
  process.deviations_.resize(static_cast<std::size_t>(replications));
  parallel_for(static_cast<std::size_t>(replications), workers, [&](std::size_t i) {
    Engine engine = make_engine(derive_seed(masterSeed, 0, 0, i));
    ClassDraw draw = sampler(engine);
    detail::require(draw.means.size() == draw.empirical_means.size(),
                    "expected_localized_sup: sampler returned mismatched vectors");
    process.deviations_[i] = (draw.means - draw.empirical_means).cwiseAbs();
    process.means_[i] = std::move(draw.means);
  });
  return process;
}

RiskEstimate LocalizedProcess::sup_at(double level) const {
  Eigen::VectorXd values(static_cast<Eigen::Index>(means_.size()));
  for (std::size_t i = 0; i < means_.size(); ++i)
    values(static_cast<Eigen::Index>(i)) =
        localized_sup_starhull({means_[i], deviations_[i], level});
  return mean_and_stderr(values);
}

RiskEstimate expected_localized_sup(const ClassSampler& sampler, double level, long replications,
                                    std::uint64_t masterSeed, unsigned workers) {
  return LocalizedProcess::sample(sampler, replications, masterSeed, workers).sup_at(level);
}

double fixed_point_lambda(const std::function<double(double)>& phi, double epsilon,
                          double bracketHi, double tol) {
  require_epsilon(epsilon, "fixed_point_lambda");
  detail::require(tol > 0.0, "fixed_point_lambda: tol must be > 0");
  detail::require(bracketHi > 0.0 && std::isfinite(bracketHi),
                  "fixed_point_lambda: bracketHi must be positive");
  const double slope = epsilon / 4.0;
  auto admissible = [&](double lambda) { return phi(lambda) <= slope * lambda; };

  double lo = tol;
  if (admissible(lo)) return lo;
  double hi = std::max(bracketHi, tol);
  int doublings = 0;
  while (!admissible(hi)) {
    if (doublings == 60)
      throw BracketError("fixed_point_lambda: phi(lambda) > (epsilon/4) lambda up to " +
                         std::to_string(hi) + "; enlarge bracketHi");
    lo = std::max(lo, hi);
    hi *= 2.0;
    ++doublings;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (admissible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

PeelingBound peeling_bound(const std::function<double(double)>& perLevelBound, double lambda,
                           double Rstar, int iMax) {
  detail::require(lambda > 0.0, "peeling_bound: lambda must be > 0");
  detail::require(iMax >= 0, "peeling_bound: iMax must be >= 0");
  PeelingBound out{0.0, iMax + 1};
  for (int i = 0; i <= iMax; ++i) {
    const double level = std::ldexp(lambda, i + 1);
    if (level < Rstar) continue;
    if (out.first_level > i) out.first_level = i;
    const double bound = perLevelBound(level);
    detail::require(bound >= 0.0, "peeling_bound: perLevelBound must be nonnegative");
    out.value += std::ldexp(bound, -i);
  }
  return out;
}

GreedyCover::GreedyCover(const Eigen::MatrixXd& points) {
  const Eigen::Index m = points.rows();
  detail::require(m >= 1, "covering_number: empty point set");
  detail::require(points.allFinite(), "covering_number: points must be finite");

  Eigen::MatrixXd dist(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    dist(a, a) = 0.0;
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double v = points.cols() == 0 ? 0.0 : (points.row(a) - points.row(b)).cwiseAbs().maxCoeff();
      dist(a, b) = v;
      dist(b, a) = v;
    }
  }
  diameter_ = dist.maxCoeff();

  prefixSteps_.reserve(static_cast<std::size_t>(m));
  std::vector<double> toCenters;
  for (Eigen::Index k = 1; k <= m; ++k) {
    toCenters.assign(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index j = 0; j < k; ++j) toCenters[j] = dist(0, j);
    std::vector<double> steps;
    for (;;) {
      const auto far = std::max_element(toCenters.begin(), toCenters.end());
      if (*far <= 0.0) break;
      steps.push_back(*far);
      const Eigen::Index c = far - toCenters.begin();
      for (Eigen::Index j = 0; j < k; ++j) toCenters[j] = std::min(toCenters[j], dist(c, j));
    }
    prefixSteps_.push_back(std::move(steps));
  }
}

long GreedyCover::count(double radius) const {
  detail::require(radius >= 0.0, "covering_number: radius must be >= 0");
  long best = 1;
  for (const auto& steps : prefixSteps_) {
    // steps are nonincreasing: count those strictly above the radius.
    const auto above = std::partition_point(steps.begin(), steps.end(),
                                            [radius](double d) { return d > radius; });
    best = std::max(best, 1 + static_cast<long>(above - steps.begin()));
  }
  return best;
}

long covering_number(const Eigen::MatrixXd& points, double radius) {
  detail::require(radius > 0.0, "covering_number: radius must be > 0");
  return GreedyCover(points).count(radius);
}

double dudley_gamma2(const Eigen::MatrixXd& points, int scales) {
  detail::require(scales >= 1, "dudley_gamma2: scales must be >= 1");
  const GreedyCover cover(points);
  const double diam = cover.diameter();
  if (diam == 0.0) return 0.0;

  const double lower = std::ldexp(diam, -scales);
  auto integrand = [&](double r) { return std::sqrt(std::log(static_cast<double>(cover.count(r)))); };

  // Traversal distances are pairwise distances, so these cuts contain every
  // breakpoint of the step integrand.
  std::vector<double> cuts;
  for (int k = 0; k <= scales; ++k) cuts.push_back(std::ldexp(diam, -k));
  const Eigen::Index m = points.rows();
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double v = (points.row(a) - points.row(b)).cwiseAbs().maxCoeff();
      if (v > lower && v < diam) cuts.push_back(v);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = lower * integrand(0.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // count is right-continuous, constant on [cuts[i], cuts[i+1]).
    total += (cuts[i + 1] - cuts[i]) * integrand(cuts[i]);
  }
  return total;
}

double maurey_l1_gamma2(double r, double maxXinf, double n, double d, double c0) {
  detail::require(r >= 0.0 && maxXinf >= 0.0, "maurey_l1_gamma2: r and maxXinf must be >= 0");
  detail::require(n >= 1.0, "maurey_l1_gamma2: n must be >= 1");
  detail::require(d >= 2.0, "maurey_l1_gamma2: d must be >= 2");
  const double logD = std::log(d);
  const double lastLog = std::max(1.0, std::log(std::sqrt(n) / logD));
  return c0 * r * maxXinf * logD * lastLog;
}

double lq_localized_bound(double mu, double Un, double M, long n, double q, double c0) {
  detail::require(q >= 2.0, "lq_localized_bound: q must be >= 2");
  detail::require(n >= 2, "lq_localized_bound: n must be >= 2");
  detail::require(mu >= 0.0 && Un >= 0.0 && M >= 0.0 && c0 >= 0.0,
                  "lq_localized_bound: inputs must be nonnegative");
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(mu * Un / nn);
  if (q == 2.0) return c0 * std::max(root, Un / nn);
  const double mLogN = M * std::log(nn);
  const double inflate = std::pow(mLogN, (q - 2.0) / q);
  return c0 * std::max({root * std::sqrt(inflate), Un / nn * inflate, mLogN / nn});
}

MonotoneMap::MonotoneMap(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  detail::require(!grid_.empty() && grid_.size() == values_.size(),
                  "MonotoneMap: grid and values must be nonempty and equal in length");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    detail::require(grid_[i] > grid_[i - 1], "MonotoneMap: grid must be strictly increasing");
    detail::require(values_[i] >= values_[i - 1], "MonotoneMap: values must be nondecreasing");
  }
}

double MonotoneMap::operator()(double r) const {
  if (grid_.empty()) return fn_(r);
  if (r <= grid_.front()) return values_.front();
  if (r >= grid_.back()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
  const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
  const std::size_t lo = hi - 1;
  const double t = (r - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

double theorem_c_h(double n, double d, double q, double Kd) {
  detail::require(n >= 2.0 && d >= 2.0, "theorem_c_h: n and d must be >= 2");
  detail::require(q >= 2.0, "theorem_c_h: q must be >= 2");
  detail::require(Kd > 0.0, "theorem_c_h: K(d) must be > 0");
  const double logD = std::log(d);
  return std::pow(Kd, q) * std::pow(std::log(n), (4.0 * q - 2.0) / q) * logD * logD;
}

ComplexityProfile theorem_c_profile(double n, double d, double q, double Kd, double epsilon,
                                    const ProfileConstants& constants) {
  require_epsilon(epsilon, "theorem_c_profile");
  const double h = theorem_c_h(n, d, q, Kd);
  const double c0 = constants.c0, c2 = constants.c2, c3 = constants.c3;
  ComplexityProfile profile;
  profile.epsilon = epsilon;
  profile.n = n;
  profile.lambda_star = MonotoneMap([=](double r) {
    return c2 * std::pow(1.0 + r, q) * h / (n * epsilon * epsilon);
  });
  profile.bn = MonotoneMap([=](double r) {
    return c0 * std::pow(2.0 * Kd, q) * std::pow(1.0 + r, q) * std::log(std::numbers::e * n);
  });
  profile.phi_n = MonotoneMap(
      [=](double r) { return c3 * std::pow(Kd, q) * std::log(n) * std::pow(1.0 + r, q); });
  return profile;
}

}  // namespace oraclebench
