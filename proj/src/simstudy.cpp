#include "smbs/simstudy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace smbs {

double discrete_weibull_cdf(double q, double k, Duration t) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("discrete Weibull q must lie in (0,1)");
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("discrete Weibull k must be positive");
  if (t < 0) throw std::invalid_argument("discrete Weibull cdf needs t >= 0");
  if (t == 0) return 0.0;
  return -std::expm1(std::pow(static_cast<double>(t), k) * std::log(q));
}

void SemiMarkovTruth::validate() const {
  const auto n = space.size();
  if (transition.size() != n || holding.size() != n)
    throw std::invalid_argument("truth needs a transition row and a holding law per state");
  if (start >= n) throw std::invalid_argument("truth start state outside the state space");
  if (horizon < 0) throw std::invalid_argument("truth horizon must be >= 0");
  couple().validate();
}

CharacteristicCouple SemiMarkovTruth::couple() const {
  CharacteristicCouple c;
  c.transition = transition;
  for (const auto& h : holding) c.holding.emplace_back(h);
  return c;
}

SemiMarkovTruth factory_truth() {
  return SemiMarkovTruth{
      StateSpace({1, 2, 3}, {"operational", "disposal-failed", "stopped"}),
      {{0.0, 1.0, 0.0}, {0.95, 0.0, 0.05}, {1.0, 0.0, 0.0}},
      {CenteringDistribution::geometric(0.8), CenteringDistribution::discrete_weibull(0.3, 0.5),
       CenteringDistribution::discrete_weibull(0.6, 0.9)},
      0,
      1000,
  };
}

SmbsParams factory_prior(double c) {
  const auto centering = CenteringDistribution::geometric(0.3);
  const auto precision = PrecisionFunction::constant(c);
  std::vector<StatePrior> states;
  states.push_back({DirichletParams({0.0, 1.0, 0.0}), BetaStacyParams(precision, centering)});
  states.push_back({DirichletParams({1.0, 0.0, 1.0}), BetaStacyParams(precision, centering)});
  states.push_back({DirichletParams({1.0, 0.0, 0.0}), BetaStacyParams(precision, centering)});
  return SmbsParams(std::move(states));
}

StateSequence simstudy_generate(const SemiMarkovTruth& truth, std::uint64_t seed) {
  truth.validate();
  auto couple = truth.couple();
  Rng rng(seed);
  return sm_sample_path(couple, truth.start, truth.horizon, rng);
}

StateSequence simstudy_generate(std::uint64_t seed) { return simstudy_generate(factory_truth(), seed); }

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  const auto n = static_cast<Eigen::Index>(transition.size());
  if (n == 0) throw std::invalid_argument("empty transition matrix");
  // (P^T - I) e = 0 with the last equation replaced by sum(e) = 1.
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(transition[static_cast<std::size_t>(i)].size()) != n)
      throw std::invalid_argument("transition matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j)
      A(j, i) = transition[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? 1.0 : 0.0);
  }
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw std::domain_error("jump chain has no unique equilibrium distribution");
  const Eigen::VectorXd e = lu.solve(b);
  return {e.data(), e.data() + n};
}

double mean_sojourn(const CenteringDistribution& holding, double tail_tol, std::int64_t max_terms) {
  if (!(tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be positive");
  double sum = 0.0;
  for (Duration t = 0; t < max_terms; ++t) {
    const double inc = holding.survival_after(t);
    sum += inc;
    if (inc < tail_tol) return sum;
  }
  throw std::runtime_error(fmt::format("mean sojourn did not converge within {} terms", max_terms));
}

LimitingDistribution limiting_distribution(const SemiMarkovTruth& truth, double tail_tol, std::int64_t max_terms) {
  LimitingDistribution out;
  out.equilibrium = stationary_distribution(truth.transition);
  for (const auto& h : truth.holding) out.mean_sojourn.push_back(mean_sojourn(h, tail_tol, max_terms));
  double z = 0.0;
  for (std::size_t j = 0; j < out.equilibrium.size(); ++j) z += out.equilibrium[j] * out.mean_sojourn[j];
  for (std::size_t j = 0; j < out.equilibrium.size(); ++j)
    out.nu.push_back(out.equilibrium[j] * out.mean_sojourn[j] / z);
  return out;
}

HoldingFit fit_holding(const SmbsParams& posterior, StateIndex state, Duration t_max, std::int64_t n_samples,
                       std::uint64_t seed, const std::optional<CenteringDistribution>& truth) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (n_samples < 0) throw std::invalid_argument("n_samples must be >= 0");
  const auto& params = posterior.holding(state);
  HoldingFit fit;
  fit.state = state;
  for (Duration t = 1; t <= t_max; ++t) {
    fit.t.push_back(t);
    fit.posterior_mean.push_back(bs_mean(params, t));
  }
  if (truth) {
    fit.truth.emplace();
    for (auto t : fit.t) fit.truth->push_back(truth->cdf(t));
  }
  fit.samples.reserve(static_cast<std::size_t>(n_samples));
  for (std::int64_t s = 0; s < n_samples; ++s) {
    SampledSurvival draw(params, mix_seed(seed, static_cast<std::uint64_t>(s)));
    std::vector<double> row;
    row.reserve(fit.t.size());
    for (auto t : fit.t) row.push_back(draw.cdf(t));
    fit.samples.push_back(std::move(row));
  }
  return fit;
}

double sample_spread(const HoldingFit& fit, std::size_t k) {
  const auto n = fit.samples.size();
  if (n < 2) throw std::invalid_argument("sample spread needs at least two draws");
  double mean = 0.0;
  for (const auto& row : fit.samples) mean += row.at(k);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& row : fit.samples) ss += (row[k] - mean) * (row[k] - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance needs equal-length series");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace smbs
