#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smbs/beta_stacy.hpp"
#include "smbs/core_model.hpp"
#include "smbs/smbs.hpp"

namespace smbs {

/// Type-I discrete Weibull cdf 1 - q^(t^k); 0 at t = 0.
double discrete_weibull_cdf(double q, double k, Duration t);

/// A fixed characteristic couple used to generate data.
struct SemiMarkovTruth {
  StateSpace space;
  std::vector<std::vector<double>> transition;
  std::vector<CenteringDistribution> holding;
  StateIndex start = 0;
  Duration horizon = 0;

  void validate() const;
  CharacteristicCouple couple() const;
};

/// Textile-factory scenario: states {1,2,3}, S_0 = 1, 1000 days,
/// F1 geometric(0.8), F2 discrete Weibull(0.3, 0.5), F3 discrete Weibull(0.6, 0.9).
SemiMarkovTruth factory_truth();

/// Prior of the factory study: m^1 = d_2, m^2 = d_1 + d_3, m^3 = d_1,
/// F0 = geometric(0.3) and c(t) = c for every state.
SmbsParams factory_prior(double c);

StateSequence simstudy_generate(const SemiMarkovTruth& truth, std::uint64_t seed);
StateSequence simstudy_generate(std::uint64_t seed);

/// Equilibrium distribution e = eP of a jump-chain transition matrix.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

/// m = sum_{t>=0} F((t,inf)), summed until the increment drops below tail_tol.
/// Throws std::runtime_error if that takes more than max_terms terms.
double mean_sojourn(const CenteringDistribution& holding, double tail_tol = 1e-12, std::int64_t max_terms = 1'000'000);

struct LimitingDistribution {
  std::vector<double> equilibrium;   // e
  std::vector<double> mean_sojourn;  // m
  std::vector<double> nu;            // e_j m_j / sum_i e_i m_i
};

LimitingDistribution limiting_distribution(const SemiMarkovTruth& truth, double tail_tol = 1e-12,
                                           std::int64_t max_terms = 1'000'000);

/// Posterior summaries of one holding-time distribution on t = 1..t_max.
struct HoldingFit {
  StateIndex state = 0;
  std::vector<Duration> t;
  std::vector<double> posterior_mean;
  std::optional<std::vector<double>> truth;
  /// samples[s][k] = F_s(t[k]) for posterior draw s.
  std::vector<std::vector<double>> samples;
};

/// Posterior draws use SampledSurvival(post, mix_seed(seed, s)) for draw s,
/// so equal seeds give common random numbers across priors.
HoldingFit fit_holding(const SmbsParams& posterior, StateIndex state, Duration t_max, std::int64_t n_samples,
                       std::uint64_t seed, const std::optional<CenteringDistribution>& truth = std::nullopt);

/// Sample standard deviation of column k of fit.samples.
double sample_spread(const HoldingFit& fit, std::size_t k);

/// max over t of |a(t) - b(t)|.
double sup_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace smbs
