#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smbs/core_model.hpp"
#include "smbs/random.hpp"
#include "smbs/smbs.hpp"

namespace smbs {

/// Input of the one-step predictive: the statistics of the observed prefix.
/// The current state is stats.terminal_state and the age being tested is
/// x(t) = stats.terminal_age + 1.
using PredictiveState = CountingStats;

/// One-step predictive kernel k_t. With i the current state and x = l(t)+1:
///   k(i) = (c F0((x,inf)) + N((x,inf))) / (c F0([x,inf)) + N([x,inf)))
///   k(j) = (c F0({x}) + N({x})) / (same) * (m({j}) + M^{i,j}) / (m(E) + sum_h M^{i,h})
/// When `prior` already contains observations its posterior Beta masses take
/// the place of c F0. Throws std::domain_error when the holding law of i has
/// no mass at or beyond x.
std::vector<double> predictive_kernel(const SmbsParams& prior, const PredictiveState& state);
void predictive_kernel_into(const SmbsParams& prior, const PredictiveState& state, std::span<double> out);

/// Predictive kernel of the holding-then-jump generalization: the jump
/// factor becomes (m^i_x({j}) + N^{i,j,t}({x})) / (m^i_x(E) + N^{i,t}({x})).
std::vector<double> variant_b_kernel(const VariantBParams& prior, const PredictiveState& state);

/// Statistics after observing `next`. `current` and `age_next` must match
/// the statistics (std::invalid_argument otherwise).
CountingStats update_stats_incremental(const CountingStats& stats, StateIndex current, Duration age_next,
                                       StateIndex next);

/// Extends `prefix` by `steps` draws from the reinforced semi-Markov kernel.
StateSequence rsm_extend_path(const SmbsParams& params, const StateSequence& prefix, Duration steps, Rng& rng);

/// Probability of `path` under RSM(m, c, F0) started at path[0]: the product
/// of the predictive kernels along the path.
double rsm_path_probability(const SmbsParams& params, const StateSequence& path);

/// Monte Carlo h-step-ahead predictive distributions.
struct PredictiveMatrix {
  Duration horizon = 0;
  std::size_t n_states = 0;
  std::int64_t n_sims = 0;
  /// counts[h-1][j]: simulations with state j at step h.
  std::vector<std::vector<std::int64_t>> counts;

  double probability(Duration h, StateIndex j) const;
  std::vector<double> row(Duration h) const;
};

/// Simulates n_sims independent futures of `horizon` steps after `prefix`.
/// Simulation s uses stream make_stream(seed, s), so the result does not
/// depend on the number of worker threads (0 = hardware concurrency).
PredictiveMatrix h_step_predictive(const SmbsParams& params, const StateSequence& prefix, Duration horizon,
                                   std::int64_t n_sims, std::uint64_t seed, unsigned threads = 0);

}  // namespace smbs
