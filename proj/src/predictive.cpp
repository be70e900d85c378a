#include "smbs/predictive.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace smbs {

namespace {

struct HoldingStep {
  double stay;
  double leave;
};

// Stay/leave split of the predictive kernel for state i at age x, in the
// ratio form (prior masses + completed-block counts).
HoldingStep holding_step(const BetaStacyParams& holding, const Histogram& blocks, Duration x) {
  const double denom = holding.total_mass(x) + static_cast<double>(blocks.at_least(x));
  if (denom > 0.0) {
    return {(holding.white_mass(x) + static_cast<double>(blocks.greater_than(x))) / denom,
            (holding.black_mass(x) + static_cast<double>(blocks.at(x))) / denom};
  }
  // Prior masses underflowed with no data this long; hazard() falls back to
  // the closed-form centering hazard or reports an unsupported age.
  const double h = holding.hazard(x);
  return {1.0 - h, h};
}

void check_state(const PredictiveState& state, std::size_t n) {
  if (state.n_states() != n)
    throw std::invalid_argument(fmt::format("statistics cover {} states, prior has {}", state.n_states(), n));
  if (state.terminal_state >= n) throw std::invalid_argument("current state outside the prior");
}

}  // namespace

void predictive_kernel_into(const SmbsParams& prior, const PredictiveState& state, std::span<double> out) {
  const auto n = prior.n_states();
  check_state(state, n);
  if (out.size() != n) throw std::invalid_argument("output span must have one entry per state");
  const StateIndex i = state.terminal_state;
  const Duration x = state.age_next();

  const auto step = holding_step(prior.holding(i), state.block_counts[i], x);
  const auto& m = prior.jump(i);
  const auto& row = state.transitions[i];
  const double jump_denom = m.total() + static_cast<double>(state.transitions_from(i));
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = j == i ? step.stay : step.leave * (m.mass(j) + static_cast<double>(row[j])) / jump_denom;
  }
}

std::vector<double> predictive_kernel(const SmbsParams& prior, const PredictiveState& state) {
  std::vector<double> k(prior.n_states());
  predictive_kernel_into(prior, state, k);
  return k;
}

std::vector<double> variant_b_kernel(const VariantBParams& prior, const PredictiveState& state) {
  const auto n = prior.n_states();
  check_state(state, n);
  const StateIndex i = state.terminal_state;
  const Duration x = state.age_next();

  const auto step = holding_step(prior.holding(i), state.block_counts[i], x);
  const auto& m = prior.jump(i, x);
  const double jump_denom = m.total() + static_cast<double>(state.block_counts[i].at(x));
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    k[j] = j == i ? step.stay
                  : step.leave * (m.mass(j) + static_cast<double>(state.pair_block_counts[i][j].at(x))) /
                        jump_denom;
  }
  return k;
}

CountingStats update_stats_incremental(const CountingStats& stats, StateIndex current, Duration age_next,
                                       StateIndex next) {
  if (current != stats.terminal_state)
    throw std::invalid_argument(
        fmt::format("current state {} does not match the statistics ({})", current, stats.terminal_state));
  if (age_next != stats.age_next())
    throw std::invalid_argument(
        fmt::format("age {} does not match the terminal block (expected {})", age_next, stats.age_next()));
  CountingStats out = stats;
  advance_stats(out, next);
  return out;
}

StateSequence rsm_extend_path(const SmbsParams& params, const StateSequence& prefix, Duration steps, Rng& rng) {
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  auto stats = count_statistics(prefix, params.n_states());
  StateSequence path = prefix;
  path.reserve(prefix.size() + static_cast<std::size_t>(steps));
  std::vector<double> k(params.n_states());
  for (Duration s = 0; s < steps; ++s) {
    predictive_kernel_into(params, stats, k);
    const StateIndex next = categorical(k, rng);
    path.push_back(next);
    advance_stats(stats, next);
  }
  return path;
}

double rsm_path_probability(const SmbsParams& params, const StateSequence& path) {
  validate_path(path, params.n_states());
  auto stats = CountingStats::fresh(params.n_states(), path.front());
  std::vector<double> k(params.n_states());
  double prob = 1.0;
  for (std::size_t t = 1; t < path.size(); ++t) {
    predictive_kernel_into(params, stats, k);
    prob *= k[path[t]];
    if (prob == 0.0) return 0.0;  // later ages may be outside the holding support
    advance_stats(stats, path[t]);
  }
  return prob;
}

double PredictiveMatrix::probability(Duration h, StateIndex j) const {
  return static_cast<double>(counts.at(static_cast<std::size_t>(h - 1)).at(j)) / static_cast<double>(n_sims);
}

std::vector<double> PredictiveMatrix::row(Duration h) const {
  std::vector<double> r(n_states);
  for (std::size_t j = 0; j < n_states; ++j) r[j] = probability(h, j);
  return r;
}

PredictiveMatrix h_step_predictive(const SmbsParams& params, const StateSequence& prefix, Duration horizon,
                                   std::int64_t n_sims, std::uint64_t seed, unsigned threads) {
  if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
  if (n_sims < 1) throw std::invalid_argument("n_sims must be >= 1");
  const auto n = params.n_states();
  const auto base = count_statistics(prefix, n);
  const auto H = static_cast<std::size_t>(horizon);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, n_sims));

  using Counts = std::vector<std::vector<std::int64_t>>;
  std::vector<Counts> partial(threads, Counts(H, std::vector<std::int64_t>(n, 0)));
  std::vector<std::exception_ptr> errors(threads);

  auto work = [&](unsigned w) {
    try {
      std::vector<double> k(n);
      for (std::int64_t s = w; s < n_sims; s += threads) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(s));
        CountingStats stats = base;
        for (std::size_t h = 0; h < H; ++h) {
          predictive_kernel_into(params, stats, k);
          const StateIndex next = categorical(k, rng);
          advance_stats(stats, next);
          ++partial[w][h][next];
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  PredictiveMatrix out{horizon, n, n_sims, Counts(H, std::vector<std::int64_t>(n, 0))};
  for (const auto& part : partial)
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t j = 0; j < n; ++j) out.counts[h][j] += part[h][j];
  return out;
}

}  // namespace smbs
