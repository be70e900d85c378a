#include "smbs/smbs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace smbs {

namespace {

void check_jump_measure(const DirichletParams& m, StateIndex i, std::size_t n) {
  if (m.size() != n)
    throw std::invalid_argument(fmt::format("jump measure of state {} has {} entries, expected {}", i, m.size(), n));
  if (m.mass(i) != 0.0)
    throw std::invalid_argument(fmt::format("jump measure of state {} puts mass on itself", i));
}

BetaStacyParams update_holding(BetaStacyParams holding, const Histogram& blocks, bool terminal, Duration terminal_age) {
  for (const auto& [length, n] : blocks.entries()) holding.add_exact(length, n);
  if (terminal && terminal_age > 0) holding.add_censored(terminal_age);
  return holding;
}

void check_stats(const CountingStats& stats, std::size_t n) {
  if (stats.n_states() != n)
    throw std::invalid_argument(fmt::format("statistics cover {} states, prior has {}", stats.n_states(), n));
}

}  // namespace

SmbsParams::SmbsParams(std::vector<StatePrior> states) : states_(std::move(states)) {
  if (states_.empty()) throw std::invalid_argument("SMBS prior needs at least one state");
  for (std::size_t i = 0; i < states_.size(); ++i) check_jump_measure(states_[i].jump, i, states_.size());
}

SmbsParams smbs_posterior_from_stats(const SmbsParams& prior, const CountingStats& stats) {
  check_stats(stats, prior.n_states());
  std::vector<StatePrior> post;
  post.reserve(prior.n_states());
  for (std::size_t i = 0; i < prior.n_states(); ++i) {
    post.push_back({dir_posterior(prior.jump(i), stats.transitions[i]),
                    update_holding(prior.holding(i), stats.block_counts[i], i == stats.terminal_state,
                                   stats.terminal_age)});
  }
  return SmbsParams(std::move(post));
}

SmbsParams smbs_posterior(const SmbsParams& prior, const StateSequence& path) {
  return smbs_posterior_from_stats(prior, count_statistics(path, prior.n_states()));
}

SmbsParams smbs_posterior_multi(const SmbsParams& prior, std::span<const StateSequence> paths) {
  SmbsParams post = prior;
  for (const auto& path : paths) post = smbs_posterior(post, path);
  return post;
}

// -- characteristic couples -------------------------------------------------

double HoldingLaw::hazard(Duration t) {
  if (auto* s = std::get_if<SampledSurvival>(&law_)) return s->hazard(t);
  auto h = std::get<CenteringDistribution>(law_).hazard(t);
  if (!h) throw std::domain_error(fmt::format("holding law has no mass at or beyond t={}", t));
  return *h;
}

double HoldingLaw::survival(Duration t) {
  if (auto* s = std::get_if<SampledSurvival>(&law_)) return s->survival(t);
  return std::get<CenteringDistribution>(law_).survival_after(t);
}

void CharacteristicCouple::validate() const {
  const auto n = transition.size();
  if (n == 0 || holding.size() != n) throw std::invalid_argument("couple needs one holding law per state");
  for (std::size_t i = 0; i < n; ++i) {
    if (transition[i].size() != n) throw std::invalid_argument("transition matrix must be square");
    if (transition[i][i] != 0.0) throw std::invalid_argument(fmt::format("P[{0}][{0}] must be zero", i));
    double sum = 0.0;
    for (double p : transition[i]) {
      if (!(p >= 0.0)) throw std::invalid_argument("transition probabilities must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument(fmt::format("row {} sums to {}", i, sum));
  }
}

CharacteristicCouple smbs_sample(const SmbsParams& params, Rng& rng) {
  CharacteristicCouple couple;
  couple.transition.reserve(params.n_states());
  couple.holding.reserve(params.n_states());
  for (std::size_t i = 0; i < params.n_states(); ++i) {
    couple.transition.push_back(dir_sample(params.jump(i), rng));
    couple.holding.emplace_back(bs_sample(params.holding(i), rng));
  }
  return couple;
}

StateSequence sm_sample_path(CharacteristicCouple& couple, StateIndex start, Duration horizon, Rng& rng) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (start >= couple.n_states()) throw std::invalid_argument("start state outside the couple");
  StateSequence path;
  path.reserve(static_cast<std::size_t>(horizon) + 1);
  path.push_back(start);
  StateIndex current = start;
  Duration age = 0;
  for (Duration t = 1; t <= horizon; ++t) {
    if (uniform01(rng) < couple.holding[current].hazard(age + 1)) {
      current = categorical(couple.transition[current], rng);
      age = 0;
    } else {
      ++age;
    }
    path.push_back(current);
  }
  return path;
}

// -- variant B ---------------------------------------------------------------

VariantBParams::VariantBParams(std::vector<BetaStacyParams> holding, std::vector<DirichletParams> default_jump)
    : holding_(std::move(holding)), default_jump_(std::move(default_jump)) {
  if (holding_.empty() || holding_.size() != default_jump_.size())
    throw std::invalid_argument("variant-B prior needs one holding prior and one default jump measure per state");
  for (std::size_t i = 0; i < default_jump_.size(); ++i) check_jump(i, default_jump_[i]);
}

void VariantBParams::check_jump(StateIndex i, const DirichletParams& m) const {
  check_jump_measure(m, i, holding_.size());
}

const DirichletParams& VariantBParams::jump(StateIndex i, Duration t) const {
  auto it = overrides_.find({i, t});
  return it != overrides_.end() ? it->second : default_jump_.at(i);
}

void VariantBParams::set_jump(StateIndex i, Duration t, DirichletParams m) {
  if (i >= n_states()) throw std::invalid_argument("state outside the variant-B prior");
  if (t < 1) throw std::invalid_argument("holding time index must be >= 1");
  check_jump(i, m);
  overrides_.insert_or_assign({i, t}, std::move(m));
}

VariantBParams variant_b_posterior_from_stats(const VariantBParams& prior, const CountingStats& stats) {
  const auto n = prior.n_states();
  check_stats(stats, n);
  std::vector<BetaStacyParams> holding;
  std::vector<DirichletParams> defaults;
  for (std::size_t i = 0; i < n; ++i) {
    holding.push_back(update_holding(prior.holding(i), stats.block_counts[i], i == stats.terminal_state,
                                     stats.terminal_age));
    defaults.push_back(prior.default_jump(i));
  }
  VariantBParams post(std::move(holding), std::move(defaults));
  for (const auto& [key, m] : prior.jump_overrides()) post.set_jump(key.first, key.second, m);

  for (std::size_t i = 0; i < n; ++i) {
    std::map<Duration, std::vector<Count>> by_length;
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [s, c] : stats.pair_block_counts[i][j].entries()) {
        auto& counts = by_length.try_emplace(s, n, Count{0}).first->second;
        counts[j] += c;
      }
    }
    for (const auto& [s, counts] : by_length) post.set_jump(i, s, dir_posterior(prior.jump(i, s), counts));
  }
  return post;
}

VariantBParams variant_b_posterior(const VariantBParams& prior, const StateSequence& path) {
  return variant_b_posterior_from_stats(prior, count_statistics(path, prior.n_states()));
}

// -- variant A ---------------------------------------------------------------

VariantAParams::VariantAParams(std::vector<DirichletParams> jump,
                               std::vector<std::vector<std::optional<BetaStacyParams>>> pair_holding)
    : jump_(std::move(jump)), pair_holding_(std::move(pair_holding)) {
  const auto n = jump_.size();
  if (n == 0 || pair_holding_.size() != n) throw std::invalid_argument("variant-A prior shape mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    check_jump_measure(jump_[i], i, n);
    if (pair_holding_[i].size() != n) throw std::invalid_argument("variant-A pair holding table must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && jump_[i].mass(j) > 0.0 && !pair_holding_[i][j])
        throw std::invalid_argument(fmt::format("missing holding prior for reachable pair ({}, {})", i, j));
    }
  }
}

bool VariantAParams::has_holding(StateIndex i, StateIndex j) const {
  return i != j && pair_holding_.at(i).at(j).has_value();
}

const BetaStacyParams& VariantAParams::holding(StateIndex i, StateIndex j) const {
  if (!has_holding(i, j)) throw std::invalid_argument(fmt::format("no holding prior for pair ({}, {})", i, j));
  return *pair_holding_[i][j];
}

}  // namespace smbs
