#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "smbs/beta_stacy.hpp"
#include "smbs/core_model.hpp"
#include "smbs/dirichlet.hpp"
#include "smbs/random.hpp"

namespace smbs {

/// Prior for the outgoing behaviour of one state: Dir(m^i) on the next
/// state and BS(c^i, F0^i) on the holding time.
struct StatePrior {
  DirichletParams jump;
  BetaStacyParams holding;

  friend bool operator==(const StatePrior&, const StatePrior&) = default;
};

/// SMBS(m, c, F0). Every jump measure puts zero mass on its own state.
class SmbsParams {
 public:
  explicit SmbsParams(std::vector<StatePrior> states);

  std::size_t n_states() const { return states_.size(); }
  const StatePrior& state(StateIndex i) const { return states_.at(i); }
  const DirichletParams& jump(StateIndex i) const { return states_.at(i).jump; }
  const BetaStacyParams& holding(StateIndex i) const { return states_.at(i).holding; }
  const std::vector<StatePrior>& states() const { return states_; }

  friend bool operator==(const SmbsParams&, const SmbsParams&) = default;

 private:
  std::vector<StatePrior> states_;
};

/// Conjugate update from sufficient statistics: jump counts into the
/// Dirichlet rows, completed blocks as exact holding times, and the terminal
/// block as one censored holding time (skipped when its age is 0).
SmbsParams smbs_posterior_from_stats(const SmbsParams& prior, const CountingStats& stats);
SmbsParams smbs_posterior(const SmbsParams& prior, const StateSequence& path);
SmbsParams smbs_posterior_multi(const SmbsParams& prior, std::span<const StateSequence> paths);

/// Holding-time law of one state inside a characteristic couple: either a
/// random draw from a beta-Stacy process or a fixed distribution.
class HoldingLaw {
 public:
  explicit HoldingLaw(SampledSurvival sampled) : law_(std::move(sampled)) {}
  explicit HoldingLaw(CenteringDistribution fixed) : law_(std::move(fixed)) {}

  /// F({t}) / F([t,+inf)). Throws std::domain_error at ages with no mass.
  double hazard(Duration t);
  double survival(Duration t);

 private:
  std::variant<SampledSurvival, CenteringDistribution> law_;
};

/// (P, F): row-stochastic transition matrix with zero diagonal plus one
/// holding law per state.
struct CharacteristicCouple {
  std::vector<std::vector<double>> transition;
  std::vector<HoldingLaw> holding;

  std::size_t n_states() const { return transition.size(); }
  /// Throws std::invalid_argument if rows are not stochastic (1e-12) or the diagonal is non-zero.
  void validate() const;
};

CharacteristicCouple smbs_sample(const SmbsParams& params, Rng& rng);

/// Path of length horizon+1 started at `start`. Each step leaves the
/// current state with the holding hazard at the current age and then picks
/// the next state from the transition row.
StateSequence sm_sample_path(CharacteristicCouple& couple, StateIndex start, Duration horizon, Rng& rng);

/// Holding-then-jump generalization: the next state's law depends on the
/// holding time just completed, through Dir(m^i_t).
class VariantBParams {
 public:
  VariantBParams(std::vector<BetaStacyParams> holding, std::vector<DirichletParams> default_jump);

  std::size_t n_states() const { return holding_.size(); }
  const BetaStacyParams& holding(StateIndex i) const { return holding_.at(i); }
  const DirichletParams& default_jump(StateIndex i) const { return default_jump_.at(i); }
  /// m^i_t: the override for (i, t) if present, else the default for i.
  const DirichletParams& jump(StateIndex i, Duration t) const;
  void set_jump(StateIndex i, Duration t, DirichletParams m);
  const std::map<std::pair<StateIndex, Duration>, DirichletParams>& jump_overrides() const { return overrides_; }

  friend bool operator==(const VariantBParams&, const VariantBParams&) = default;

 private:
  void check_jump(StateIndex i, const DirichletParams& m) const;

  std::vector<BetaStacyParams> holding_;
  std::vector<DirichletParams> default_jump_;
  std::map<std::pair<StateIndex, Duration>, DirichletParams> overrides_;
};

/// Holding priors updated as in smbs_posterior; jump priors m^i_s({j}) += N^{i,j,t}({s}).
VariantBParams variant_b_posterior_from_stats(const VariantBParams& prior, const CountingStats& stats);
VariantBParams variant_b_posterior(const VariantBParams& prior, const StateSequence& path);

/// Jump-then-holding generalization: one beta-Stacy prior per ordered pair
/// (i, j), i != j. Only its urn-based predictive process is provided.
class VariantAParams {
 public:
  VariantAParams(std::vector<DirichletParams> jump, std::vector<std::vector<std::optional<BetaStacyParams>>> pair_holding);

  std::size_t n_states() const { return jump_.size(); }
  const DirichletParams& jump(StateIndex i) const { return jump_.at(i); }
  bool has_holding(StateIndex i, StateIndex j) const;
  /// Throws std::invalid_argument when no prior is defined for (i, j).
  const BetaStacyParams& holding(StateIndex i, StateIndex j) const;

 private:
  std::vector<DirichletParams> jump_;
  std::vector<std::vector<std::optional<BetaStacyParams>>> pair_holding_;
};

}  // namespace smbs
