#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "smbs/beta_stacy.hpp"
#include "smbs/core_model.hpp"
#include "smbs/dirichlet.hpp"
#include "smbs/random.hpp"
#include "smbs/smbs.hpp"

namespace smbs {

/// Generalized Polya urn with real-valued composition.
class DirUrn {
 public:
  explicit DirUrn(const DirichletParams& m);

  const std::vector<double>& composition() const { return composition_; }
  double total() const { return total_; }
  Count draw_count() const { return draws_; }
  /// composition[j] / total
  double probability(StateIndex j) const;

  /// Adds one ball of colour j.
  void reinforce(StateIndex j);
  /// Draws a colour with probability proportional to the composition and reinforces it.
  StateIndex draw(Rng& rng);

 private:
  std::vector<double> composition_;
  double total_ = 0.0;
  Count draws_ = 0;
};

/// Black/white contents of one urn V_t of a BS-system.
struct BlackWhite {
  double black = 0.0;
  double white = 0.0;
  double total() const { return black + white; }
};

/// BS(c, F0)-system: urn V_t starts with c(t)F0({t}) black and
/// c(t)F0((t,inf)) white balls (or the posterior masses, when seeded from a
/// posterior). Urns are materialized on first visit.
class BsSystem {
 public:
  explicit BsSystem(BetaStacyParams params, Duration iteration_cap = 1'000'000);

  /// Contents of V_t (materializes it).
  const BlackWhite& urn(Duration t);
  double black_probability(Duration t);
  /// Draws from V_t and reinforces the drawn colour. Returns true for black.
  bool draw_at(Duration t, Rng& rng);
  void reinforce(Duration t, bool black);

  /// Walks V_1, V_2, ... until a black ball; returns its index.
  Duration draw(Rng& rng);
  /// Reinforces the urns as if `holding` had been drawn.
  void observe(Duration holding);
  /// P(T > t | history) = prod_{s<=t} white_s / total_s.
  double survival(Duration t);

  Duration materialized() const { return static_cast<Duration>(urns_.size()); }
  Duration iteration_cap() const { return cap_; }

 private:
  BetaStacyParams params_;
  std::vector<BlackWhite> urns_;
  Duration cap_;
};

enum class UrnModel { Smbs, VariantA, VariantB };

/// One urn draw, recorded when tracing is enabled.
struct UrnDraw {
  enum class Kind { Jump, Holding };
  Kind kind;
  StateIndex state;                   // i
  std::optional<StateIndex> partner;  // j of V_{i,j} (variant A)
  Duration index = 0;                 // t of V_{i,t}, or of U_{i,t} (variant B); 0 for U_i
  std::size_t outcome = 0;            // colour j for jump urns; 1 = black, 0 = white
  std::vector<double> pre_masses;
  std::vector<double> post_masses;
};

struct VisitCounts {
  /// Entries of the walk into each state (the starting state included).
  std::vector<Count> visits;
  /// Completed transitions i -> j.
  std::vector<std::vector<Count>> transitions;
};

/// Reinforced urn process over a system of Dir-urns and BS-systems. The walk
/// can be advanced one observable time step at a time (`step`, `observe`)
/// or one jump at a time (rup_generate). Mutable and single-owner.
class UrnProcess {
 public:
  explicit UrnProcess(const SmbsParams& params);
  explicit UrnProcess(const VariantAParams& params);
  explicit UrnProcess(const VariantBParams& params);

  UrnModel model() const { return model_; }
  std::size_t n_states() const { return n_; }
  bool positioned() const { return current_.has_value(); }
  StateIndex current() const;
  /// Number of urns already walked in the current block (l(t)).
  Duration age() const { return age_; }

  /// Starts a new walk at `start` (an entry into `start`).
  void restart(StateIndex start);

  /// Exact law of the next observable state from the current compositions.
  std::vector<double> step_probabilities();
  /// Draws the next observable state, reinforcing every urn drawn from.
  StateIndex step(Rng& rng);
  /// Reinforces the urns as the draws that produce `next` would.
  /// Not available for variant A, whose next-state draw is not observable.
  void observe(StateIndex next);

  VisitCounts recurrence_diagnostics() const;

  void enable_trace(bool on) { tracing_ = on; }
  const std::vector<UrnDraw>& trace() const { return trace_; }

  Duration iteration_cap() const { return cap_; }
  void set_iteration_cap(Duration cap);

  /// Urn states, for inspection in tests.
  DirUrn& jump_urn(StateIndex i);
  DirUrn& jump_urn(StateIndex i, Duration t);
  BsSystem& holding_system(StateIndex i);
  BsSystem& holding_system(StateIndex i, StateIndex j);

 private:
  void require_position() const;
  void record_jump(StateIndex from, StateIndex to);
  StateIndex draw_jump(DirUrn& urn, StateIndex i, Duration index, Rng& rng);
  bool draw_holding(BsSystem& system, StateIndex i, std::optional<StateIndex> partner, Duration t, Rng& rng);

  UrnModel model_;
  std::size_t n_;
  std::vector<DirUrn> jump_urns_;  // Smbs, VariantA
  std::vector<DirichletParams> default_jump_;  // VariantB
  std::map<std::pair<StateIndex, Duration>, DirichletParams> jump_overrides_;  // VariantB
  std::map<std::pair<StateIndex, Duration>, DirUrn> timed_jump_urns_;  // VariantB
  std::vector<BsSystem> systems_;  // Smbs, VariantB
  std::vector<std::vector<std::optional<BsSystem>>> pair_systems_;  // VariantA

  std::optional<StateIndex> current_;
  std::optional<StateIndex> pending_target_;  // VariantA: next state already drawn
  Duration age_ = 0;
  Duration cap_ = 1'000'000;

  std::vector<Count> visits_;
  std::vector<std::vector<Count>> transitions_;
  bool tracing_ = false;
  std::vector<UrnDraw> trace_;
};

/// Jump-level generation from `start`: (L_k, T_k) pairs for n_jumps jumps.
/// The result ends on entry into L_{n_jumps} (terminal age 0).
PathDecomposition rup_generate(UrnProcess& state, StateIndex start, Count n_jumps, Rng& rng);

/// Observable path of length horizon+1 generated by the urn walk from `start`.
StateSequence rup_sample_path(UrnProcess& state, StateIndex start, Duration horizon, Rng& rng);

inline std::vector<double> rup_step_prob(UrnProcess& state) { return state.step_probabilities(); }
inline VisitCounts recurrence_diagnostics(const UrnProcess& state) { return state.recurrence_diagnostics(); }

}  // namespace smbs
