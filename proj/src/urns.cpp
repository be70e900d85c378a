#include "smbs/urns.hpp"

#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace smbs {

// -- DirUrn ------------------------------------------------------------------

DirUrn::DirUrn(const DirichletParams& m) : composition_(m.base()), total_(m.total()) {}

double DirUrn::probability(StateIndex j) const { return composition_.at(j) / total_; }

void DirUrn::reinforce(StateIndex j) {
  composition_.at(j) += 1.0;
  total_ += 1.0;
  ++draws_;
}

StateIndex DirUrn::draw(Rng& rng) {
  if (!(total_ > 0.0)) throw std::domain_error("cannot draw from an empty urn");
  const StateIndex j = categorical(composition_, rng);
  reinforce(j);
  return j;
}

// -- BsSystem ----------------------------------------------------------------

BsSystem::BsSystem(BetaStacyParams params, Duration iteration_cap) : params_(std::move(params)), cap_(iteration_cap) {
  if (cap_ < 1) throw std::invalid_argument("iteration cap must be >= 1");
}

const BlackWhite& BsSystem::urn(Duration t) {
  if (t < 1) throw std::invalid_argument("BS-system urns are indexed from 1");
  while (static_cast<Duration>(urns_.size()) < t) {
    const Duration s = static_cast<Duration>(urns_.size()) + 1;
    urns_.push_back({params_.black_mass(s), params_.white_mass(s)});
  }
  return urns_[static_cast<std::size_t>(t - 1)];
}

double BsSystem::black_probability(Duration t) {
  const auto& u = urn(t);
  if (!(u.total() > 0.0)) throw std::domain_error(fmt::format("BS-system urn {} contains no balls", t));
  return u.black / u.total();
}

void BsSystem::reinforce(Duration t, bool black) {
  urn(t);
  auto& u = urns_[static_cast<std::size_t>(t - 1)];
  (black ? u.black : u.white) += 1.0;
}

bool BsSystem::draw_at(Duration t, Rng& rng) {
  const bool black = uniform01(rng) < black_probability(t);
  reinforce(t, black);
  return black;
}

Duration BsSystem::draw(Rng& rng) {
  for (Duration t = 1; t <= cap_; ++t)
    if (draw_at(t, rng)) return t;
  throw std::runtime_error(fmt::format("BS-system walk exceeded {} urns without a black ball", cap_));
}

void BsSystem::observe(Duration holding) {
  if (holding < 1) throw std::invalid_argument("holding times must be positive");
  for (Duration t = 1; t < holding; ++t) reinforce(t, false);
  reinforce(holding, true);
}

double BsSystem::survival(Duration t) {
  double s = 1.0;
  for (Duration k = 1; k <= t; ++k) {
    const auto& u = urn(k);
    if (!(u.total() > 0.0)) {
      if (s == 0.0) break;
      throw std::domain_error(fmt::format("BS-system urn {} contains no balls", k));
    }
    s *= u.white / u.total();
  }
  return s;
}

// -- UrnProcess --------------------------------------------------------------

UrnProcess::UrnProcess(const SmbsParams& params) : model_(UrnModel::Smbs), n_(params.n_states()) {
  for (std::size_t i = 0; i < n_; ++i) {
    jump_urns_.emplace_back(params.jump(i));
    systems_.emplace_back(params.holding(i), cap_);
  }
  visits_.assign(n_, 0);
  transitions_.assign(n_, std::vector<Count>(n_, 0));
}

UrnProcess::UrnProcess(const VariantAParams& params) : model_(UrnModel::VariantA), n_(params.n_states()) {
  pair_systems_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    jump_urns_.emplace_back(params.jump(i));
    pair_systems_[i].resize(n_);
    for (std::size_t j = 0; j < n_; ++j)
      if (params.has_holding(i, j)) pair_systems_[i][j].emplace(params.holding(i, j), cap_);
  }
  visits_.assign(n_, 0);
  transitions_.assign(n_, std::vector<Count>(n_, 0));
}

UrnProcess::UrnProcess(const VariantBParams& params) : model_(UrnModel::VariantB), n_(params.n_states()) {
  for (std::size_t i = 0; i < n_; ++i) {
    default_jump_.push_back(params.default_jump(i));
    systems_.emplace_back(params.holding(i), cap_);
  }
  jump_overrides_ = params.jump_overrides();
  visits_.assign(n_, 0);
  transitions_.assign(n_, std::vector<Count>(n_, 0));
}

StateIndex UrnProcess::current() const {
  require_position();
  return *current_;
}

void UrnProcess::require_position() const {
  if (!current_) throw std::logic_error("urn walk has no position; call restart() first");
}

void UrnProcess::set_iteration_cap(Duration cap) {
  if (cap < 1) throw std::invalid_argument("iteration cap must be >= 1");
  cap_ = cap;
}

void UrnProcess::restart(StateIndex start) {
  if (start >= n_) throw std::invalid_argument("start state outside the urn system");
  current_ = start;
  pending_target_.reset();
  age_ = 0;
  ++visits_[start];
}

DirUrn& UrnProcess::jump_urn(StateIndex i) {
  if (model_ == UrnModel::VariantB) throw std::logic_error("variant B jump urns are indexed by (state, holding time)");
  return jump_urns_.at(i);
}

DirUrn& UrnProcess::jump_urn(StateIndex i, Duration t) {
  if (model_ != UrnModel::VariantB) throw std::logic_error("only variant B has time-indexed jump urns");
  if (i >= n_ || t < 1) throw std::invalid_argument("jump urn index out of range");
  auto it = timed_jump_urns_.find({i, t});
  if (it == timed_jump_urns_.end()) {
    auto ov = jump_overrides_.find({i, t});
    const auto& m = ov != jump_overrides_.end() ? ov->second : default_jump_[i];
    it = timed_jump_urns_.emplace(std::pair{i, t}, DirUrn(m)).first;
  }
  return it->second;
}

BsSystem& UrnProcess::holding_system(StateIndex i) {
  if (model_ == UrnModel::VariantA) throw std::logic_error("variant A holding systems are indexed by pairs");
  return systems_.at(i);
}

BsSystem& UrnProcess::holding_system(StateIndex i, StateIndex j) {
  if (model_ != UrnModel::VariantA) throw std::logic_error("only variant A has pair holding systems");
  auto& sys = pair_systems_.at(i).at(j);
  if (!sys) throw std::invalid_argument(fmt::format("no holding system for pair ({}, {})", i, j));
  return *sys;
}

void UrnProcess::record_jump(StateIndex from, StateIndex to) {
  ++transitions_[from][to];
  ++visits_[to];
  current_ = to;
  pending_target_.reset();
  age_ = 0;
}

StateIndex UrnProcess::draw_jump(DirUrn& urn, StateIndex i, Duration index, Rng& rng) {
  UrnDraw rec{UrnDraw::Kind::Jump, i, std::nullopt, index, 0, {}, {}};
  if (tracing_) rec.pre_masses = urn.composition();
  const StateIndex j = urn.draw(rng);
  if (tracing_) {
    rec.outcome = j;
    rec.post_masses = urn.composition();
    trace_.push_back(std::move(rec));
  }
  return j;
}

bool UrnProcess::draw_holding(BsSystem& system, StateIndex i, std::optional<StateIndex> partner, Duration t,
                              Rng& rng) {
  if (t > cap_) throw std::runtime_error(fmt::format("BS-system walk exceeded {} urns without a black ball", cap_));
  UrnDraw rec{UrnDraw::Kind::Holding, i, partner, t, 0, {}, {}};
  if (tracing_) {
    const auto& u = system.urn(t);
    rec.pre_masses = {u.white, u.black};
  }
  const bool black = system.draw_at(t, rng);
  if (tracing_) {
    const auto& u = system.urn(t);
    rec.outcome = black ? 1 : 0;
    rec.post_masses = {u.white, u.black};
    trace_.push_back(std::move(rec));
  }
  return black;
}

std::vector<double> UrnProcess::step_probabilities() {
  require_position();
  const StateIndex i = *current_;
  const Duration x = age_ + 1;
  std::vector<double> p(n_, 0.0);
  switch (model_) {
    case UrnModel::Smbs:
    case UrnModel::VariantB: {
      const auto bw = systems_[i].urn(x);
      if (!(bw.total() > 0.0)) throw std::domain_error(fmt::format("BS-system urn {} contains no balls", x));
      const double leave = bw.black / bw.total();
      const auto& urn = model_ == UrnModel::Smbs ? jump_urns_[i] : jump_urn(i, x);
      for (std::size_t j = 0; j < n_; ++j) p[j] = j == i ? bw.white / bw.total() : leave * urn.probability(j);
      break;
    }
    case UrnModel::VariantA: {
      // Conditional on the hidden target when it has been drawn; otherwise
      // the target draw is part of the step.
      const auto& urn = jump_urns_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == i) continue;
        double w;
        if (pending_target_) {
          if (j != *pending_target_) continue;
          w = 1.0;
        } else {
          w = urn.probability(j);
          if (w == 0.0) continue;
        }
        auto& sys = holding_system(i, j);
        const auto& bw = sys.urn(x);
        if (!(bw.total() > 0.0)) throw std::domain_error(fmt::format("BS-system urn {} contains no balls", x));
        p[j] += w * bw.black / bw.total();
        p[i] += w * bw.white / bw.total();
      }
      break;
    }
  }
  return p;
}

StateIndex UrnProcess::step(Rng& rng) {
  require_position();
  const StateIndex i = *current_;
  const Duration x = age_ + 1;
  switch (model_) {
    case UrnModel::Smbs: {
      if (!draw_holding(systems_[i], i, std::nullopt, x, rng)) break;
      const StateIndex j = draw_jump(jump_urns_[i], i, 0, rng);
      record_jump(i, j);
      return j;
    }
    case UrnModel::VariantB: {
      if (!draw_holding(systems_[i], i, std::nullopt, x, rng)) break;
      const StateIndex j = draw_jump(jump_urn(i, x), i, x, rng);
      record_jump(i, j);
      return j;
    }
    case UrnModel::VariantA: {
      if (!pending_target_) pending_target_ = draw_jump(jump_urns_[i], i, 0, rng);
      const StateIndex j = *pending_target_;
      if (!draw_holding(holding_system(i, j), i, j, x, rng)) break;
      record_jump(i, j);
      return j;
    }
  }
  ++age_;
  return i;
}

void UrnProcess::observe(StateIndex next) {
  require_position();
  if (next >= n_) throw std::invalid_argument("next state outside the urn system");
  if (model_ == UrnModel::VariantA)
    throw std::logic_error("variant A cannot be driven by observed states: its next-state draw is hidden");
  const StateIndex i = *current_;
  const Duration x = age_ + 1;
  if (x > cap_) throw std::runtime_error(fmt::format("BS-system walk exceeded {} urns", cap_));
  if (next == i) {
    systems_[i].reinforce(x, false);
    ++age_;
    return;
  }
  systems_[i].reinforce(x, true);
  (model_ == UrnModel::Smbs ? jump_urns_[i] : jump_urn(i, x)).reinforce(next);
  record_jump(i, next);
}

VisitCounts UrnProcess::recurrence_diagnostics() const { return {visits_, transitions_}; }

// -- generation --------------------------------------------------------------

PathDecomposition rup_generate(UrnProcess& state, StateIndex start, Count n_jumps, Rng& rng) {
  if (n_jumps < 0) throw std::invalid_argument("n_jumps must be >= 0");
  state.restart(start);
  PathDecomposition d;
  d.visited.push_back(start);
  Duration time = 0;
  Duration holding = 0;
  while (d.n_jumps < n_jumps) {
    const StateIndex before = state.current();
    const StateIndex next = state.step(rng);
    ++time;
    ++holding;
    if (next != before) {
      d.holding.push_back(holding);
      d.visited.push_back(next);
      d.jump_times.push_back(time);
      ++d.n_jumps;
      holding = 0;
    }
  }
  d.terminal_age = 0;
  return d;
}

StateSequence rup_sample_path(UrnProcess& state, StateIndex start, Duration horizon, Rng& rng) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  state.restart(start);
  StateSequence path{start};
  path.reserve(static_cast<std::size_t>(horizon) + 1);
  for (Duration t = 0; t < horizon; ++t) path.push_back(state.step(rng));
  return path;
}

}  // namespace smbs
