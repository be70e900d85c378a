#include "smbs/core_model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

namespace smbs {

StateSpace::StateSpace(std::vector<int> ids, std::vector<std::string> labels)
    : ids_(std::move(ids)), labels_(std::move(labels)) {
  if (ids_.empty()) throw std::invalid_argument("state space must be non-empty");
  std::unordered_set<int> seen;
  for (int id : ids_) {
    if (id < 0) throw std::invalid_argument(fmt::format("state id {} is negative", id));
    if (!seen.insert(id).second)
      throw std::invalid_argument(fmt::format("duplicate state id {}", id));
  }
  if (labels_.empty()) {
    for (int id : ids_) labels_.push_back(std::to_string(id));
  } else if (labels_.size() != ids_.size()) {
    throw std::invalid_argument("state labels must match state ids");
  }
}

StateSpace StateSpace::with_size(std::size_t n) {
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return StateSpace(std::move(ids));
}

std::optional<StateIndex> StateSpace::find(int id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<StateIndex>(it - ids_.begin());
}

StateIndex StateSpace::index_of(int id) const {
  auto idx = find(id);
  if (!idx) throw std::invalid_argument(fmt::format("unknown state id {}", id));
  return *idx;
}

StateSequence StateSpace::from_ids(const std::vector<int>& ids) const {
  StateSequence out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(index_of(id));
  return out;
}

std::vector<int> StateSpace::to_ids(const StateSequence& path) const {
  std::vector<int> out;
  out.reserve(path.size());
  for (auto s : path) out.push_back(id_of(s));
  return out;
}

// -- Histogram --------------------------------------------------------------

void Histogram::add(Duration length, Count n) {
  if (length < 1) throw std::invalid_argument("histogram lengths must be positive");
  if (n < 0) throw std::invalid_argument("histogram counts must be non-negative");
  if (n == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), length,
                             [](const auto& e, Duration l) { return e.first < l; });
  if (it != entries_.end() && it->first == length) {
    it->second += n;
  } else {
    entries_.insert(it, {length, n});
  }
  total_ += n;
}

Count Histogram::at(Duration length) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), length,
                             [](const auto& e, Duration l) { return e.first < l; });
  return (it != entries_.end() && it->first == length) ? it->second : 0;
}

Count Histogram::at_least(Duration length) const {
  Count n = 0;
  for (auto it = entries_.rbegin(); it != entries_.rend() && it->first >= length; ++it)
    n += it->second;
  return n;
}

Count Histogram::at_most(Duration length) const { return total_ - at_least(length + 1); }

std::optional<Duration> Histogram::max_length() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.back().first;
}

// -- PathDecomposition ------------------------------------------------------

Duration PathDecomposition::horizon() const {
  return std::accumulate(holding.begin(), holding.end(), Duration{0}) + terminal_age;
}

// -- CountingStats ----------------------------------------------------------

CountingStats CountingStats::fresh(std::size_t n_states, StateIndex start) {
  if (start >= n_states) throw std::invalid_argument("start state outside the state space");
  CountingStats s;
  s.block_counts.resize(n_states);
  s.transitions.assign(n_states, std::vector<Count>(n_states, 0));
  s.pair_block_counts.assign(n_states, std::vector<Histogram>(n_states));
  s.terminal_state = start;
  s.terminal_age = 0;
  return s;
}

Count CountingStats::transitions_from(StateIndex i) const {
  const auto& row = transitions.at(i);
  return std::accumulate(row.begin(), row.end(), Count{0});
}

Count CountingStats::n_jumps() const {
  Count n = 0;
  for (std::size_t i = 0; i < n_states(); ++i) n += transitions_from(i);
  return n;
}

// -- path operations --------------------------------------------------------

void validate_path(const StateSequence& path, std::size_t n_states) {
  if (path.empty()) throw std::invalid_argument("path must contain at least one state");
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (path[t] >= n_states)
      throw std::invalid_argument(
          fmt::format("state index {} at time {} outside a space of {} states", path[t], t,
                      n_states));
  }
}

PathDecomposition decompose_path(const StateSequence& path, std::size_t n_states) {
  validate_path(path, n_states);
  PathDecomposition d;
  d.visited.push_back(path.front());
  Duration block_start = 0;
  for (std::size_t t = 1; t < path.size(); ++t) {
    if (path[t] == path[t - 1]) continue;
    const auto now = static_cast<Duration>(t);
    d.holding.push_back(now - block_start);
    d.jump_times.push_back(now);
    d.visited.push_back(path[t]);
    block_start = now;
  }
  d.n_jumps = static_cast<Count>(d.holding.size());
  d.terminal_age = static_cast<Duration>(path.size()) - 1 - block_start;
  return d;
}

CountingStats count_statistics(const StateSequence& path, std::size_t n_states) {
  validate_path(path, n_states);
  auto stats = CountingStats::fresh(n_states, path.front());
  for (std::size_t t = 1; t < path.size(); ++t) advance_stats(stats, path[t]);
  return stats;
}

StateSequence compose_path(const PathDecomposition& jumps, Duration horizon) {
  if (jumps.visited.empty()) throw std::invalid_argument("decomposition has no visited states");
  if (jumps.visited.size() != jumps.holding.size() + 1 ||
      static_cast<Count>(jumps.holding.size()) != jumps.n_jumps)
    throw std::invalid_argument("visited/holding lengths disagree with the jump count");
  if (jumps.terminal_age < 0) throw std::invalid_argument("terminal age must be >= 0");
  for (auto h : jumps.holding)
    if (h < 1) throw std::invalid_argument("holding times must be positive");
  for (std::size_t k = 1; k < jumps.visited.size(); ++k)
    if (jumps.visited[k] == jumps.visited[k - 1])
      throw std::invalid_argument("consecutive visited states must differ");
  if (jumps.horizon() != horizon)
    throw std::invalid_argument(fmt::format(
        "holding times plus terminal age sum to {}, expected horizon {}", jumps.horizon(),
        horizon));

  StateSequence path;
  path.reserve(static_cast<std::size_t>(horizon) + 1);
  for (std::size_t k = 0; k < jumps.holding.size(); ++k)
    path.insert(path.end(), static_cast<std::size_t>(jumps.holding[k]), jumps.visited[k]);
  path.insert(path.end(), static_cast<std::size_t>(jumps.terminal_age) + 1,
              jumps.visited.back());
  return path;
}

void advance_stats(CountingStats& stats, StateIndex next) {
  if (next >= stats.n_states()) throw std::invalid_argument("next state outside the space");
  const StateIndex current = stats.terminal_state;
  if (next == current) {
    ++stats.terminal_age;
    return;
  }
  const Duration length = stats.terminal_age + 1;
  stats.block_counts[current].add(length);
  stats.pair_block_counts[current][next].add(length);
  ++stats.transitions[current][next];
  stats.terminal_state = next;
  stats.terminal_age = 0;
}

}  // namespace smbs
