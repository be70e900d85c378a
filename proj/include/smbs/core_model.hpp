#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smbs {

/// Dense index of a state inside a StateSpace (0..size-1).
using StateIndex = std::size_t;
/// Holding times, block lengths and path times.
using Duration = std::int64_t;
using Count = std::int64_t;

/// Observed path s_0..s_t, stored as dense state indices.
using StateSequence = std::vector<StateIndex>;

/// Finite ordered state space. External ids are small non-negative integers;
/// everything inside the library works on dense indices.
class StateSpace {
 public:
  explicit StateSpace(std::vector<int> ids, std::vector<std::string> labels = {});

  /// Space with ids 0..n-1.
  static StateSpace with_size(std::size_t n);

  std::size_t size() const { return ids_.size(); }
  int id_of(StateIndex index) const { return ids_.at(index); }
  const std::string& label_of(StateIndex index) const { return labels_.at(index); }
  std::optional<StateIndex> find(int id) const;
  /// Throws std::invalid_argument for an unknown id.
  StateIndex index_of(int id) const;
  const std::vector<int>& ids() const { return ids_; }

  StateSequence from_ids(const std::vector<int>& ids) const;
  std::vector<int> to_ids(const StateSequence& path) const;

 private:
  std::vector<int> ids_;
  std::vector<std::string> labels_;
};

/// Sparse histogram over positive lengths. Interval queries follow the
/// (a,b] convention: at_most(b) - at_most(a) counts lengths in (a,b].
class Histogram {
 public:
  void add(Duration length, Count n = 1);

  Count at(Duration length) const;
  /// Count of lengths <= l.
  Count at_most(Duration length) const;
  /// Count of lengths >= l.
  Count at_least(Duration length) const;
  /// Count of lengths > l.
  Count greater_than(Duration length) const { return at_least(length + 1); }
  Count total() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::optional<Duration> max_length() const;

  const std::vector<std::pair<Duration, Count>>& entries() const { return entries_; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  // Sorted by length; counts strictly positive.
  std::vector<std::pair<Duration, Count>> entries_;
  Count total_ = 0;
};

/// Jump form of a path: visited states, completed holding times and the age
/// of the terminal block.
struct PathDecomposition {
  Count n_jumps = 0;
  std::vector<StateIndex> visited;
  std::vector<Duration> holding;
  Duration terminal_age = 0;
  std::vector<Duration> jump_times;

  /// x(t) = l(t) + 1
  Duration terminal_age_next() const { return terminal_age + 1; }
  /// t, the time of the last observation.
  Duration horizon() const;

  friend bool operator==(const PathDecomposition&, const PathDecomposition&) = default;
};

/// Sufficient statistics of an observed path.
struct CountingStats {
  /// block_counts[i]: lengths of non-terminal i-blocks.
  std::vector<Histogram> block_counts;
  /// transitions[i][j] = M^{i,j}(t); zero diagonal.
  std::vector<std::vector<Count>> transitions;
  /// pair_block_counts[i][j]: lengths of non-terminal i-blocks followed by a j-block.
  std::vector<std::vector<Histogram>> pair_block_counts;
  StateIndex terminal_state = 0;
  Duration terminal_age = 0;

  /// Empty statistics for a path consisting of `start` only.
  static CountingStats fresh(std::size_t n_states, StateIndex start);

  std::size_t n_states() const { return block_counts.size(); }
  Duration age_next() const { return terminal_age + 1; }
  Count transitions_from(StateIndex i) const;
  Count n_jumps() const;

  friend bool operator==(const CountingStats&, const CountingStats&) = default;
};

/// Throws std::invalid_argument on an empty path or an index outside the space.
void validate_path(const StateSequence& path, std::size_t n_states);

PathDecomposition decompose_path(const StateSequence& path, std::size_t n_states);

CountingStats count_statistics(const StateSequence& path, std::size_t n_states);

/// Inverse of decompose_path. Requires sum(holding) + terminal_age == horizon.
StateSequence compose_path(const PathDecomposition& jumps, Duration horizon);

/// Records one more observed time step in place: a stay ages the terminal
/// block, a jump closes it.
void advance_stats(CountingStats& stats, StateIndex next);

}  // namespace smbs
