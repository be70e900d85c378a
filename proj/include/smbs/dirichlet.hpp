#pragma once

#include <span>
#include <vector>

#include "smbs/core_model.hpp"
#include "smbs/random.hpp"

namespace smbs {

/// Dir(m) on a finite state space; base[j] = m({j}).
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> base);

  const std::vector<double>& base() const { return base_; }
  double mass(StateIndex j) const { return base_.at(j); }
  double total() const { return total_; }
  std::size_t size() const { return base_.size(); }

  friend bool operator==(const DirichletParams&, const DirichletParams&) = default;

 private:
  std::vector<double> base_;
  double total_ = 0.0;
};

/// m_*({j}) = m({j}) + counts[j].
DirichletParams dir_posterior(const DirichletParams& prior, std::span<const Count> counts);

/// E[P({j})] = m({j}) / m(E).
double dir_mean(const DirichletParams& params, StateIndex j);

/// One draw of P. Entries with zero base mass are exactly zero.
std::vector<double> dir_sample(const DirichletParams& params, Rng& rng);

}  // namespace smbs
