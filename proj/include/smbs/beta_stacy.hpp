#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smbs/core_model.hpp"
#include "smbs/random.hpp"

namespace smbs {

/// c(t): explicit values for t = 1..head.size(), `tail` afterwards.
struct PrecisionFunction {
  std::vector<double> head;
  double tail = 1.0;

  static PrecisionFunction constant(double c) { return {{}, c}; }
  void validate() const;
  double at(Duration t) const;

  friend bool operator==(const PrecisionFunction&, const PrecisionFunction&) = default;
};

struct GeometricCentering {
  double p;
};
/// Type-I discrete Weibull: F(t) = 1 - q^(t^k).
struct DiscreteWeibullCentering {
  double q;
  double k;
};
struct UniformCentering {
  Duration K;
};
/// pmf[0..n-1] on 1..n; remaining mass spread geometrically with rate tail_rate.
struct TableCentering {
  std::vector<double> pmf;
  double tail_rate = 0.5;
};

/// Centering distribution F0 on the positive integers. Every query is in
/// closed form; survivals are never obtained as 1 - cdf.
class CenteringDistribution {
 public:
  using Family =
      std::variant<GeometricCentering, DiscreteWeibullCentering, UniformCentering, TableCentering>;

  explicit CenteringDistribution(Family family);

  static CenteringDistribution geometric(double p) { return CenteringDistribution(GeometricCentering{p}); }
  static CenteringDistribution discrete_weibull(double q, double k) {
    return CenteringDistribution(DiscreteWeibullCentering{q, k});
  }
  static CenteringDistribution uniform(Duration K) { return CenteringDistribution(UniformCentering{K}); }
  static CenteringDistribution table(std::vector<double> pmf, double tail_rate = 0.5) {
    return CenteringDistribution(TableCentering{std::move(pmf), tail_rate});
  }

  const Family& family() const { return family_; }
  std::string family_name() const;

  /// F0({t}); zero for t < 1.
  double pmf(Duration t) const;
  /// F0((t,+inf)); one for t < 1.
  double survival_after(Duration t) const;
  /// F0([t,+inf))
  double survival_from(Duration t) const { return survival_after(t - 1); }
  /// F0(t)
  double cdf(Duration t) const;
  /// F0({t}) / F0([t,+inf)); nullopt when there is no mass at or beyond t.
  std::optional<double> hazard(Duration t) const;

 private:
  Family family_;
  // Table family: suffix[t-1] = sum of pmf over t..n (finite part only).
  std::vector<double> suffix_;
  double table_tail_mass_ = 0.0;
};

inline bool operator==(const GeometricCentering& a, const GeometricCentering& b) { return a.p == b.p; }
inline bool operator==(const DiscreteWeibullCentering& a, const DiscreteWeibullCentering& b) {
  return a.q == b.q && a.k == b.k;
}
inline bool operator==(const UniformCentering& a, const UniformCentering& b) { return a.K == b.K; }
inline bool operator==(const TableCentering& a, const TableCentering& b) {
  return a.pmf == b.pmf && a.tail_rate == b.tail_rate;
}
inline bool operator==(const CenteringDistribution& a, const CenteringDistribution& b) {
  return a.family() == b.family();
}

/// BS(c, F0) together with the observations absorbed by conjugate updates.
/// Posterior Beta parameters at t are
///   black(t) = c(t)F0({t}) + N({t})
///   white(t) = c(t)F0((t,inf)) + N((t,inf)) + C([t,inf))
/// with N the exact observations and C the censoring times.
class BetaStacyParams {
 public:
  BetaStacyParams(PrecisionFunction precision, CenteringDistribution centering);

  const PrecisionFunction& precision() const { return precision_; }
  const CenteringDistribution& centering() const { return centering_; }
  const Histogram& exact_observations() const { return exact_; }
  const Histogram& censored_observations() const { return censored_; }
  bool is_prior() const { return exact_.empty() && censored_.empty(); }

  double black_mass(Duration t) const;
  double white_mass(Duration t) const;
  double total_mass(Duration t) const;

  /// Posterior mean hazard at t. Throws std::domain_error when no mass is
  /// left at or beyond t.
  double hazard(Duration t) const;
  /// Posterior mean survival F_*((t,+inf)).
  double survival(Duration t) const;

  void add_exact(Duration t, Count n = 1);
  void add_censored(Duration t_star, Count n = 1);

  friend bool operator==(const BetaStacyParams&, const BetaStacyParams&) = default;

 private:
  PrecisionFunction precision_;
  CenteringDistribution centering_;
  Histogram exact_;
  Histogram censored_;
};

BetaStacyParams bs_posterior_exact(const BetaStacyParams& prior, std::span<const Duration> observations);
BetaStacyParams bs_posterior_censored(const BetaStacyParams& prior, Duration t_star);

/// E[F(t)] = 1 - F_*((t,+inf)).
double bs_mean(const BetaStacyParams& params, Duration t);

/// A random F ~ BS(c_*, F_*), evaluated lazily. Owns its generator; the
/// hazards U_t are drawn once, in order, and memoized.
class SampledSurvival {
 public:
  SampledSurvival(BetaStacyParams params, std::uint64_t seed);

  /// U_t = F({t}) / F([t,+inf)).
  double hazard(Duration t);
  /// F((t,+inf)) = prod_{k<=t} (1 - U_k).
  double survival(Duration t);
  double cdf(Duration t) { return 1.0 - survival(t); }

  const BetaStacyParams& params() const { return params_; }

 private:
  void extend_to(Duration t);

  BetaStacyParams params_;
  Rng rng_;
  std::vector<double> hazards_;    // hazards_[t-1] = U_t
  std::vector<double> survivals_;  // survivals_[t-1] = F((t,inf))
};

SampledSurvival bs_sample(const BetaStacyParams& params, Rng& rng);

}  // namespace smbs
