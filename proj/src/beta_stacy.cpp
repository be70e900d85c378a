#include "smbs/beta_stacy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace smbs {

namespace {

constexpr double kHazardOvershoot = 1e-14;
constexpr double kTableMassTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp_probability(double h, Duration t) {
  if (h < 0.0) {
    if (h < -kHazardOvershoot) throw std::logic_error(fmt::format("negative hazard {} at t={}", h, t));
    return 0.0;
  }
  if (h > 1.0) {
    if (h - 1.0 > kHazardOvershoot) throw std::logic_error(fmt::format("hazard {} > 1 at t={}", h, t));
    return 1.0;
  }
  return h;
}

// Exponent t^k - (t-1)^k of the discrete Weibull hazard.
double weibull_increment(Duration t, double k) {
  const double td = static_cast<double>(t);
  return std::pow(td, k) - std::pow(td - 1.0, k);
}

}  // namespace

// -- PrecisionFunction ------------------------------------------------------

void PrecisionFunction::validate() const {
  for (double c : head)
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("precision values must be positive");
  if (!(tail > 0.0) || !std::isfinite(tail)) throw std::invalid_argument("precision tail must be positive");
}

double PrecisionFunction::at(Duration t) const {
  if (t < 1) throw std::invalid_argument("precision is defined for t >= 1");
  const auto idx = static_cast<std::size_t>(t - 1);
  return idx < head.size() ? head[idx] : tail;
}

// -- CenteringDistribution --------------------------------------------------

CenteringDistribution::CenteringDistribution(Family family) : family_(std::move(family)) {
  std::visit(overloaded{
                 [](const GeometricCentering& g) {
                   if (!(g.p > 0.0 && g.p <= 1.0))
                     throw std::invalid_argument("geometric p must lie in (0,1]");
                 },
                 [](const DiscreteWeibullCentering& w) {
                   if (!(w.q > 0.0 && w.q < 1.0)) throw std::invalid_argument("discrete Weibull q must lie in (0,1)");
                   if (!(w.k > 0.0) || !std::isfinite(w.k))
                     throw std::invalid_argument("discrete Weibull k must be positive");
                 },
                 [](const UniformCentering& u) {
                   if (u.K < 1) throw std::invalid_argument("uniform K must be >= 1");
                 },
                 [this](const TableCentering& tab) {
                   double sum = 0.0;
                   for (double p : tab.pmf) {
                     if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("table pmf must be non-negative");
                     sum += p;
                   }
                   if (sum > 1.0 + kTableMassTolerance) throw std::invalid_argument("table pmf sums above 1");
                   table_tail_mass_ = (1.0 - sum > kTableMassTolerance) ? 1.0 - sum : 0.0;
                   if (table_tail_mass_ > 0.0 && !(tab.tail_rate > 0.0 && tab.tail_rate <= 1.0))
                     throw std::invalid_argument("table tail_rate must lie in (0,1]");
                   suffix_.assign(tab.pmf.size() + 1, 0.0);
                   for (std::size_t j = tab.pmf.size(); j-- > 0;) suffix_[j] = suffix_[j + 1] + tab.pmf[j];
                 },
             },
             family_);
}

std::string CenteringDistribution::family_name() const {
  return std::visit(overloaded{
                        [](const GeometricCentering&) { return std::string("geometric"); },
                        [](const DiscreteWeibullCentering&) { return std::string("discrete_weibull1"); },
                        [](const UniformCentering&) { return std::string("uniform"); },
                        [](const TableCentering&) { return std::string("table"); },
                    },
                    family_);
}

double CenteringDistribution::pmf(Duration t) const {
  if (t < 1) return 0.0;
  return std::visit(
      overloaded{
          [t](const GeometricCentering& g) {
            return g.p * std::pow(1.0 - g.p, static_cast<double>(t - 1));
          },
          [t](const DiscreteWeibullCentering& w) {
            return std::pow(w.q, std::pow(static_cast<double>(t - 1), w.k)) *
                   -std::expm1(weibull_increment(t, w.k) * std::log(w.q));
          },
          [t](const UniformCentering& u) { return t <= u.K ? 1.0 / static_cast<double>(u.K) : 0.0; },
          [this, t](const TableCentering& tab) {
            const auto n = static_cast<Duration>(tab.pmf.size());
            if (t <= n) return tab.pmf[static_cast<std::size_t>(t - 1)];
            if (table_tail_mass_ == 0.0) return 0.0;
            return table_tail_mass_ * tab.tail_rate *
                   std::pow(1.0 - tab.tail_rate, static_cast<double>(t - n - 1));
          },
      },
      family_);
}

double CenteringDistribution::survival_after(Duration t) const {
  if (t < 1) return 1.0;
  return std::visit(
      overloaded{
          [t](const GeometricCentering& g) { return std::pow(1.0 - g.p, static_cast<double>(t)); },
          [t](const DiscreteWeibullCentering& w) {
            return std::pow(w.q, std::pow(static_cast<double>(t), w.k));
          },
          [t](const UniformCentering& u) {
            return t < u.K ? static_cast<double>(u.K - t) / static_cast<double>(u.K) : 0.0;
          },
          [this, t](const TableCentering& tab) {
            const auto n = static_cast<Duration>(tab.pmf.size());
            if (t < n) return suffix_[static_cast<std::size_t>(t)] + table_tail_mass_;
            if (table_tail_mass_ == 0.0) return 0.0;
            return table_tail_mass_ * std::pow(1.0 - tab.tail_rate, static_cast<double>(t - n));
          },
      },
      family_);
}

double CenteringDistribution::cdf(Duration t) const {
  if (t < 1) return 0.0;
  // Sum the pmf for short prefixes so that small cdf values keep full precision.
  if (t <= 64) {
    double s = 0.0;
    for (Duration k = 1; k <= t; ++k) s += pmf(k);
    return std::min(s, 1.0);
  }
  return 1.0 - survival_after(t);
}

std::optional<double> CenteringDistribution::hazard(Duration t) const {
  if (t < 1) throw std::invalid_argument("hazard is defined for t >= 1");
  return std::visit(
      overloaded{
          [t](const GeometricCentering& g) -> std::optional<double> {
            if (g.p == 1.0 && t > 1) return std::nullopt;
            return g.p;
          },
          [t](const DiscreteWeibullCentering& w) -> std::optional<double> {
            return -std::expm1(weibull_increment(t, w.k) * std::log(w.q));
          },
          [t](const UniformCentering& u) -> std::optional<double> {
            if (t > u.K) return std::nullopt;
            return 1.0 / static_cast<double>(u.K - t + 1);
          },
          [this, t](const TableCentering& tab) -> std::optional<double> {
            const auto n = static_cast<Duration>(tab.pmf.size());
            if (t <= n) {
              const double from = suffix_[static_cast<std::size_t>(t - 1)] + table_tail_mass_;
              if (!(from > 0.0)) return std::nullopt;
              return std::min(1.0, tab.pmf[static_cast<std::size_t>(t - 1)] / from);
            }
            if (table_tail_mass_ == 0.0) return std::nullopt;
            return tab.tail_rate;
          },
      },
      family_);
}

// -- BetaStacyParams --------------------------------------------------------

BetaStacyParams::BetaStacyParams(PrecisionFunction precision, CenteringDistribution centering)
    : precision_(std::move(precision)), centering_(std::move(centering)) {
  precision_.validate();
}

double BetaStacyParams::black_mass(Duration t) const {
  return precision_.at(t) * centering_.pmf(t) + static_cast<double>(exact_.at(t));
}

double BetaStacyParams::white_mass(Duration t) const {
  return precision_.at(t) * centering_.survival_after(t) +
         static_cast<double>(exact_.greater_than(t) + censored_.at_least(t));
}

double BetaStacyParams::total_mass(Duration t) const {
  return precision_.at(t) * centering_.survival_from(t) +
         static_cast<double>(exact_.at_least(t) + censored_.at_least(t));
}

double BetaStacyParams::hazard(Duration t) const {
  if (t < 1) throw std::invalid_argument("hazard is defined for t >= 1");
  if (exact_.at_least(t) == 0 && censored_.at_least(t) == 0) {
    // No data at or beyond t: the hazard is the centering hazard, in closed form.
    auto h0 = centering_.hazard(t);
    if (!h0) throw std::domain_error(fmt::format("no holding-time mass at or beyond t={}", t));
    return *h0;
  }
  const double total = total_mass(t);
  return clamp_probability(black_mass(t) / total, t);
}

double BetaStacyParams::survival(Duration t) const {
  if (is_prior()) return centering_.survival_after(t);
  double s = 1.0;
  for (Duration k = 1; k <= t && s > 0.0; ++k) s *= 1.0 - hazard(k);
  return s;
}

void BetaStacyParams::add_exact(Duration t, Count n) {
  if (t < 1) throw std::invalid_argument(fmt::format("exact observation {} is not a positive integer", t));
  exact_.add(t, n);
}

void BetaStacyParams::add_censored(Duration t_star, Count n) {
  if (t_star < 1) throw std::invalid_argument(fmt::format("censoring time {} must be >= 1", t_star));
  censored_.add(t_star, n);
}

BetaStacyParams bs_posterior_exact(const BetaStacyParams& prior, std::span<const Duration> observations) {
  for (auto t : observations)
    if (t < 1) throw std::invalid_argument(fmt::format("exact observation {} is not a positive integer", t));
  BetaStacyParams post = prior;
  for (auto t : observations) post.add_exact(t);
  return post;
}

BetaStacyParams bs_posterior_censored(const BetaStacyParams& prior, Duration t_star) {
  BetaStacyParams post = prior;
  post.add_censored(t_star);
  return post;
}

double bs_mean(const BetaStacyParams& params, Duration t) {
  if (t < 1) throw std::invalid_argument("bs_mean is defined for t >= 1");
  if (params.is_prior()) return params.centering().cdf(t);
  return 1.0 - params.survival(t);
}

// -- SampledSurvival --------------------------------------------------------

SampledSurvival::SampledSurvival(BetaStacyParams params, std::uint64_t seed)
    : params_(std::move(params)), rng_(seed) {}

void SampledSurvival::extend_to(Duration t) {
  while (static_cast<Duration>(hazards_.size()) < t) {
    const Duration s = static_cast<Duration>(hazards_.size()) + 1;
    const double before = survivals_.empty() ? 1.0 : survivals_.back();
    const double a = params_.black_mass(s);
    const double b = params_.white_mass(s);
    double u;
    if (a == 0.0 && b == 0.0) {
      if (auto h0 = params_.centering().hazard(s)) {
        // Prior masses underflowed; Beta(eps*h, eps*(1-h)) -> Bernoulli(h).
        u = uniform01(rng_) < *h0 ? 1.0 : 0.0;
      } else if (before == 0.0) {
        u = 1.0;  // unreachable age, value irrelevant
      } else {
        throw std::domain_error(fmt::format("Beta(0,0) hazard at t={}: no holding-time mass at or beyond t", s));
      }
    } else {
      u = beta_variate(a, b, rng_);
    }
    hazards_.push_back(u);
    survivals_.push_back(before * (1.0 - u));
  }
}

double SampledSurvival::hazard(Duration t) {
  if (t < 1) throw std::invalid_argument("hazard is defined for t >= 1");
  extend_to(t);
  return hazards_[static_cast<std::size_t>(t - 1)];
}

double SampledSurvival::survival(Duration t) {
  if (t < 1) return 1.0;
  extend_to(t);
  return survivals_[static_cast<std::size_t>(t - 1)];
}

SampledSurvival bs_sample(const BetaStacyParams& params, Rng& rng) {
  return SampledSurvival(params, rng());
}

}  // namespace smbs
