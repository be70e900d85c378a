#include "smbs/config.hpp"

#include <fstream>

#include <fmt/format.h>

namespace smbs {

namespace {

const Json& require(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(fmt::format("{}: missing field \"{}\"", where, key));
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key, const char* where) {
  try {
    return require(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: field \"{}\": {}", where, key, e.what()));
  }
}

const Json& find_state_block(const Json& states, int id) {
  for (const auto& block : states)
    if (get_as<int>(block, "state", "prior state block") == id) return block;
  throw ConfigError(fmt::format("prior has no block for state {}", id));
}

BetaStacyParams holding_from_json(const Json& block, const char* where) {
  return BetaStacyParams(precision_from_json(require(block, "precision", where)),
                         centering_from_json(require(block, "centering", where)));
}

template <class F>
auto wrap(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

CenteringDistribution centering_from_json(const Json& j) {
  return wrap([&] {
    const auto family = get_as<std::string>(j, "family", "centering");
    if (family == "geometric") return CenteringDistribution::geometric(get_as<double>(j, "p", "geometric centering"));
    if (family == "discrete_weibull1")
      return CenteringDistribution::discrete_weibull(get_as<double>(j, "q", "discrete_weibull1 centering"),
                                                     get_as<double>(j, "k", "discrete_weibull1 centering"));
    if (family == "uniform") return CenteringDistribution::uniform(get_as<Duration>(j, "K", "uniform centering"));
    if (family == "table")
      return CenteringDistribution::table(get_as<std::vector<double>>(j, "pmf", "table centering"),
                                          j.value("tail_rate", 0.5));
    throw ConfigError(fmt::format("unknown centering family \"{}\"", family));
  });
}

Json centering_to_json(const CenteringDistribution& f0) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GeometricCentering>) {
          return {{"family", "geometric"}, {"p", f.p}};
        } else if constexpr (std::is_same_v<T, DiscreteWeibullCentering>) {
          return {{"family", "discrete_weibull1"}, {"q", f.q}, {"k", f.k}};
        } else if constexpr (std::is_same_v<T, UniformCentering>) {
          return {{"family", "uniform"}, {"K", f.K}};
        } else {
          return {{"family", "table"}, {"pmf", f.pmf}, {"tail_rate", f.tail_rate}};
        }
      },
      f0.family());
}

PrecisionFunction precision_from_json(const Json& j) {
  return wrap([&] {
    PrecisionFunction c;
    if (j.is_number()) {
      c = PrecisionFunction::constant(j.get<double>());
    } else {
      c.head = j.value("head", std::vector<double>{});
      c.tail = get_as<double>(j, "tail", "precision");
    }
    c.validate();
    return c;
  });
}

StateSpace state_space_from_json(const Json& j) {
  return wrap([&] {
    if (!j.is_array()) throw ConfigError("\"states\" must be an array");
    std::vector<int> ids;
    std::vector<std::string> labels;
    bool any_label = false;
    for (const auto& s : j) {
      if (s.is_number_integer()) {
        ids.push_back(s.get<int>());
        labels.push_back(std::to_string(ids.back()));
      } else {
        ids.push_back(get_as<int>(s, "id", "state"));
        any_label = any_label || s.contains("label");
        labels.push_back(s.value("label", std::to_string(ids.back())));
      }
    }
    return any_label ? StateSpace(ids, labels) : StateSpace(ids);
  });
}

DirichletParams jump_masses_from_json(const Json& j, const StateSpace& space) {
  return wrap([&] {
    if (!j.is_array()) throw ConfigError("jump masses must be an array of {state, mass}");
    std::vector<double> base(space.size(), 0.0);
    for (const auto& e : j) base[space.index_of(get_as<int>(e, "state", "jump mass"))] += get_as<double>(e, "mass", "jump mass");
    return DirichletParams(std::move(base));
  });
}

SmbsParams smbs_prior_from_json(const Json& prior, const StateSpace& space) {
  return wrap([&] {
    const auto& states = require(prior, "states", "prior");
    std::vector<StatePrior> out;
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& block = find_state_block(states, space.id_of(i));
      out.push_back({jump_masses_from_json(require(block, "jump_masses", "prior state block"), space),
                     holding_from_json(block, "prior state block")});
    }
    return SmbsParams(std::move(out));
  });
}

VariantBParams variant_b_prior_from_json(const Json& prior, const StateSpace& space) {
  return wrap([&] {
    const auto& states = require(prior, "states", "prior");
    std::vector<BetaStacyParams> holding;
    std::vector<DirichletParams> defaults;
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& block = find_state_block(states, space.id_of(i));
      holding.push_back(holding_from_json(block, "prior state block"));
      const auto& dm = block.contains("default_masses") ? block.at("default_masses")
                                                        : require(block, "jump_masses", "prior state block");
      defaults.push_back(jump_masses_from_json(dm, space));
    }
    VariantBParams out(std::move(holding), std::move(defaults));
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& block = find_state_block(states, space.id_of(i));
      if (!block.contains("time_indexed_jump_masses")) continue;
      for (const auto& e : block.at("time_indexed_jump_masses"))
        out.set_jump(i, get_as<Duration>(e, "t", "time-indexed jump masses"),
                     jump_masses_from_json(require(e, "masses", "time-indexed jump masses"), space));
    }
    return out;
  });
}

VariantAParams variant_a_prior_from_json(const Json& prior, const StateSpace& space) {
  return wrap([&] {
    const auto& states = require(prior, "states", "prior");
    const auto n = space.size();
    std::vector<DirichletParams> jump;
    std::vector<std::vector<std::optional<BetaStacyParams>>> pairs(n, std::vector<std::optional<BetaStacyParams>>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& block = find_state_block(states, space.id_of(i));
      jump.push_back(jump_masses_from_json(require(block, "jump_masses", "prior state block"), space));
      if (block.contains("precision") && block.contains("centering")) {
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) pairs[i][j] = holding_from_json(block, "prior state block");
      }
    }
    if (prior.contains("pair_holding")) {
      for (const auto& e : prior.at("pair_holding")) {
        const auto i = space.index_of(get_as<int>(e, "from", "pair holding"));
        const auto j = space.index_of(get_as<int>(e, "to", "pair holding"));
        if (i == j) throw ConfigError("pair holding prior needs distinct states");
        pairs[i][j] = holding_from_json(e, "pair holding");
      }
    }
    return VariantAParams(std::move(jump), std::move(pairs));
  });
}

SemiMarkovTruth truth_from_json(const Json& truth, const StateSpace& space) {
  return wrap([&] {
    SemiMarkovTruth t{space, get_as<std::vector<std::vector<double>>>(truth, "transition", "truth"), {}, 0, 0};
    for (const auto& h : require(truth, "holding", "truth")) t.holding.push_back(centering_from_json(h));
    t.start = truth.contains("start") ? space.index_of(truth.at("start").get<int>()) : 0;
    t.horizon = truth.value("horizon", Duration{1000});
    t.validate();
    return t;
  });
}

SmbsParams with_constant_precision(const SmbsParams& prior, double c) {
  std::vector<StatePrior> states;
  for (const auto& s : prior.states()) {
    if (!s.holding.is_prior()) throw std::invalid_argument("precision can only be replaced on a fresh prior");
    states.push_back({s.jump, BetaStacyParams(PrecisionFunction::constant(c), s.holding.centering())});
  }
  return SmbsParams(std::move(states));
}

// -- RunConfig ---------------------------------------------------------------

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot open config file {}", file.string()));
  Json raw;
  try {
    in >> raw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", file.string(), e.what()));
  }
  return from_json(std::move(raw), file.has_parent_path() ? file.parent_path() : std::filesystem::path("."));
}

RunConfig RunConfig::from_json(Json raw, std::filesystem::path base_dir) {
  RunConfig cfg;
  cfg.raw = std::move(raw);
  cfg.base_dir = std::move(base_dir);
  cfg.space = state_space_from_json(require(cfg.raw, "states", "config"));
  return cfg;
}

Json RunConfig::section(const std::string& key) const {
  return raw.contains(key) ? raw.at(key) : Json::object();
}

SmbsParams RunConfig::prior() const { return smbs_prior_from_json(require(raw, "prior", "config"), space); }

std::optional<SemiMarkovTruth> RunConfig::truth() const {
  if (!raw.contains("truth")) return std::nullopt;
  return truth_from_json(raw.at("truth"), space);
}

std::optional<std::filesystem::path> RunConfig::data_path() const {
  if (!raw.contains("data")) return std::nullopt;
  std::filesystem::path p = raw.at("data").get<std::string>();
  return p.is_absolute() ? p : base_dir / p;
}

}  // namespace smbs
