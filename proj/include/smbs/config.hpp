#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smbs/beta_stacy.hpp"
#include "smbs/core_model.hpp"
#include "smbs/simstudy.hpp"
#include "smbs/smbs.hpp"

namespace smbs {

using Json = nlohmann::json;

/// Thrown for malformed or inconsistent configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"family":"geometric","p":0.3} | {"family":"discrete_weibull1","q":0.3,"k":0.5}
/// | {"family":"uniform","K":10} | {"family":"table","pmf":[...],"tail_rate":r}
CenteringDistribution centering_from_json(const Json& j);
Json centering_to_json(const CenteringDistribution& f0);

/// A number (constant c) or {"head":[...], "tail": c}.
PrecisionFunction precision_from_json(const Json& j);

/// [1,2,3] or [{"id":1,"label":"..."}, ...]
StateSpace state_space_from_json(const Json& j);

/// [{"state": id, "mass": x}, ...] -> dense base measure.
DirichletParams jump_masses_from_json(const Json& j, const StateSpace& space);

/// "prior": {"states": [{"state", "jump_masses", "precision", "centering"}, ...]}
SmbsParams smbs_prior_from_json(const Json& prior, const StateSpace& space);
/// Per-state blocks may add "default_masses" (else "jump_masses") and
/// "time_indexed_jump_masses": [{"t": s, "masses": [...]}].
VariantBParams variant_b_prior_from_json(const Json& prior, const StateSpace& space);
/// Per-state "jump_masses"; holding priors per pair from "pair_holding":
/// [{"from", "to", "precision", "centering"}], defaulting to the state's own
/// "precision"/"centering".
VariantAParams variant_a_prior_from_json(const Json& prior, const StateSpace& space);

/// "truth": {"transition": [[...]], "holding": [centering...], "start": id, "horizon": t}
SemiMarkovTruth truth_from_json(const Json& truth, const StateSpace& space);

/// Same prior with c(t) = c for every state and t.
SmbsParams with_constant_precision(const SmbsParams& prior, double c);

struct RunConfig {
  Json raw;
  std::filesystem::path base_dir;
  StateSpace space = StateSpace::with_size(1);

  static RunConfig load(const std::filesystem::path& file);
  static RunConfig from_json(Json raw, std::filesystem::path base_dir);

  bool has(const std::string& key) const { return raw.contains(key); }
  /// raw[section] or an empty object.
  Json section(const std::string& key) const;
  SmbsParams prior() const;
  std::optional<SemiMarkovTruth> truth() const;
  /// "data" resolved against the config file's directory.
  std::optional<std::filesystem::path> data_path() const;
};

}  // namespace smbs
