// smbs command-line tool: simulate | fit | predict | urn-trace | simstudy.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "smbs/config.hpp"
#include "smbs/io.hpp"
#include "smbs/predictive.hpp"
#include "smbs/simstudy.hpp"
#include "smbs/urns.hpp"

namespace fs = std::filesystem;
using namespace smbs;

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
};

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", (dir / name).string()));
  return f;
}

RunConfig load_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required for this command");
  return RunConfig::load(o.config);
}

SmbsParams prior_of(const RunConfig& cfg) {
  auto prior = cfg.prior();
  if (cfg.has("c")) prior = with_constant_precision(prior, cfg.raw.at("c").get<double>());
  return prior;
}

std::vector<StateSequence> data_of(const RunConfig& cfg) {
  const auto p = cfg.data_path();
  if (!p) throw ConfigError("config has no \"data\" path file");
  if (!fs::exists(*p)) throw ConfigError(fmt::format("data file {} does not exist", p->string()));
  return read_paths(*p, cfg.space);
}

StateIndex state_of(const RunConfig& cfg, const Json& section, const char* key, StateIndex fallback) {
  return section.contains(key) ? cfg.space.index_of(section.at(key).get<int>()) : fallback;
}

StateSequence prefix_of(const StateSequence& path, std::int64_t m) {
  if (m < 0 || static_cast<std::size_t>(m) >= path.size()) return path;
  return StateSequence(path.begin(), path.begin() + m + 1);
}

// -- simulate --------------------------------------------------------------

void cmd_simulate(const Options& o) {
  const auto cfg = load_config(o);
  const auto sec = cfg.section("simulate");
  const auto n_paths = sec.value("n_paths", std::int64_t{1});
  const auto horizon = sec.value("horizon", Duration{100});
  const auto method = sec.value("method", std::string(cfg.has("truth") ? "truth" : "rsm"));
  const auto start = state_of(cfg, sec, "start", 0);

  std::vector<StateSequence> paths;
  for (std::int64_t s = 0; s < n_paths; ++s) {
    Rng rng = make_stream(o.seed, static_cast<std::uint64_t>(s));
    if (method == "truth") {
      auto truth = cfg.truth();
      if (!truth) throw ConfigError("simulate method \"truth\" needs a \"truth\" section");
      auto couple = truth->couple();
      paths.push_back(sm_sample_path(couple, start, horizon, rng));
    } else if (method == "prior") {
      auto couple = smbs_sample(prior_of(cfg), rng);
      paths.push_back(sm_sample_path(couple, start, horizon, rng));
    } else if (method == "rsm") {
      paths.push_back(rsm_extend_path(prior_of(cfg), {start}, horizon, rng));
    } else if (method == "urn") {
      UrnProcess urns(prior_of(cfg));
      paths.push_back(rup_sample_path(urns, start, horizon, rng));
    } else {
      throw ConfigError(fmt::format("unknown simulate method \"{}\"", method));
    }
  }
  auto f = open_out(o.out, "paths.csv");
  write_paths(f, paths, cfg.space);
}

// -- fit -------------------------------------------------------------------

std::string fit_file_name(std::int64_t m, double c) { return fmt::format("fit_M{}_c{:g}.csv", m, c); }

void cmd_fit(const Options& o) {
  const auto cfg = load_config(o);
  const auto sec = cfg.section("fit");
  const auto data = data_of(cfg);
  if (data.empty()) throw ConfigError("data file holds no paths");
  const auto t_max = sec.value("t_max", Duration{20});
  const auto n_samples = sec.value("n_samples", std::int64_t{100});
  const auto truth = cfg.truth();
  std::vector<StateIndex> states;
  if (sec.contains("states"))
    for (int id : sec.at("states").get<std::vector<int>>()) states.push_back(cfg.space.index_of(id));
  else
    for (StateIndex i = 0; i < cfg.space.size(); ++i) states.push_back(i);

  const auto base = cfg.prior();
  std::vector<std::optional<double>> cs;
  if (sec.contains("c")) {
    for (double c : sec.at("c").get<std::vector<double>>()) cs.emplace_back(c);
  } else if (cfg.has("c")) {
    cs.emplace_back(cfg.raw.at("c").get<double>());
  } else {
    cs.emplace_back(std::nullopt);
  }
  const auto ms = sec.value("prefix_lengths", std::vector<std::int64_t>{-1});

  for (auto m : ms) {
    std::vector<StateSequence> prefixes;
    for (const auto& p : data) prefixes.push_back(m == 0 ? StateSequence{} : prefix_of(p, m));
    for (const auto& c : cs) {
      const auto prior = c ? with_constant_precision(base, *c) : base;
      const auto post = m == 0 ? prior : smbs_posterior_multi(prior, prefixes);
      const auto name = ms.size() == 1 && m < 0 && cs.size() == 1 && !c
                            ? std::string("fit.csv")
                            : fit_file_name(m < 0 ? static_cast<std::int64_t>(data.front().size()) - 1 : m,
                                            c ? *c : base.holding(0).precision().tail);
      std::vector<HoldingFit> fits;
      for (auto i : states) {
        std::optional<CenteringDistribution> law;
        if (truth) law = truth->holding[i];
        fits.push_back(fit_holding(post, i, t_max, n_samples, mix_seed(o.seed, i), law));
      }
      auto f = open_out(o.out, name);
      write_fit_csv(f, fits, cfg.space);
    }
  }
}

// -- predict ---------------------------------------------------------------

void cmd_predict(const Options& o) {
  const auto cfg = load_config(o);
  const auto sec = cfg.section("predict");
  const auto data = data_of(cfg);
  if (data.empty()) throw ConfigError("data file holds no paths");
  const auto prefix = prefix_of(data.front(), sec.value("prefix_length", std::int64_t{-1}));
  const auto horizon = sec.value("horizon", Duration{100});
  const auto n_sims = sec.value("n_sims", std::int64_t{100000});
  const auto threads = sec.value("threads", 0u);
  const auto forecast = h_step_predictive(prior_of(cfg), prefix, horizon, n_sims, o.seed, threads);
  std::vector<double> nu;
  if (const auto truth = cfg.truth()) nu = limiting_distribution(*truth).nu;
  auto f = open_out(o.out, "forecast.csv");
  write_forecast_csv(f, forecast, cfg.space, nu);
}

// -- urn-trace -------------------------------------------------------------

void cmd_urn_trace(const Options& o) {
  const auto cfg = load_config(o);
  const auto sec = cfg.section("urn_trace");
  const auto model = sec.value("model", std::string("smbs"));
  const auto start = state_of(cfg, sec, "start", 0);
  const auto n_jumps = sec.value("n_jumps", Count{10});
  Rng rng(o.seed);

  std::optional<UrnProcess> urns;
  const auto& prior_json = cfg.raw.at("prior");
  if (model == "smbs")
    urns.emplace(prior_of(cfg));
  else if (model == "variant_a")
    urns.emplace(variant_a_prior_from_json(prior_json, cfg.space));
  else if (model == "variant_b")
    urns.emplace(variant_b_prior_from_json(prior_json, cfg.space));
  else
    throw ConfigError(fmt::format("unknown urn model \"{}\"", model));
  if (sec.contains("iteration_cap")) urns->set_iteration_cap(sec.at("iteration_cap").get<Duration>());
  urns->enable_trace(true);

  const auto d = rup_generate(*urns, start, n_jumps, rng);
  auto f = open_out(o.out, "urn_trace.jsonl");
  write_urn_trace(f, urns->trace(), cfg.space);
  auto p = open_out(o.out, "paths.csv");
  write_paths(p, {compose_path(d, d.horizon())}, cfg.space);
}

// -- simstudy --------------------------------------------------------------

void cmd_simstudy(const Options& o) {
  Json sec = Json::object();
  if (!o.config.empty()) sec = RunConfig::load(o.config).section("simstudy");
  const auto t_max = sec.value("t_max", Duration{20});
  const auto n_samples = sec.value("n_samples", std::int64_t{200});
  const auto n_sims = sec.value("n_sims", std::int64_t{100000});
  const auto horizon = sec.value("horizon", Duration{100});
  const auto threads = sec.value("threads", 0u);
  const auto ms = sec.value("prefix_lengths", std::vector<std::int64_t>{0, 100, 1000});
  const auto cs = sec.value("c", std::vector<double>{0.1, 1.0, 10.0});
  const auto spread_t = sec.value("spread_t", Duration{3});

  const auto truth = factory_truth();
  const auto path = simstudy_generate(truth, o.seed);
  const fs::path out = o.out;
  {
    auto f = open_out(out, "path.csv");
    write_paths(f, {path}, truth.space);
  }

  const StateIndex focus = 1;
  nlohmann::ordered_json summary;
  summary["schema"] = "smbs-simstudy v1";
  summary["seed"] = o.seed;
  summary["fits"] = Json::array();
  const auto fit_seed = mix_seed(o.seed, 1);
  for (auto m : ms) {
    const auto prefix = prefix_of(path, m);
    for (double c : cs) {
      const auto prior = factory_prior(c);
      const auto post = m == 0 ? prior : smbs_posterior(prior, prefix);
      const auto fit = fit_holding(post, focus, t_max, n_samples, fit_seed, truth.holding[focus]);
      auto f = open_out(out, fit_file_name(m, c));
      write_fit_csv(f, fit, truth.space);
      nlohmann::ordered_json row;
      row["M"] = m;
      row["c"] = c;
      row["sup_error"] = sup_distance(fit.posterior_mean, *fit.truth);
      if (n_samples >= 2 && spread_t <= t_max)
        row["spread"] = sample_spread(fit, static_cast<std::size_t>(spread_t - 1));
      summary["fits"].push_back(row);
    }
  }

  const auto lim = limiting_distribution(truth);
  const auto forecast = h_step_predictive(factory_prior(1.0), path, horizon, n_sims, mix_seed(o.seed, 2), threads);
  {
    auto f = open_out(out, "forecast.csv");
    write_forecast_csv(f, forecast, truth.space, lim.nu);
  }
  double worst = 0.0;
  const auto last = forecast.row(horizon);
  for (std::size_t j = 0; j < lim.nu.size(); ++j) worst = std::max(worst, std::abs(last[j] - lim.nu[j]));
  summary["nu"] = lim.nu;
  summary["equilibrium"] = lim.equilibrium;
  summary["mean_sojourn"] = lim.mean_sojourn;
  summary["forecast_last_row"] = last;
  summary["max_abs_forecast_minus_nu"] = worst;
  auto f = open_out(out, "summary.json");
  f << summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Markov beta-Stacy inference and simulation"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", o.config, "JSON run configuration");
    if (config_required) opt->required();
    sub->add_option("--seed", o.seed, "random seed")->required();
    sub->add_option("--out", o.out, "output directory");
  };
  auto* simulate = app.add_subcommand("simulate", "sample paths from a truth, the prior, the RSM kernel or the urns");
  auto* fit = app.add_subcommand("fit", "posterior summaries of holding-time distributions");
  auto* predict = app.add_subcommand("predict", "Monte Carlo h-step predictive distributions");
  auto* trace = app.add_subcommand("urn-trace", "urn-by-urn trace of a reinforced urn walk");
  auto* study = app.add_subcommand("simstudy", "textile-factory simulation study");
  add_common(simulate, true);
  add_common(fit, true);
  add_common(predict, true);
  add_common(trace, true);
  add_common(study, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*simulate) cmd_simulate(o);
    if (*fit) cmd_fit(o);
    if (*predict) cmd_predict(o);
    if (*trace) cmd_urn_trace(o);
    if (*study) cmd_simstudy(o);
  } catch (const std::exception& e) {
    std::cerr << "smbs: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
