#include "smbs/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace smbs {

std::string format_real(double x) { return fmt::format("{}", x); }

std::vector<StateSequence> read_paths(std::istream& in, const StateSpace& space) {
  std::vector<StateSequence> paths;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    StateSequence path;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t used = 0;
      int id = 0;
      try {
        id = std::stoi(field, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("path line {}: \"{}\" is not a state id", line_no, field));
      }
      if (field.find_first_not_of(" \t", used) != std::string::npos)
        throw std::invalid_argument(fmt::format("path line {}: \"{}\" is not a state id", line_no, field));
      const auto idx = space.find(id);
      if (!idx) throw std::invalid_argument(fmt::format("path line {}: unknown state id {}", line_no, id));
      path.push_back(*idx);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

std::vector<StateSequence> read_paths(const std::filesystem::path& file, const StateSpace& space) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error(fmt::format("cannot open path file {}", file.string()));
  return read_paths(in, space);
}

void write_paths(std::ostream& out, const std::vector<StateSequence>& paths, const StateSpace& space) {
  out << "# smbs-paths v1\n";
  for (const auto& path : paths) {
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k) out << ',';
      out << space.id_of(path[k]);
    }
    out << '\n';
  }
}

namespace {

void write_fit_rows(std::ostream& out, const HoldingFit& fit, const StateSpace& space) {
  const auto state = space.id_of(fit.state);
  for (std::size_t k = 0; k < fit.t.size(); ++k) {
    const auto prefix = fmt::format("{},{},{},{}", state, fit.t[k], format_real(fit.posterior_mean[k]),
                                    fit.truth ? format_real((*fit.truth)[k]) : std::string());
    if (fit.samples.empty()) {
      out << prefix << ",,\n";
      continue;
    }
    for (std::size_t s = 0; s < fit.samples.size(); ++s)
      out << prefix << ',' << s << ',' << format_real(fit.samples[s][k]) << '\n';
  }
}

}  // namespace

void write_fit_csv(std::ostream& out, const std::vector<HoldingFit>& fits, const StateSpace& space) {
  out << "# smbs-fit v1\n";
  out << "state,t,posterior_mean,truth,sample_id,sample_value\n";
  for (const auto& fit : fits) write_fit_rows(out, fit, space);
}

void write_fit_csv(std::ostream& out, const HoldingFit& fit, const StateSpace& space) {
  write_fit_csv(out, std::vector<HoldingFit>{fit}, space);
}

void write_forecast_csv(std::ostream& out, const PredictiveMatrix& forecast, const StateSpace& space,
                        const std::vector<double>& nu) {
  out << "# smbs-forecast v1\n";
  out << "h,state,probability\n";
  for (Duration h = 1; h <= forecast.horizon; ++h)
    for (StateIndex j = 0; j < forecast.n_states; ++j)
      out << h << ',' << space.id_of(j) << ',' << format_real(forecast.probability(h, j)) << '\n';
  if (!nu.empty() && nu.size() != space.size()) throw std::invalid_argument("nu must have one entry per state");
  for (StateIndex j = 0; j < nu.size(); ++j) out << "nu," << space.id_of(j) << ',' << format_real(nu[j]) << '\n';
}

std::string urn_name(const UrnDraw& draw, const StateSpace& space) {
  const auto i = space.id_of(draw.state);
  if (draw.kind == UrnDraw::Kind::Jump)
    return draw.index == 0 ? fmt::format("U{}", i) : fmt::format("U{},{}", i, draw.index);
  if (draw.partner) return fmt::format("V{}{},{}", i, space.id_of(*draw.partner), draw.index);
  return fmt::format("V{},{}", i, draw.index);
}

void write_urn_trace(std::ostream& out, const std::vector<UrnDraw>& trace, const StateSpace& space) {
  out << nlohmann::json{{"schema", "smbs-urn-trace v1"}}.dump() << '\n';
  for (const auto& d : trace) {
    nlohmann::ordered_json line;
    line["urn_id"] = urn_name(d, space);
    if (d.kind == UrnDraw::Kind::Jump)
      line["color"] = space.id_of(d.outcome);
    else
      line["color"] = d.outcome == 1 ? "black" : "white";
    line["pre_masses"] = d.pre_masses;
    line["post_masses"] = d.post_masses;
    out << line.dump() << '\n';
  }
}

}  // namespace smbs
