#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "smbs/core_model.hpp"
#include "smbs/predictive.hpp"
#include "smbs/simstudy.hpp"
#include "smbs/urns.hpp"

namespace smbs {

/// Path files: one path per line, comma-separated state ids. Blank lines and
/// lines starting with '#' are skipped. Ids are mapped to dense indices.
std::vector<StateSequence> read_paths(std::istream& in, const StateSpace& space);
std::vector<StateSequence> read_paths(const std::filesystem::path& file, const StateSpace& space);
void write_paths(std::ostream& out, const std::vector<StateSequence>& paths, const StateSpace& space);

/// "# smbs-fit v1" then state,t,posterior_mean,truth,sample_id,sample_value.
/// One row per (t, draw); sample_id is empty on the summary row of each t
/// when there are no draws. truth is empty when unknown.
void write_fit_csv(std::ostream& out, const HoldingFit& fit, const StateSpace& space);
/// Several fits under a single header.
void write_fit_csv(std::ostream& out, const std::vector<HoldingFit>& fits, const StateSpace& space);

/// "# smbs-forecast v1" then h,state,probability for h = 1..horizon, then
/// one "nu,<state>,<p>" row per state when nu is non-empty.
void write_forecast_csv(std::ostream& out, const PredictiveMatrix& forecast, const StateSpace& space,
                        const std::vector<double>& nu = {});

/// Urn names: U<i> (jump urn), U<i>,<t> (time-indexed jump urn),
/// V<i>,<t> (holding urn) and V<i><j>,<t> (pair holding urn), with state ids.
std::string urn_name(const UrnDraw& draw, const StateSpace& space);

/// First line {"schema":"smbs-urn-trace v1"}, then one JSON object per
/// draw: {urn_id, color, pre_masses, post_masses}.
void write_urn_trace(std::ostream& out, const std::vector<UrnDraw>& trace, const StateSpace& space);

/// Shortest round-trip decimal form.
std::string format_real(double x);

}  // namespace smbs
