#pragma once

#include <nlohmann/json.hpp>

#include "arw/kacrice.hpp"
#include "arw/lattice.hpp"
#include "arw/montecarlo.hpp"

namespace arw {

/// {"m", "n", "points": [[x, y], ...], "tau4"}; tau4 is null for empty sets.
nlohmann::json lattice_to_json(const LatticePointSet& set);
/// Re-enumerates from "m" and checks the stored points match (ParseError otherwise).
LatticePointSet lattice_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const PredictionReport& r);
void from_json(const nlohmann::json& j, PredictionReport& r);

void to_json(nlohmann::json& j, const SimulationReport& r);
void from_json(const nlohmann::json& j, SimulationReport& r);

void to_json(nlohmann::json& j, const ProbeResult& r);
void from_json(const nlohmann::json& j, ProbeResult& r);

void to_json(nlohmann::json& j, const SecondMoments& r);

}  // namespace arw
