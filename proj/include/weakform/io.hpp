#pragma once

#include <string>

#include "json.hpp"

#include "weakform/identifiability.hpp"
#include "weakform/particles.hpp"
#include "weakform/quadform.hpp"
#include "weakform/types.hpp"

namespace weakform {

// Shortest-round-trip decimal formatting, for byte-stable data files.
std::string format_double(double v);

// One row per grid point: x[,y],value. Derivatives are not serialized.
void write_field_csv(const SampledField& field, const std::string& path);
SampledField read_field_csv(const std::string& path);

void write_measure_csv(const ExplorationMeasure& measure, const std::string& path,
                       const std::string& variable_name);

// Rows m,l,i,x1..xd.
void write_ensemble_csv(const ParticleEnsemble& ensemble, const std::string& path);
ParticleEnsemble read_ensemble_csv(const std::string& path, double dt, double t0);

// Fields exactly: coefficients, lambda_used (absent when none),
// condition_number, residual, spectrum.
nlohmann::json report_to_json(const EstimateReport& report);

nlohmann::json spectrum_to_json(const SpectrumReport& report);

}  // namespace weakform
