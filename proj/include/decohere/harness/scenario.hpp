// scenario.hpp: Typed view of a configuration: which system, which bath,
// which initial state and which numerical controls.
//
// Schema (all sections optional except [spectrum]):
//
//   [system]     preset = three-level | two-level | multilevel | custom
//                levels = <int>                    (multilevel)
//                coupling = flat | exponential     (multilevel)
//                range = <real>                    (multilevel, exponential)
//                energies = e1, e2, ...            (custom)
//                coupling_matrix = r11, r12, ...; r21, ...   (custom, rows split by ';')
//   [spectrum]   model = rectangular | lorentzian | power-gaussian
//                area, center, width (rectangular half-width / Lorentzian width)
//                ohmicity, cutoff                  (power-gaussian)
//                method = auto | analytic | quadrature
//   [state]      preset = baseline | custom;  a = re, im;  b = re, im
//   [evolution]  t_max, dt, corrector_iterations
//   [fit]        t_lo, t_hi
//   [rpa]        delta, ladder, cutoff, scan_points
//   [sweep]      kind, values | log_range = lo, hi, count | linear_range = lo, hi, count

#pragma once

#include <string>

#include "decohere/evolve.hpp"
#include "decohere/harness/config.hpp"
#include "decohere/model.hpp"
#include "decohere/rates.hpp"
#include "decohere/rpa.hpp"
#include "decohere/spectra.hpp"

namespace decohere::harness {

const Config::Schema& scenario_schema();

struct Scenario {
    SystemSpec system;
    SpectralModel spectrum;
    CorrelatorMethod correlator_method = CorrelatorMethod::Automatic;
    QubitState state;
    EvolutionConfig evolution;
    FitWindow fit;
    RpaConfig rpa;

    Correlator correlator() const { return Correlator(spectrum, correlator_method); }
};

// Interprets and validates a configuration. Every error, including model
// invariant violations, is reported as a ConfigError carrying file:line.
Scenario scenario_from_config(const Config& cfg);

struct ScenarioOutcome {
    Trajectory trajectory;
    RateSet rates;
};

ScenarioOutcome run_scenario(const Scenario& s);

} // namespace decohere::harness
