// sweep.hpp: One-parameter sweeps over a base scenario, evaluated on a
// local worker pool and written as a sorted CSV plus a JSON sidecar.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decohere/harness/config.hpp"
#include "decohere/rates.hpp"
#include "decohere/rpa.hpp"

namespace decohere::harness {

// spectral-center: [spectrum] center     spectral-area: [spectrum] area
// levels: [system] levels (multilevel)   correlator: [spectrum] ohmicity
// rpa-width: [spectrum] width, RPA only  rpa-area: [spectrum] area, RPA only
enum class SweepKind { SpectralCenter, SpectralArea, Levels, Correlator, RpaWidth, RpaArea };

SweepKind parse_sweep_kind(const std::string& name);
std::string sweep_kind_name(SweepKind kind);
bool is_rpa_sweep(SweepKind kind);

struct SweepSpec {
    SweepKind kind = SweepKind::SpectralArea;
    std::vector<double> grid; // strictly monotone, non-empty
    Config base;              // full scenario; [sweep] is ignored per point

    static SweepSpec from_config(const Config& cfg);

    // Base config with the swept key replaced by `value`.
    Config point_config(double value) const;
};

struct ResultRow {
    double value = 0.0;
    std::string config_hash;
    std::string status = "ok"; // "ok" or the error message

    std::optional<RateSet> rates;
    std::optional<FluctuationResult> fluctuation;
    double max_trace_drift = 0.0;
    double max_hermiticity_defect = 0.0;
};

ResultRow evaluate_point(const SweepSpec& spec, double value);

// Rows come back sorted by the swept value regardless of `threads`.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned threads = 1);

std::string sweep_csv(const SweepSpec& spec, const std::vector<ResultRow>& rows);
nlohmann::json sweep_metadata(const SweepSpec& spec, const std::vector<ResultRow>& rows);

} // namespace decohere::harness
