// rpa.hpp: Photon-number corrections of the bath at zero temperature:
// the bare second-order density n_ω^(2), and the RPA-resummed total mode
// number N and total fluctuation ΔN.
//
// For every channel s with weight
//     S_s = |a|² φ_{1s}² + |b|² φ_{2s}² + 2 Re(a* b) φ_{1s} φ_{2s}
// and λ_s = ω + E_1 - E_s, the geometric resummation replaces the double
// pole 1/λ² by 1/(λ (λ - 4 S_s I(ω))). Both N and (ΔN)² then reduce to
// principal-value integrals of
//     1/(u - 4 S_s I(ω)) - 1/u,
// with u = λ_s for N (weight 1/2) and u = ω + λ_s for (ΔN)² (weight 1).
// The poles are shifted by iδ and δ -> 0 is extrapolated.

#pragma once

#include <cstddef>
#include <vector>

#include "decohere/model.hpp"
#include "decohere/spectra.hpp"

namespace decohere {

struct RpaConfig {
    double delta = 1e-2;          // largest imaginary shift of the δ ladder
    std::size_t ladder = 5;       // δ, δ/2, ..., δ/2^(ladder-1)
    double cutoff = 0.0;          // half-range around the spectrum for infinite supports; 0 = auto
    std::size_t scan_points = 10000;
    double abs_tolerance = 1e-10;

    void validate() const;
};

struct FluctuationResult {
    double N = 0.0;
    double delta_N = 0.0;
    double ratio = 0.0;             // ΔN / N, NaN when N == 0
    double delta_N_squared = 0.0;

    bool converged = true;          // both δ ladders Cauchy-monotone
    bool regularization_failure = false; // (ΔN)² < 0 after extrapolation

    std::vector<double> N_ladder;       // N at each δ
    std::vector<double> fluctuation_ladder; // (ΔN)² at each δ
};

// S_s for every level s.
std::vector<double> channel_weights(const SystemSpec& spec, const QubitState& state);

// Σ_s 2 I(ω) S_s / λ_s²; +inf on a resonance with non-zero weight.
double n_second_order(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
                      double omega);

// Σ_s Re[2 I S_s / ((λ_s + iδ)(λ_s - 4 S_s I + iδ))]
double n_rpa(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
             double omega, double delta);

// Integrals of the resummed densities at a single δ.
double total_number_at(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
                       const RpaConfig& cfg, double delta);
double fluctuation_squared_at(const SystemSpec& spec, const SpectralModel& model,
                              const QubitState& state, const RpaConfig& cfg, double delta);

FluctuationResult delta_n_total(const SystemSpec& spec, const SpectralModel& model,
                                const QubitState& state, const RpaConfig& cfg = {});

// Polynomial (Neville) extrapolation of values sampled at hs to h = 0.
double extrapolate_to_zero(const std::vector<double>& hs, const std::vector<double>& values);

} // namespace decohere
