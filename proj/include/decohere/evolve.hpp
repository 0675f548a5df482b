// evolve.hpp: Time-nonlocal master equation for the reduced density matrix
// in the interaction picture,
//
//   dρ_nm/dt = -∫_0^t dt' Σ_rs K^{nm}_{rs}(t, t') ρ_rs(t'),
//
// integrated on a uniform grid with the full memory kept.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "decohere/model.hpp"
#include "decohere/spectra.hpp"

namespace decohere {

struct EvolutionConfig {
    double t_max = 2.5;
    double dt = 1e-3;
    int corrector_iterations = 2;

    static constexpr double kMaxStep = 1e-2;

    void validate() const;
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;

    double max_trace_drift = 0.0;
    double max_hermiticity_defect = 0.0;

    std::size_t levels() const noexcept {
        return states.empty() ? 0 : static_cast<std::size_t>(states.front().rows());
    }

    std::vector<double> population(std::size_t level) const;  // ρ_ll, 0-based level
    std::vector<double> excited_population() const { return population(1); } // ρ22
    std::vector<double> coherence_magnitude() const;           // |ρ12|
    std::vector<double> qubit_population() const;              // ρ11 + ρ22
    std::vector<double> leakage() const;                       // 1 - ρ11 - ρ22
};

// Σ_rs K^{nm}_{rs}(t, t') ρ_rs for one correlator value F = F(t - t'):
//   F (φ̃_t φ̃_t' ρ - φ̃_t' ρ φ̃_t) + F* (ρ φ̃_t' φ̃_t - φ̃_t ρ φ̃_t')
Matrix kernel_apply(const SystemSpec& spec, std::complex<double> F, double t, double t_prime,
                    const Matrix& rho);

// Same product with precomputed coupling matrices.
Matrix kernel_apply(const Matrix& phi_t, const Matrix& phi_t_prime, std::complex<double> F,
                    const Matrix& rho);

// Trapezoidal memory quadrature, explicit-Euler predictor and
// `corrector_iterations` trapezoidal corrector sweeps per step.
//
// The correlator table must hold F(k dt) for k = 0..N with N dt = t_max.
Trajectory integrate(const SystemSpec& spec, std::span<const std::complex<double>> correlator,
                     const DensityMatrix& rho0, const EvolutionConfig& cfg);

Trajectory integrate(const SystemSpec& spec, const SpectralModel& model, const DensityMatrix& rho0,
                     const EvolutionConfig& cfg);

} // namespace decohere
