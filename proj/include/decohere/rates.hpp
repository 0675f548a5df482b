// rates.hpp: Relaxation, dephasing and leakage rates from log-linear fits
// of a trajectory over a short-time window.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "decohere/evolve.hpp"

namespace decohere {

struct FitWindow {
    double t_lo = 1.0;
    double t_hi = 2.5;

    void validate() const;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExponentialFit {
    double rate = 0.0;      // -slope of ln y
    double amplitude = 0.0; // exp(intercept)
    double r_squared = 0.0;
    std::size_t samples = 0;
    bool clipped = false;   // some samples were raised to kMinSample
};

inline constexpr double kMinSample = 1e-15;
inline constexpr std::size_t kMinFitSamples = 10;
inline constexpr double kQualityThreshold = 0.98;

// Ordinary least squares of ln y against t over t_lo <= t <= t_hi.
ExponentialFit fit_exponential_decay(std::span<const double> t, std::span<const double> y,
                                     const FitWindow& w);

struct RateEstimate {
    double rate = 0.0;        // reported rate, never negative
    double fitted_rate = 0.0; // raw -slope, may be negative
    double r_squared = 0.0;
    bool negative = false;    // fitted_rate < 0 beyond noise, rate forced to 0
    bool low_quality = false; // r_squared below kQualityThreshold
    bool clipped = false;

    bool warning() const noexcept { return negative || low_quality || clipped; }
};

struct RateSet {
    RateEstimate relaxation; // from ρ22(t)
    RateEstimate dephasing;  // from |ρ12(t)|
    RateEstimate leakage;    // from ρ11(t) + ρ22(t)

    double relaxation_rate() const noexcept { return relaxation.rate; }
    double dephasing_rate() const noexcept { return dephasing.rate; }
    double leakage_rate() const noexcept { return leakage.rate; }
    bool any_warning() const noexcept {
        return relaxation.warning() || dephasing.warning() || leakage.warning();
    }
    std::string warnings() const;
};

RateEstimate to_rate(const ExponentialFit& fit);

RateSet extract_rates(const Trajectory& traj, const FitWindow& w = {});

} // namespace decohere
