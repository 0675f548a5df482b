// spectra.hpp: Spectral functions I(ω) of the zero-temperature bath and the
// retarded noise correlator F(τ) = Θ(τ) ∫ dω e^{iωτ} I(ω).

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace decohere {

// I(ω) = A / (2ε) on |ω - ω0| < ε.
struct Rectangular {
    double area;
    double center;
    double half_width;
};

// I(ω) = (A / π) ε / ((ω - ω0)^2 + ε^2).
struct Lorentzian {
    double area;
    double center;
    double width;
};

// I(ω) = 𝒜 (ω / Λ)^{1+ν} exp(-ω^2 / 4Λ^2) for ω >= 0, zero below. 𝒜 is fixed
// so that the ω >= 0 area equals `area`.
struct PowerGaussian {
    double area;
    double ohmicity;
    double cutoff;
};

struct Support {
    double lo;
    double hi;
    bool finite() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
};

class SpectralModel {
public:
    using Variant = std::variant<Rectangular, Lorentzian, PowerGaussian>;

    static SpectralModel rectangular(double area, double center, double half_width);
    static SpectralModel lorentzian(double area, double center, double width);
    static SpectralModel power_gaussian(double area, double ohmicity, double cutoff);

    const Variant& parameters() const noexcept { return params_; }
    std::string name() const;

    double operator()(double omega) const noexcept;
    Support support() const noexcept;
    bool has_closed_form_correlator() const noexcept;

    // 𝒜 for the power-Gaussian family, the flat height A/(2ε) for the
    // rectangle and the peak A/(πε) for the Lorentzian.
    double amplitude() const noexcept { return amplitude_; }

    // Same family, new area.
    SpectralModel with_area(double area) const;
    SpectralModel with_center(double center) const;
    SpectralModel with_width(double width) const;

private:
    SpectralModel(Variant p, double amplitude) : params_(p), amplitude_(amplitude) {}
    Variant params_;
    double amplitude_;
};

double evaluate(const SpectralModel& model, double omega);

// Rectangular and Lorentzian return the stored area; power-Gaussian returns
// 𝒜 Λ 2^{1+ν} Γ(1 + ν/2) from its amplitude.
double area(const SpectralModel& model);

// ∫_0^∞ u^{1+ν} e^{-u²/4} du = 2^{1+ν} Γ(1 + ν/2)
double power_gaussian_moment(double ohmicity);

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CorrelatorMethod { Automatic, Analytic, Quadrature };

struct QuadratureControls {
    // Accepted error estimate, in units of max(1, area) on finite supports
    // and of max(1, |F|) elsewhere.
    double abs_tolerance = 1e-10;
    unsigned max_depth = 12;
    // Panels per half period of e^{iωτ} on finite supports.
    double panels_per_half_period = 1.0;
    // Relative goal handed to the double-exponential Fourier rule on
    // infinite supports.
    double fourier_rel_tolerance = 1e-13;
};

class Correlator {
public:
    explicit Correlator(SpectralModel model,
                        CorrelatorMethod method = CorrelatorMethod::Automatic,
                        QuadratureControls controls = {});

    const SpectralModel& model() const noexcept { return model_; }
    CorrelatorMethod method() const noexcept { return method_; }
    bool uses_closed_form() const noexcept;

    std::complex<double> operator()(double tau) const;

    std::complex<double> analytic(double tau) const;
    std::complex<double> quadrature(double tau) const;

private:
    struct FourierRules;

    // Panelled Gauss-Kronrod over [lo, hi].
    std::complex<double> panelled(double lo, double hi, double tau, double* error) const;

    SpectralModel model_;
    CorrelatorMethod method_;
    QuadratureControls controls_;
    std::shared_ptr<FourierRules> rules_;
};

std::complex<double> correlator(const Correlator& c, double tau);

// F on {0, dt, ..., t_max}. Entry 0 is the τ -> 0+ limit, i.e. the area.
std::vector<std::complex<double>> correlator_table(const Correlator& c, double t_max, double dt);

// Number of steps N with N dt = t_max; throws unless t_max is a whole number
// of steps.
std::size_t grid_steps(double t_max, double dt);

} // namespace decohere
