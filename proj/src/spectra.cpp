#include "decohere/spectra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

namespace decohere {

namespace {

constexpr double kPi = std::numbers::pi;
// Power-Gaussian tail cut in units of Λ; e^{-(16/2)²} is far below any goal.
constexpr double kPowerGaussianCut = 16.0;

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be positive and finite (got " << v << ")";
        throw std::invalid_argument(os.str());
    }
}

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be finite";
        throw std::invalid_argument(os.str());
    }
}

// sin(x)/x with a series branch near zero
double sinc(double x)
{
    if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

double power_gaussian_moment(double ohmicity)
{
    if (!(ohmicity > -2.0))
        throw std::invalid_argument("power-Gaussian ohmicity must exceed -2 (area diverges)");
    return std::pow(2.0, 1.0 + ohmicity) * std::tgamma(1.0 + ohmicity / 2.0);
}

SpectralModel SpectralModel::rectangular(double area, double center, double half_width)
{
    require_positive(area, "spectral area");
    require_finite(center, "spectral center");
    require_positive(half_width, "rectangular half-width");
    return SpectralModel(Rectangular{area, center, half_width}, area / (2.0 * half_width));
}

SpectralModel SpectralModel::lorentzian(double area, double center, double width)
{
    require_positive(area, "spectral area");
    require_finite(center, "spectral center");
    require_positive(width, "Lorentzian width");
    return SpectralModel(Lorentzian{area, center, width}, area / (kPi * width));
}

SpectralModel SpectralModel::power_gaussian(double area, double ohmicity, double cutoff)
{
    require_positive(area, "spectral area");
    require_finite(ohmicity, "ohmicity");
    require_positive(cutoff, "Gaussian cutoff");
    const double amp = area / (cutoff * power_gaussian_moment(ohmicity));
    return SpectralModel(PowerGaussian{area, ohmicity, cutoff}, amp);
}

std::string SpectralModel::name() const
{
    return std::visit(overloaded{[](const Rectangular&) { return std::string("rectangular"); },
                                 [](const Lorentzian&) { return std::string("lorentzian"); },
                                 [](const PowerGaussian&) { return std::string("power-gaussian"); }},
                      params_);
}

double SpectralModel::operator()(double w) const noexcept
{
    return std::visit(
        overloaded{
            [&](const Rectangular& r) {
                return std::abs(w - r.center) < r.half_width ? amplitude_ : 0.0;
            },
            [&](const Lorentzian& l) {
                const double x = w - l.center;
                return l.area / kPi * l.width / (x * x + l.width * l.width);
            },
            [&](const PowerGaussian& p) {
                if (w < 0.0) return 0.0;
                const double u = w / p.cutoff;
                if (u == 0.0) return p.ohmicity == -1.0 ? amplitude_
                                     : p.ohmicity < -1.0 ? std::numeric_limits<double>::infinity()
                                                         : 0.0;
                return amplitude_ * std::pow(u, 1.0 + p.ohmicity) * std::exp(-u * u / 4.0);
            }},
        params_);
}

Support SpectralModel::support() const noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{[](const Rectangular& r) {
                       return Support{r.center - r.half_width, r.center + r.half_width};
                   },
                   [](const Lorentzian&) { return Support{-inf, inf}; },
                   [](const PowerGaussian&) { return Support{0.0, inf}; }},
        params_);
}

bool SpectralModel::has_closed_form_correlator() const noexcept
{
    return !std::holds_alternative<PowerGaussian>(params_);
}

SpectralModel SpectralModel::with_area(double a) const
{
    return std::visit(
        overloaded{[&](const Rectangular& r) { return rectangular(a, r.center, r.half_width); },
                   [&](const Lorentzian& l) { return lorentzian(a, l.center, l.width); },
                   [&](const PowerGaussian& p) { return power_gaussian(a, p.ohmicity, p.cutoff); }},
        params_);
}

SpectralModel SpectralModel::with_center(double c) const
{
    return std::visit(
        overloaded{[&](const Rectangular& r) { return rectangular(r.area, c, r.half_width); },
                   [&](const Lorentzian& l) { return lorentzian(l.area, c, l.width); },
                   [&](const PowerGaussian&) -> SpectralModel {
                       throw std::invalid_argument("power-Gaussian spectrum has no center parameter");
                   }},
        params_);
}

SpectralModel SpectralModel::with_width(double w) const
{
    return std::visit(
        overloaded{[&](const Rectangular& r) { return rectangular(r.area, r.center, w); },
                   [&](const Lorentzian& l) { return lorentzian(l.area, l.center, w); },
                   [&](const PowerGaussian& p) { return power_gaussian(p.area, p.ohmicity, w); }},
        params_);
}

double evaluate(const SpectralModel& model, double omega) { return model(omega); }

double area(const SpectralModel& model)
{
    return std::visit(overloaded{[](const Rectangular& r) { return r.area; },
                                 [](const Lorentzian& l) { return l.area; },
                                 [&](const PowerGaussian& p) {
                                     return model.amplitude() * p.cutoff *
                                            power_gaussian_moment(p.ohmicity);
                                 }},
                      model.parameters());
}

// ---------------------------------------------------------------------------

struct Correlator::FourierRules {
    explicit FourierRules(double rel_tol) : cos_rule(rel_tol), sin_rule(rel_tol) {}
    boost::math::quadrature::ooura_fourier_cos<double> cos_rule;
    boost::math::quadrature::ooura_fourier_sin<double> sin_rule;
};

Correlator::Correlator(SpectralModel model, CorrelatorMethod method, QuadratureControls controls)
    : model_(std::move(model)), method_(method), controls_(controls)
{
    if (method_ == CorrelatorMethod::Analytic && !model_.has_closed_form_correlator())
        throw std::invalid_argument("no closed-form correlator for the " + model_.name() + " spectrum");
    if (!model_.support().finite())
        rules_ = std::make_shared<FourierRules>(controls_.fourier_rel_tolerance);
}

bool Correlator::uses_closed_form() const noexcept
{
    switch (method_) {
    case CorrelatorMethod::Analytic: return true;
    case CorrelatorMethod::Quadrature: return false;
    case CorrelatorMethod::Automatic: break;
    }
    return model_.has_closed_form_correlator();
}

std::complex<double> Correlator::operator()(double tau) const
{
    return uses_closed_form() ? analytic(tau) : quadrature(tau);
}

std::complex<double> Correlator::analytic(double tau) const
{
    if (tau < 0.0) return 0.0;
    return std::visit(
        overloaded{
            [&](const Rectangular& r) {
                return r.area * std::polar(1.0, r.center * tau) * sinc(r.half_width * tau);
            },
            [&](const Lorentzian& l) {
                return l.area * std::exp(std::complex<double>(-l.width * tau, l.center * tau));
            },
            [&](const PowerGaussian&) -> std::complex<double> {
                throw std::invalid_argument("no closed-form correlator for the power-gaussian spectrum");
            }},
        model_.parameters());
}

std::complex<double> Correlator::panelled(double lo, double hi, double tau, double* error) const
{
    using boost::math::quadrature::gauss_kronrod;
    using cplx = std::complex<double>;
    // Phases are taken relative to the middle of the range, which keeps
    // their round-off well below the quadrature goal. Panels are at most a
    // half period of e^{iωτ} wide.
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const double half_period = tau > 0.0 ? kPi / (tau * controls_.panels_per_half_period) : 2 * half;
    const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2 * half / half_period)));
    const double h = 2 * half / static_cast<double>(panels);
    cplx total = 0.0;
    double err_total = 0.0;
    auto f = [&](double x) { return model_(mid + x) * std::polar(1.0, x * tau); };
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = -half + h * static_cast<double>(i);
        const double b = i + 1 == panels ? half : a + h;
        double err = 0.0;
        total += gauss_kronrod<double, 15>::integrate(f, a, b, controls_.max_depth, 1e-12, &err);
        err_total += err;
    }
    *error = err_total;
    return std::polar(1.0, mid * tau) * total;
}

std::complex<double> Correlator::quadrature(double tau) const
{
    using boost::math::quadrature::gauss_kronrod;
    using cplx = std::complex<double>;

    if (tau < 0.0) return 0.0;
    const Support s = model_.support();
    const auto failure = [&](double err) {
        std::ostringstream os;
        os.precision(3);
        os << "correlator quadrature for the " << model_.name() << " spectrum did not converge at tau="
           << tau << " (error estimate " << err << ")";
        return QuadratureError(os.str());
    };

    if (s.finite()) {
        double err = 0.0;
        const cplx v = panelled(s.lo, s.hi, tau, &err);
        // |F| never exceeds the area, so the goal scales with it
        if (err > controls_.abs_tolerance * std::max(1.0, area(model_))) throw failure(err);
        return v;
    }

    if (tau == 0.0) {
        double err = 0.0;
        const double v = gauss_kronrod<double, 15>::integrate(
            [&](double w) { return model_(w); }, s.lo, s.hi, controls_.max_depth, 1e-14, &err);
        if (err > controls_.abs_tolerance * std::max(1.0, std::abs(v))) throw failure(err);
        return v;
    }

    // Infinite support: fold onto the half line around an origin w0 and use
    // the double-exponential Fourier rules.
    //   ∫ e^{iωτ} I(ω) dω = e^{i w0 τ} [∫_0^∞ (I(w0+x) + I(w0-x)) cos(xτ) dx
    //                                  + i ∫_0^∞ (I(w0+x) - I(w0-x)) sin(xτ) dx]
    const double origin = std::isfinite(s.lo) ? s.lo
                          : std::holds_alternative<Lorentzian>(model_.parameters())
                              ? std::get<Lorentzian>(model_.parameters()).center
                              : 0.0;
    const bool half_line = std::isfinite(s.lo);
    auto even = [&](double x) { return model_(origin + x) + (half_line ? 0.0 : model_(origin - x)); };
    auto odd = [&](double x) { return model_(origin + x) - (half_line ? 0.0 : model_(origin - x)); };

    auto [c, c_err] = rules_->cos_rule.integrate(even, tau);
    double s_val = 0.0, s_err = 0.0;
    const bool symmetric = std::holds_alternative<Lorentzian>(model_.parameters());
    if (!symmetric) std::tie(s_val, s_err) = rules_->sin_rule.integrate(odd, tau);
    const double abs_err = (std::isnan(c_err) ? INFINITY : c_err * std::abs(c)) +
                           (std::isnan(s_err) ? INFINITY : s_err * std::abs(s_val));
    const double goal = controls_.abs_tolerance * std::max(1.0, std::abs(cplx(c, s_val)));
    if (abs_err <= goal) return std::polar(1.0, origin * tau) * cplx(c, s_val);

    // The double-exponential rule occasionally stalls on the power-Gaussian;
    // its Gaussian tail allows a finite cut instead.
    if (const auto* p = std::get_if<PowerGaussian>(&model_.parameters())) {
        double err = 0.0;
        const cplx v = panelled(0.0, kPowerGaussianCut * p->cutoff, tau, &err);
        if (err <= goal) return v;
        throw failure(err);
    }
    throw failure(abs_err);
}

std::complex<double> correlator(const Correlator& c, double tau) { return c(tau); }

std::size_t grid_steps(double t_max, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(t_max >= dt)) throw std::invalid_argument("t_max must be at least one time step");
    const double steps = t_max / dt;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
        std::ostringstream os;
        os.precision(17);
        os << "t_max=" << t_max << " is not a whole number of steps dt=" << dt;
        throw std::invalid_argument(os.str());
    }
    return static_cast<std::size_t>(rounded);
}

std::vector<std::complex<double>> correlator_table(const Correlator& c, double t_max, double dt)
{
    const std::size_t n = grid_steps(t_max, dt);
    std::vector<std::complex<double>> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = c(static_cast<double>(k) * dt);
    return out;
}

} // namespace decohere
