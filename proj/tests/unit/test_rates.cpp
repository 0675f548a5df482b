#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "decohere/evolve.hpp"
#include "decohere/rates.hpp"
#include "decohere/spectra.hpp"

using namespace decohere;

namespace {

std::vector<double> grid(double t_max, double dt)
{
    std::vector<double> t;
    for (std::size_t k = 0; k <= grid_steps(t_max, dt); ++k) t.push_back(double(k) * dt);
    return t;
}

} // namespace

TEST_SUITE("rates") {

TEST_CASE("pure exponential")
{
    const auto t = grid(2.5, 0.001);
    std::vector<double> y;
    for (double x : t) y.push_back(0.9 * std::exp(-0.2 * x));
    const auto f = fit_exponential_decay(t, y, {});
    CHECK(f.rate == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(f.amplitude == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.samples == 1501);
    CHECK_FALSE(to_rate(f).warning());

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<> u(0.01, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double k = u(rng), a = u(rng);
        std::vector<double> z;
        for (double x : t) z.push_back(a * std::exp(-k * x));
        CHECK(fit_exponential_decay(t, z, {}).rate == doctest::Approx(k).epsilon(1e-10));
    }
}

TEST_CASE("flat and growing series")
{
    const auto t = grid(2.5, 0.01);
    const std::vector<double> flat(t.size(), 0.37);
    const auto r = to_rate(fit_exponential_decay(t, flat, {}));
    CHECK(std::abs(r.rate) < 1e-12);
    CHECK_FALSE(r.warning());

    std::vector<double> grow;
    for (double x : t) grow.push_back(std::exp(0.1 * x));
    const auto g = to_rate(fit_exponential_decay(t, grow, {}));
    CHECK(g.rate == 0.0);
    CHECK(g.fitted_rate == doctest::Approx(-0.1).epsilon(1e-10));
    CHECK(g.negative);
}

TEST_CASE("quality warning")
{
    const auto t = grid(2.5, 0.01);
    std::vector<double> y;
    for (double x : t) y.push_back(std::exp(-0.05 * x) * (1.0 + 0.2 * std::sin(40 * x)));
    const auto r = to_rate(fit_exponential_decay(t, y, {}));
    CHECK(r.r_squared < kQualityThreshold);
    CHECK(r.low_quality);
    RateSet set;
    set.dephasing = r;
    CHECK(set.any_warning());
    CHECK(set.warnings() == "dephasing:low-r2");
}

TEST_CASE("clipping and errors")
{
    const auto t = grid(2.5, 0.01);
    std::vector<double> y;
    for (double x : t) y.push_back(std::exp(-30 * x));
    const auto f = fit_exponential_decay(t, y, {});
    CHECK(f.clipped);
    CHECK(to_rate(f).clipped);

    y.assign(t.size(), 1.0);
    y[150] = 0.0;
    CHECK_THROWS_AS(fit_exponential_decay(t, y, {}), FitError);
    y[150] = -1.0;
    CHECK_THROWS_AS(fit_exponential_decay(t, y, {}), FitError);

    const auto coarse = grid(2.5, 0.5);
    CHECK_THROWS_AS(fit_exponential_decay(coarse, std::vector<double>(coarse.size(), 1.0), {}), FitError);
    CHECK_THROWS_AS(fit_exponential_decay(grid(2.0, 0.01), std::vector<double>(201, 1.0), {}), FitError);
    CHECK_THROWS(fit_exponential_decay(t, std::vector<double>(3, 1.0), {}));
    CHECK_THROWS(fit_exponential_decay(t, std::vector<double>(t.size(), 1.0), {2.0, 1.0}));
}

TEST_CASE("two-level system: no leakage")
{
    EvolutionConfig c;
    const auto traj = integrate(build_two_level(), SpectralModel::rectangular(5, 1.5, 1),
                                initial_density(QubitState::baseline(), 3), c);
    const auto rates = extract_rates(traj);
    CHECK(rates.leakage_rate() == 0.0);
    CHECK(std::abs(rates.leakage.fitted_rate) < 1e-12);
    CHECK(rates.relaxation_rate() > 0.0);
}

TEST_CASE("rates are stable under resampling")
{
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    const auto model = SpectralModel::rectangular(5, 1.5, 1);
    EvolutionConfig a, b;
    b.dt = a.dt / 2;
    const auto ra = extract_rates(integrate(spec, model, rho0, a));
    const auto rb = extract_rates(integrate(spec, model, rho0, b));
    CHECK(testing::rel_diff(ra.relaxation.fitted_rate, rb.relaxation.fitted_rate) < 1e-3);
    CHECK(testing::rel_diff(ra.dephasing.fitted_rate, rb.dephasing.fitted_rate) < 1e-3);
    CHECK(testing::rel_diff(ra.leakage.fitted_rate, rb.leakage.fitted_rate) < 1e-3);
}

TEST_CASE("two-level: Lorentzian and rectangular rates coincide in the wide-band regime")
{
    // Widths matched at equal peak density: A/(2ε) = A/(π ε_L).
    const double eps = 400.0;
    EvolutionConfig c;
    c.dt = 2.5e-4;
    const auto spec = build_two_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    const auto rect = extract_rates(integrate(spec, SpectralModel::rectangular(5, 1.5, eps), rho0, c));
    const auto lor = extract_rates(integrate(spec, SpectralModel::lorentzian(5, 1.5, 2 * eps / std::numbers::pi), rho0, c));
    CHECK(testing::rel_diff(rect.relaxation_rate(), lor.relaxation_rate()) < 0.02);
    CHECK(testing::rel_diff(rect.dephasing_rate(), lor.dephasing_rate()) < 0.02);
}

}
