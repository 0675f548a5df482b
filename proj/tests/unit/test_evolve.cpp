#include "doctest.h"
#include "support.hpp"

#include <cmath>

#include "decohere/evolve.hpp"
#include "decohere/simd/complex_dot.hpp"
#include "decohere/spectra.hpp"

using namespace decohere;
using cd = std::complex<double>;

namespace {

// Reference scheme written straight from the kernel definition: every
// memory term is a kernel_apply call, no history layout, no vector kernel.
std::vector<Matrix> naive_integrate(const SystemSpec& spec, const std::vector<cd>& F, const Matrix& rho0,
                                    double dt, std::size_t steps, int iters)
{
    std::vector<Matrix> phis, rhos{rho0};
    for (std::size_t k = 0; k <= steps; ++k) phis.push_back(interaction_coupling(spec, double(k) * dt));

    auto rhs = [&](std::size_t n, const Matrix& r) {
        Matrix f = Matrix::Zero(rho0.rows(), rho0.cols());
        if (n == 0) return f;
        for (std::size_t k = 0; k < n; ++k)
            f -= (k == 0 ? dt / 2 : dt) * kernel_apply(phis[n], phis[k], F[n - k], rhos[k]);
        f -= (dt / 2) * kernel_apply(phis[n], phis[n], F[0], r);
        return f;
    };

    Matrix f_prev = Matrix::Zero(rho0.rows(), rho0.cols());
    for (std::size_t n = 0; n < steps; ++n) {
        Matrix r = rhos[n] + dt * f_prev;
        for (int i = 0; i < iters; ++i) r = rhos[n] + (dt / 2) * (f_prev + rhs(n + 1, r));
        rhos.push_back(r);
        f_prev = rhs(n + 1, r);
    }
    return rhos;
}

EvolutionConfig config(double t_max, double dt)
{
    EvolutionConfig c;
    c.t_max = t_max;
    c.dt = dt;
    return c;
}

const auto kBaselineSpectrum = SpectralModel::rectangular(5, 1.5, 1);

} // namespace

TEST_SUITE("evolve") {

TEST_CASE("kernel_apply algebra")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<> u(0.0, 3.0);
    const auto spec = build_multilevel(5, MultilevelCoupling::Exponential, 2.0);
    for (int i = 0; i < 200; ++i) {
        const Matrix rho = testing::random_hermitian(rng, 5);
        const double tp = u(rng), t = tp + u(rng);
        const cd F(u(rng) - 1.5, u(rng) - 1.5);
        const Matrix k = kernel_apply(spec, F, t, tp, rho);
        CHECK(std::abs(k.trace()) < 1e-12);
        CHECK(hermiticity_defect(k) < 1e-12);

        const Matrix same = kernel_apply(spec, cd(F.real(), 0.0), t, t, rho);
        CHECK((same - same.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }

    RealVector e(3);
    e << 0, 1, 2;
    const auto zero = SystemSpec::create(e, RealMatrix::Zero(3, 3));
    CHECK(kernel_apply(zero, cd(1, 2), 1.0, 0.5, testing::random_hermitian(rng, 3)).isZero(0.0));
    CHECK_THROWS(kernel_apply(spec, cd(1, 0), 0.5, 1.0, Matrix::Identity(5, 5)));
}

TEST_CASE("kernel_apply against the four-index kernel")
{
    // Σ_rs K^{nm}_{rs} ρ_rs with K assembled entry by entry.
    std::mt19937_64 rng(17);
    const auto spec = build_three_level();
    const double t = 0.8, tp = 0.3;
    const cd F(0.7, -0.4);
    const Matrix a = interaction_coupling(spec, t), b = interaction_coupling(spec, tp);
    const Matrix rho = testing::random_hermitian(rng, 3);
    Matrix expect = Matrix::Zero(3, 3);
    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 3; ++m)
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s) {
                    cd K = -F * b(n, r) * a(s, m) - std::conj(F) * a(n, r) * b(s, m);
                    for (int j = 0; j < 3; ++j) {
                        if (s == m) K += F * a(n, j) * b(j, r);
                        if (r == n) K += std::conj(F) * b(s, j) * a(j, m);
                    }
                    expect(n, m) += K * rho(r, s);
                }
    CHECK((kernel_apply(spec, F, t, tp, rho) - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("integrator matches the definition-level scheme")
{
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    const double dt = 0.01;
    const auto F = correlator_table(Correlator(kBaselineSpectrum), 0.3, dt);
    const auto ref = naive_integrate(spec, F, rho0.matrix(), dt, 30, 2);

    const auto saved = simd::active_backend();
    for (auto backend : {simd::Backend::Scalar, simd::Backend::Avx2}) {
        if (!simd::backend_available(backend)) continue;
        simd::select_backend(backend);
        const auto traj = integrate(spec, F, rho0, config(0.3, dt));
        REQUIRE(traj.states.size() == 31);
        double worst = 0.0;
        for (std::size_t k = 0; k <= 30; ++k) worst = std::max(worst, (traj.states[k] - ref[k]).cwiseAbs().maxCoeff());
        INFO(simd::backend_name(backend));
        CHECK(worst < 1e-14);
    }
    simd::select_backend(saved);
}

TEST_CASE("scalar and avx2 trajectories agree")
{
    if (!simd::backend_available(simd::Backend::Avx2)) return;
    const auto spec = build_multilevel(6, MultilevelCoupling::Exponential, 3.0);
    const auto rho0 = initial_density(QubitState::baseline(), 6);
    const auto F = correlator_table(Correlator(SpectralModel::lorentzian(5, 1.0, 20.0)), 2.5, 0.001);
    const auto saved = simd::active_backend();
    simd::select_backend(simd::Backend::Scalar);
    const auto a = integrate(spec, F, rho0, config(2.5, 0.001));
    simd::select_backend(simd::Backend::Avx2);
    const auto b = integrate(spec, F, rho0, config(2.5, 0.001));
    simd::select_backend(saved);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k) worst = std::max(worst, (a.states[k] - b.states[k]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-12);
}

TEST_CASE("conservation on the baseline system")
{
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    const auto traj = integrate(spec, kBaselineSpectrum, rho0, config(2.5, 0.001));
    REQUIRE(traj.times.size() == 2501);
    CHECK(traj.times.back() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(traj.max_trace_drift < 1e-6);
    CHECK(traj.max_hermiticity_defect < 1e-8);
    // ρ22 decays and leakage builds up.
    const auto p = traj.excited_population();
    CHECK(p.back() < p.front());
    CHECK(traj.leakage().back() > 1e-4);
}

TEST_CASE("zero coupling leaves the state unchanged")
{
    RealVector e(3);
    e << 0.5, 0.5, 2.5;
    const auto spec = SystemSpec::create(e, RealMatrix::Zero(3, 3));
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    const auto traj = integrate(spec, kBaselineSpectrum, rho0, config(1.0, 0.01));
    for (const auto& s : traj.states) CHECK(s == rho0.matrix());
}

TEST_CASE("two-level system does not leak")
{
    const auto traj = integrate(build_two_level(), SpectralModel::lorentzian(50, 1.0, 3.0),
                                initial_density(QubitState::baseline(), 3), config(2.5, 0.001));
    double worst = 0.0;
    for (double l : traj.leakage()) worst = std::max(worst, std::abs(l));
    CHECK(worst < 1e-12);
}

TEST_CASE("quadratic start")
{
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    auto first_change = [&](double dt) {
        const auto t = integrate(spec, kBaselineSpectrum, rho0, config(10 * dt, dt));
        return std::abs(t.states[1](1, 1).real() - 0.9);
    };
    const double ratio = first_change(2e-3) / first_change(1e-3);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("self-convergence in dt")
{
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    auto final_state = [&](double dt) { return integrate(spec, kBaselineSpectrum, rho0, config(2.5, dt)).states.back(); };
    const Matrix a = final_state(1e-3), b = final_state(5e-4), c = final_state(2.5e-4);

    for (int n = 0; n < 3; ++n)
        for (int m = n; m < 3; ++m) {
            if (std::abs(b(n, m)) < 1e-3) continue;
            CHECK(std::abs(a(n, m) - b(n, m)) / std::abs(b(n, m)) < 1e-4);
        }

    const double order = std::log2(std::abs(a(1, 1).real() - b(1, 1).real()) / std::abs(b(1, 1).real() - c(1, 1).real()));
    MESSAGE("Richardson order on rho22(2.5): ", doctest::toString(order), " (", order - 2.0, " from 2)");
    CHECK(order > 1.99);
}

TEST_CASE("configuration errors")
{
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    CHECK_THROWS(integrate(spec, kBaselineSpectrum, rho0, config(2.5, 0.02)));
    CHECK_THROWS(integrate(spec, kBaselineSpectrum, rho0, config(2.5, 0.0007)));
    CHECK_THROWS(integrate(spec, kBaselineSpectrum, rho0, config(2.5, -0.001)));
    const auto short_table = correlator_table(Correlator(kBaselineSpectrum), 1.0, 0.01);
    CHECK_THROWS(integrate(spec, short_table, rho0, config(2.5, 0.01)));
    CHECK_THROWS(integrate(spec, kBaselineSpectrum, initial_density(QubitState::baseline(), 4), config(1.0, 0.01)));

    EvolutionConfig c = config(1.0, 0.01);
    c.corrector_iterations = 0;
    CHECK_THROWS(c.validate());
}

TEST_CASE("integrator reports blow-up")
{
    // A huge area with a coarse step is unstable; the failure names the step.
    const auto spec = build_three_level();
    const auto rho0 = initial_density(QubitState::baseline(), 3);
    CHECK_THROWS_AS(integrate(spec, SpectralModel::rectangular(1e7, 0.0, 1.0), rho0, config(2.5, 0.01)),
                    IntegrationError);
}

}
