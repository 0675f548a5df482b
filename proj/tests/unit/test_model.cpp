#include "doctest.h"
#include "support.hpp"

#include <cmath>

using namespace decohere;

TEST_SUITE("model") {

TEST_CASE("three-level builder")
{
    const auto s = build_three_level();
    REQUIRE(s.levels() == 3);
    CHECK(s.energies()(0) == 0.5);
    CHECK(s.energies()(1) == 0.5);
    CHECK(s.energies()(2) == 2.5);
    CHECK(s.coupling()(0, 1) == 0.1);
    CHECK(s.coupling()(1, 2) == 0.1);
    CHECK(s.coupling()(0, 2) == 0.0);
    CHECK(s.coupling()(1, 0) == 0.1);
}

TEST_CASE("two-level builder decouples the third level")
{
    const auto s = build_two_level();
    REQUIRE(s.levels() == 3);
    CHECK(s.coupling()(1, 2) == 0.0);
    CHECK(s.coupling()(0, 2) == 0.0);
    CHECK(s.coupling()(0, 1) == 0.1);
}

TEST_CASE("multilevel builders")
{
    const auto flat = build_multilevel(10, MultilevelCoupling::Flat);
    for (Eigen::Index n = 0; n < 10; ++n) {
        for (Eigen::Index r = 0; r < 10; ++r) CHECK(flat.coupling()(n, r) == ((n + r) % 2 ? 0.1 : 0.0));
        if (n >= 2) CHECK(flat.energies()(n) == doctest::Approx(double(n + 1) - 0.5));
    }

    const auto ex = build_multilevel(10, MultilevelCoupling::Exponential, 8.0);
    CHECK(ex.coupling()(0, 1) == doctest::Approx(0.1 * std::exp(-1.0 / 8.0)).epsilon(1e-15));
    CHECK(ex.coupling()(2, 5) == doctest::Approx(0.1 * std::exp(-3.0 / 8.0)).epsilon(1e-15));
    CHECK(build_multilevel(4, MultilevelCoupling::Exponential, 3.0).coupling()(0, 2) == 0.0);

    const auto wide = build_multilevel(12, MultilevelCoupling::Exponential, 1e9);
    const auto flat12 = build_multilevel(12, MultilevelCoupling::Flat);
    CHECK((wide.coupling() - flat12.coupling()).cwiseAbs().maxCoeff() < 1e-8);

    CHECK_THROWS_AS(build_multilevel(1, MultilevelCoupling::Flat), std::invalid_argument);
    CHECK_THROWS_AS(build_multilevel(5, MultilevelCoupling::Exponential, 0.0), std::invalid_argument);
}

TEST_CASE("system spec validation")
{
    RealVector e(3);
    e << 0.5, 0.5, 2.5;
    RealMatrix phi = RealMatrix::Zero(3, 3);
    phi(0, 1) = 0.1;
    CHECK_THROWS_WITH_AS(SystemSpec::create(e, phi), doctest::Contains("symmetric"), InvariantError);
    phi(1, 0) = 0.1;
    CHECK_NOTHROW(SystemSpec::create(e, phi));

    RealVector bad = e;
    bad(2) = 0.1;
    CHECK_THROWS_AS(SystemSpec::create(bad, phi), InvariantError);
    bad(2) = std::nan("");
    CHECK_THROWS_AS(SystemSpec::create(bad, phi), InvariantError);
    CHECK_THROWS_AS(SystemSpec::create(e, RealMatrix::Zero(2, 2)), InvariantError);
}

TEST_CASE("qubit states and initial density")
{
    const auto p = QubitState::baseline();
    const auto rho = initial_density(p, 3);
    CHECK(rho(0, 0).real() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(rho(1, 1).real() == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(std::abs(rho(2, 2)) == 0.0);

    const auto ground = initial_density(QubitState::create(1.0, 0.0), 3);
    Matrix expect = Matrix::Zero(3, 3);
    expect(0, 0) = 1.0;
    CHECK(ground.matrix() == expect);

    CHECK_THROWS_AS(QubitState::create(1.0, 0.1), InvariantError);
    CHECK_THROWS_AS(initial_density(p, 1), std::invalid_argument);
}

TEST_CASE("density matrix invariants")
{
    Matrix m = Matrix::Identity(2, 2) * 0.5;
    CHECK_NOTHROW(DensityMatrix::create(m));
    m(0, 1) = {0.1, 0.2};
    CHECK_THROWS_AS(DensityMatrix::create(m), InvariantError);
    m(1, 0) = std::conj(m(0, 1));
    CHECK_NOTHROW(DensityMatrix::create(m));
    m(0, 0) = 0.7;
    CHECK_THROWS_AS(DensityMatrix::create(m), InvariantError);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const double a = std::uniform_real_distribution<>(0.0, 1.0)(rng);
        const double ph = std::uniform_real_distribution<>(0.0, 6.28)(rng);
        const auto s = QubitState::create(std::sqrt(a), std::polar(std::sqrt(1 - a), ph));
        const auto r = initial_density(s, 4);
        CHECK(hermiticity_defect(r.matrix()) < 1e-15);
        CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-14);
    }
}

TEST_CASE("interaction-picture coupling")
{
    const auto s = build_three_level();
    const Matrix at0 = interaction_coupling(s, 0.0);
    CHECK(at0 == s.coupling().cast<Complex>());

    const double t = 0.37;
    const Matrix p = interaction_coupling(s, t);
    CHECK(p(0, 1) == Complex(0.1, 0.0));
    const Complex e23 = 0.1 * std::exp(Complex(0.0, 2.0 * t));
    CHECK(std::abs(p(1, 2) - e23) < 1e-16);
    CHECK(p(2, 1) == std::conj(p(1, 2)));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<> u(-20.0, 20.0);
    const auto m = build_multilevel(7, MultilevelCoupling::Exponential, 2.0);
    for (int i = 0; i < 100; ++i) CHECK(hermiticity_defect(interaction_coupling(m, u(rng))) == 0.0);
}

}
