// model.hpp: Multilevel system in its eigenbasis, qubit initial states and
// interaction-picture coupling matrices.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace decohere {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Raised when a value object would be built in a state that breaks one of
// its invariants (asymmetric coupling, unnormalized amplitudes, ...).
class InvariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Energies E_n and real-symmetric coupling φ_nr of an M-level system.
// Immutable once built; the only way in is the validating factory.
class SystemSpec {
public:
    static SystemSpec create(RealVector energies, RealMatrix coupling);

    std::size_t levels() const noexcept { return static_cast<std::size_t>(energies_.size()); }
    const RealVector& energies() const noexcept { return energies_; }
    const RealMatrix& coupling() const noexcept { return coupling_; }

private:
    SystemSpec(RealVector e, RealMatrix c) : energies_(std::move(e)), coupling_(std::move(c)) {}

    RealVector energies_;
    RealMatrix coupling_;
};

enum class MultilevelCoupling {
    Flat,        // φ_nr = 0.1 when n + r is odd
    Exponential  // φ_nr = 0.1 exp(-|n - r| / Δ) when n + r is odd
};

inline constexpr double kCouplingScale = 0.1;

// E = (0.5, 0.5, 2.5), φ12 = φ23 = 0.1, φ13 = 0.
SystemSpec build_three_level();

// The three-level system with every coupling to level 3 switched off. The
// third level stays in the basis so leakage can be observed (and stays zero).
SystemSpec build_two_level();

// Degenerate qubit pair at 0.5 followed by harmonic levels E_n = n - 1/2.
SystemSpec build_multilevel(std::size_t levels, MultilevelCoupling kind, double range = 1.0);

struct QubitState {
    Complex a;
    Complex b;

    // Throws InvariantError unless |a|^2 + |b|^2 = 1 within 1e-12.
    static QubitState create(Complex a, Complex b);

    // a = sqrt(0.1), b = i sqrt(0.9).
    static QubitState baseline();
};

// Hermitian, unit-trace M x M matrix. Diagonal entries are only required to
// be bounded, not non-negative.
class DensityMatrix {
public:
    static constexpr double kHermiticityTolerance = 1e-10;
    static constexpr double kTraceTolerance = 1e-10;
    static constexpr double kDiagonalSlack = 1e-8;

    static DensityMatrix create(Matrix entries);

    const Matrix& matrix() const noexcept { return entries_; }
    std::size_t levels() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    Complex operator()(std::size_t n, std::size_t m) const {
        return entries_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    }

private:
    explicit DensityMatrix(Matrix m) : entries_(std::move(m)) {}
    Matrix entries_;
};

// max |ρ_nm - conj(ρ_mn)|
double hermiticity_defect(const Matrix& m);

DensityMatrix initial_density(const QubitState& state, std::size_t levels);

// (φ̃_t)_nr = φ_nr exp(-i (E_n - E_r) t)
Matrix interaction_coupling(const SystemSpec& spec, double t);

} // namespace decohere
