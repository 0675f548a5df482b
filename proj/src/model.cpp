#include "decohere/model.hpp"

#include <cmath>
#include <sstream>

namespace decohere {

SystemSpec SystemSpec::create(RealVector energies, RealMatrix coupling)
{
    const auto M = energies.size();
    if (M < 1) throw InvariantError("system needs at least one level");
    if (coupling.rows() != M || coupling.cols() != M) {
        std::ostringstream os;
        os << "coupling matrix is " << coupling.rows() << "x" << coupling.cols()
           << " but there are " << M << " energies";
        throw InvariantError(os.str());
    }
    for (Eigen::Index n = 0; n < M; ++n) {
        if (!std::isfinite(energies(n))) throw InvariantError("energies must be finite");
        if (n > 0 && energies(n) < energies(n - 1))
            throw InvariantError("energies must be sorted non-decreasing");
    }
    for (Eigen::Index n = 0; n < M; ++n) {
        for (Eigen::Index r = 0; r < M; ++r) {
            if (!std::isfinite(coupling(n, r))) throw InvariantError("couplings must be finite");
            if (coupling(n, r) != coupling(r, n)) {
                std::ostringstream os;
                os << "coupling matrix is not symmetric: phi(" << n + 1 << "," << r + 1
                   << ") = " << coupling(n, r) << " but phi(" << r + 1 << "," << n + 1
                   << ") = " << coupling(r, n);
                throw InvariantError(os.str());
            }
        }
    }
    return SystemSpec(std::move(energies), std::move(coupling));
}

SystemSpec build_three_level()
{
    RealVector e(3);
    e << 0.5, 0.5, 2.5;
    RealMatrix phi = RealMatrix::Zero(3, 3);
    phi(0, 1) = phi(1, 0) = kCouplingScale;
    phi(1, 2) = phi(2, 1) = kCouplingScale;
    return SystemSpec::create(std::move(e), std::move(phi));
}

SystemSpec build_two_level()
{
    const auto three = build_three_level();
    RealMatrix phi = three.coupling();
    phi(0, 2) = phi(2, 0) = 0.0;
    phi(1, 2) = phi(2, 1) = 0.0;
    return SystemSpec::create(three.energies(), std::move(phi));
}

SystemSpec build_multilevel(std::size_t levels, MultilevelCoupling kind, double range)
{
    if (levels < 2) throw std::invalid_argument("build_multilevel: need at least 2 levels");
    if (kind == MultilevelCoupling::Exponential && !(range > 0.0))
        throw std::invalid_argument("build_multilevel: coupling range must be positive");

    const auto M = static_cast<Eigen::Index>(levels);
    RealVector e(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        const auto n = static_cast<double>(i + 1);
        e(i) = i < 2 ? 0.5 : n - 0.5;
    }
    RealMatrix phi = RealMatrix::Zero(M, M);
    for (Eigen::Index i = 0; i < M; ++i) {
        for (Eigen::Index j = 0; j < M; ++j) {
            if ((i + j) % 2 == 0) continue; // n + r even (1-based parity is the same)
            const double dist = static_cast<double>(std::abs(i - j));
            phi(i, j) = kind == MultilevelCoupling::Flat
                            ? kCouplingScale
                            : kCouplingScale * std::exp(-dist / range);
        }
    }
    return SystemSpec::create(std::move(e), std::move(phi));
}

QubitState QubitState::create(Complex a, Complex b)
{
    const double norm = std::norm(a) + std::norm(b);
    if (!(std::abs(norm - 1.0) <= 1e-12)) {
        std::ostringstream os;
        os.precision(17);
        os << "qubit state is not normalized: |a|^2 + |b|^2 = " << norm;
        throw InvariantError(os.str());
    }
    return QubitState{a, b};
}

QubitState QubitState::baseline()
{
    // e^{iπ/2} = i exactly
    return create(Complex(std::sqrt(0.1), 0.0), Complex(0.0, std::sqrt(0.9)));
}

double hermiticity_defect(const Matrix& m)
{
    double worst = 0.0;
    for (Eigen::Index n = 0; n < m.rows(); ++n)
        for (Eigen::Index k = n; k < m.cols(); ++k)
            worst = std::max(worst, std::abs(m(n, k) - std::conj(m(k, n))));
    return worst;
}

DensityMatrix DensityMatrix::create(Matrix entries)
{
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw InvariantError("density matrix must be square and non-empty");
    if (!entries.allFinite()) throw InvariantError("density matrix has non-finite entries");
    if (hermiticity_defect(entries) > kHermiticityTolerance)
        throw InvariantError("density matrix is not Hermitian");
    const Complex tr = entries.trace();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "density matrix trace is " << tr.real() << " + " << tr.imag() << "i, expected 1";
        throw InvariantError(os.str());
    }
    for (Eigen::Index n = 0; n < entries.rows(); ++n) {
        const double p = entries(n, n).real();
        if (p < -kDiagonalSlack || p > 1.0 + kDiagonalSlack)
            throw InvariantError("density matrix population outside [0, 1]");
    }
    return DensityMatrix(std::move(entries));
}

DensityMatrix initial_density(const QubitState& state, std::size_t levels)
{
    if (levels < 2) throw std::invalid_argument("initial_density: need at least 2 levels");
    const auto s = QubitState::create(state.a, state.b);
    const auto M = static_cast<Eigen::Index>(levels);
    Matrix rho = Matrix::Zero(M, M);
    rho(0, 0) = std::norm(s.a);
    rho(1, 1) = std::norm(s.b);
    rho(0, 1) = s.a * std::conj(s.b);
    rho(1, 0) = std::conj(rho(0, 1));
    return DensityMatrix::create(std::move(rho));
}

Matrix interaction_coupling(const SystemSpec& spec, double t)
{
    const auto& e = spec.energies();
    const auto& phi = spec.coupling();
    const auto M = phi.rows();
    Matrix out(M, M);
    for (Eigen::Index n = 0; n < M; ++n) {
        for (Eigen::Index r = 0; r < M; ++r) {
            if (phi(n, r) == 0.0) {
                out(n, r) = 0.0;
                continue;
            }
            const double phase = -(e(n) - e(r)) * t;
            out(n, r) = phi(n, r) * Complex(std::cos(phase), std::sin(phase));
        }
    }
    return out;
}

} // namespace decohere
