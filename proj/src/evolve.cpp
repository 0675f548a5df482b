#include "decohere/evolve.hpp"

#include <cmath>
#include <sstream>

#include "decohere/simd/complex_dot.hpp"

namespace decohere {

void EvolutionConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (dt > kMaxStep) {
        std::ostringstream os;
        os << "dt=" << dt << " exceeds the ceiling " << kMaxStep;
        throw std::invalid_argument(os.str());
    }
    if (corrector_iterations < 1) throw std::invalid_argument("corrector_iterations must be >= 1");
    (void)grid_steps(t_max, dt);
}

std::vector<double> Trajectory::population(std::size_t level) const
{
    std::vector<double> out;
    out.reserve(states.size());
    const auto l = static_cast<Eigen::Index>(level);
    for (const auto& s : states) out.push_back(s(l, l).real());
    return out;
}

std::vector<double> Trajectory::coherence_magnitude() const
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(std::abs(s(0, 1)));
    return out;
}

std::vector<double> Trajectory::qubit_population() const
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s(0, 0).real() + s(1, 1).real());
    return out;
}

std::vector<double> Trajectory::leakage() const
{
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(1.0 - s(0, 0).real() - s(1, 1).real());
    return out;
}

Matrix kernel_apply(const Matrix& phi_t, const Matrix& phi_tp, std::complex<double> F,
                    const Matrix& rho)
{
    return F * (phi_t * phi_tp * rho - phi_tp * rho * phi_t) +
           std::conj(F) * (rho * phi_tp * phi_t - phi_t * rho * phi_tp);
}

Matrix kernel_apply(const SystemSpec& spec, std::complex<double> F, double t, double t_prime,
                    const Matrix& rho)
{
    if (t < t_prime) throw std::invalid_argument("kernel_apply requires t >= t'");
    return kernel_apply(interaction_coupling(spec, t), interaction_coupling(spec, t_prime), F, rho);
}

namespace {

// History of X_k = φ̃_{t_k} ρ_k stored entry-major so that the memory sum
// for each matrix entry is one contiguous complex dot product against the
// reversed correlator table.
class MemoryHistory {
public:
    MemoryHistory(std::size_t entries, std::size_t capacity)
        : entries_(entries), capacity_(capacity), re_(entries * capacity), im_(entries * capacity)
    {}

    void store(std::size_t k, const Matrix& x)
    {
        const double* raw = reinterpret_cast<const double*>(x.data());
        for (std::size_t e = 0; e < entries_; ++e) {
            re_[e * capacity_ + k] = raw[2 * e];
            im_[e * capacity_ + k] = raw[2 * e + 1];
        }
    }

    simd::SplitComplexView entry(std::size_t e, std::size_t count) const
    {
        return {std::span<const double>(re_).subspan(e * capacity_, count),
                std::span<const double>(im_).subspan(e * capacity_, count)};
    }

private:
    std::size_t entries_;
    std::size_t capacity_;
    std::vector<double> re_;
    std::vector<double> im_;
};

std::string step_context(std::size_t step, double t)
{
    std::ostringstream os;
    os << "step " << step << " (t=" << t << ")";
    return os.str();
}

} // namespace

Trajectory integrate(const SystemSpec& spec, std::span<const std::complex<double>> F,
                     const DensityMatrix& rho0, const EvolutionConfig& cfg)
{
    cfg.validate();
    const std::size_t N = grid_steps(cfg.t_max, cfg.dt);
    if (F.size() < N + 1)
        throw std::invalid_argument("correlator table shorter than the time grid");
    if (rho0.levels() != spec.levels())
        throw std::invalid_argument("initial density and system have different level counts");

    const auto M = static_cast<Eigen::Index>(spec.levels());
    const std::size_t entries = spec.levels() * spec.levels();
    const double dt = cfg.dt;

    // rev[j] = F[N - j], so F[n - k] = rev[N - n + k] runs forward in k
    std::vector<double> rev_re(N + 1), rev_im(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        rev_re[j] = F[N - j].real();
        rev_im[j] = F[N - j].imag();
    }
    const simd::SplitComplexView rev{rev_re, rev_im};

    Trajectory traj;
    traj.times.resize(N + 1);
    traj.states.reserve(N + 1);
    for (std::size_t k = 0; k <= N; ++k) traj.times[k] = static_cast<double>(k) * dt;
    traj.states.push_back(rho0.matrix());

    const Matrix x0 = interaction_coupling(spec, 0.0) * rho0.matrix();
    MemoryHistory history(entries, N + 1);
    history.store(0, x0);
    Matrix hist(M, M);
    Matrix f_prev = Matrix::Zero(M, M);

    auto rhs = [&](const Matrix& phi_t, const Matrix& rho) -> Matrix {
        const Matrix Z = hist + (0.5 * dt) * F[0] * (phi_t * rho);
        const Matrix Q = Z - Z.adjoint();
        return -(phi_t * Q - Q * phi_t);
    };

    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t target = n + 1;
        const double t = traj.times[target];
        const Matrix phi_t = interaction_coupling(spec, t);

        // Σ_{k<target} w_k F(t - t_k) X_k, trapezoid weights (dt/2 at k = 0)
        const auto kernel_slice = rev.subview(N - target, target);
        for (std::size_t e = 0; e < entries; ++e) {
            hist.data()[e] = dt * simd::complex_dot(kernel_slice, history.entry(e, target));
        }
        hist -= (0.5 * dt) * F[target] * x0;

        const Matrix& rho_n = traj.states.back();
        Matrix rho_next = rho_n + dt * f_prev;
        for (int it = 0; it < cfg.corrector_iterations; ++it) {
            rho_next = rho_n + (0.5 * dt) * (f_prev + rhs(phi_t, rho_next));
        }

        if (!rho_next.allFinite())
            throw IntegrationError("non-finite density matrix at " + step_context(target, t));
        const double drift = std::abs(rho_next.trace() - 1.0);
        if (drift > 1e-4) {
            std::ostringstream os;
            os << "trace drift " << drift << " at " << step_context(target, t);
            throw IntegrationError(os.str());
        }
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, hermiticity_defect(rho_next));

        f_prev = rhs(phi_t, rho_next);
        history.store(target, phi_t * rho_next);
        traj.states.push_back(std::move(rho_next));
    }
    return traj;
}

Trajectory integrate(const SystemSpec& spec, const SpectralModel& model, const DensityMatrix& rho0,
                     const EvolutionConfig& cfg)
{
    cfg.validate();
    const auto table = correlator_table(Correlator(model), cfg.t_max, cfg.dt);
    return integrate(spec, table, rho0, cfg);
}

} // namespace decohere
