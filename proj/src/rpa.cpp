#include "decohere/rpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace decohere {

void RpaConfig::validate() const
{
    if (!(delta > 0.0)) throw std::invalid_argument("rpa: delta must be positive");
    if (ladder < 2) throw std::invalid_argument("rpa: the delta ladder needs at least 2 rungs");
    if (cutoff < 0.0) throw std::invalid_argument("rpa: cutoff must be non-negative");
    if (scan_points < 2) throw std::invalid_argument("rpa: scan_points must be >= 2");
}

std::vector<double> channel_weights(const SystemSpec& spec, const QubitState& state)
{
    if (spec.levels() < 2) throw std::invalid_argument("channel_weights: need the qubit pair");
    const auto& phi = spec.coupling();
    const double a2 = std::norm(state.a), b2 = std::norm(state.b);
    const double cross = 2.0 * (std::conj(state.a) * state.b).real();
    std::vector<double> w(spec.levels());
    for (std::size_t s = 0; s < w.size(); ++s) {
        const auto i = static_cast<Eigen::Index>(s);
        w[s] = a2 * phi(0, i) * phi(0, i) + b2 * phi(1, i) * phi(1, i) + cross * phi(0, i) * phi(1, i);
    }
    return w;
}

double n_second_order(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
                      double omega)
{
    const auto weights = channel_weights(spec, state);
    const double I = model(omega);
    const auto& E = spec.energies();
    double total = 0.0;
    for (std::size_t s = 0; s < weights.size(); ++s) {
        if (weights[s] == 0.0 || I == 0.0) continue;
        const double lambda = omega + E(0) - E(static_cast<Eigen::Index>(s));
        if (lambda == 0.0) return std::numeric_limits<double>::infinity();
        total += 2.0 * I * weights[s] / (lambda * lambda);
    }
    return total;
}

namespace {

// Re[g / ((u + iδ)(u - g + iδ))] = Re[1/(u - g + iδ) - 1/(u + iδ)]
double resummed(double u, double g, double delta)
{
    const std::complex<double> den = std::complex<double>(u, delta) * std::complex<double>(u - g, delta);
    return (g / den).real();
}

struct Channel {
    double weight; // S_s
    double slope;  // u = slope ω + offset
    double offset;
};

std::pair<double, double> integration_range(const SpectralModel& model, const RpaConfig& cfg)
{
    const Support s = model.support();
    if (s.finite()) return {s.lo, s.hi};
    if (const auto* l = std::get_if<Lorentzian>(&model.parameters())) {
        const double half = cfg.cutoff > 0.0 ? cfg.cutoff : 1e3 * l->width;
        return {l->center - half, l->center + half};
    }
    const auto& p = std::get<PowerGaussian>(model.parameters());
    return {0.0, cfg.cutoff > 0.0 ? cfg.cutoff : 20.0 * p.cutoff};
}

// Bare pole u = 0 and the sign changes of u - 4 S I(ω) found on a uniform
// scan and refined by bisection.
std::vector<double> breakpoints(const SpectralModel& model, const Channel& ch, double lo, double hi,
                                std::size_t scan_points)
{
    std::vector<double> pts{lo, hi};
    const double bare = -ch.offset / ch.slope;
    if (bare > lo && bare < hi) pts.push_back(bare);

    auto h = [&](double w) { return ch.slope * w + ch.offset - 4.0 * ch.weight * model(w); };
    const double step = (hi - lo) / static_cast<double>(scan_points - 1);
    double w_prev = lo, h_prev = h(lo);
    for (std::size_t i = 1; i < scan_points; ++i) {
        const double w = i + 1 == scan_points ? hi : lo + step * static_cast<double>(i);
        const double hw = h(w);
        if ((h_prev < 0.0) != (hw < 0.0)) {
            double a = w_prev, b = w;
            double ha = h_prev;
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double hm = h(m);
                if ((ha < 0.0) == (hm < 0.0)) {
                    a = m;
                    ha = hm;
                } else {
                    b = m;
                }
            }
            pts.push_back(0.5 * (a + b));
        }
        w_prev = w;
        h_prev = hw;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); }),
              pts.end());
    return pts;
}

// Panel edges geometrically graded towards each pole (and the range ends), so that the
// Lorentzian-like peaks of width δ are resolved without deep recursion.
std::vector<double> graded(const std::vector<double>& pts, double delta)
{
    std::vector<double> out(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double p = pts[i];
        if (i > 0)
            for (double h = delta; p - h > pts[i - 1]; h *= 4.0) out.push_back(p - h);
        if (i + 1 < pts.size())
            for (double h = delta; p + h < pts[i + 1]; h *= 4.0) out.push_back(p + h);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double channel_integral(const SpectralModel& model, const Channel& ch, double lo, double hi,
                        double delta, const RpaConfig& cfg)
{
    using boost::math::quadrature::gauss_kronrod;
    const auto pts = graded(breakpoints(model, ch, lo, hi, cfg.scan_points), delta);
    auto f = [&](double w) {
        const double g = 4.0 * ch.weight * model(w);
        return resummed(ch.slope * w + ch.offset, g, delta);
    };
    double total = 0.0, err_total = 0.0, l1_total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0, l1 = 0.0;
        total += gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1], 12, 1e-11, &err, &l1);
        err_total += err;
        l1_total += l1;
    }
    if (err_total > std::max(cfg.abs_tolerance, 1e-8 * l1_total)) {
        std::ostringstream os;
        os << "rpa quadrature error estimate " << err_total << " exceeds tolerance";
        throw QuadratureError(os.str());
    }
    return total;
}

double resummed_integral(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
                         const RpaConfig& cfg, double delta, double slope, double weight)
{
    cfg.validate();
    const auto weights = channel_weights(spec, state);
    const auto [lo, hi] = integration_range(model, cfg);
    const auto& E = spec.energies();
    double total = 0.0;
    for (std::size_t s = 0; s < weights.size(); ++s) {
        if (weights[s] == 0.0) continue;
        const Channel ch{weights[s], slope, E(0) - E(static_cast<Eigen::Index>(s))};
        total += weight * channel_integral(model, ch, lo, hi, delta, cfg);
    }
    return total;
}

bool cauchy_monotone(const std::vector<double>& v)
{
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double d = std::abs(v[k + 1] - v[k]);
        if (d > prev * (1.0 + 1e-9) + 1e-14) return false;
        prev = d;
    }
    return true;
}

} // namespace

double n_rpa(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
             double omega, double delta)
{
    const auto weights = channel_weights(spec, state);
    const double I = model(omega);
    const auto& E = spec.energies();
    double total = 0.0;
    for (std::size_t s = 0; s < weights.size(); ++s) {
        if (weights[s] == 0.0) continue;
        const double lambda = omega + E(0) - E(static_cast<Eigen::Index>(s));
        // 2 I S / (λ(λ - g)) = (1/2) g / (λ(λ - g)) with g = 4 S I
        total += 0.5 * resummed(lambda, 4.0 * weights[s] * I, delta);
    }
    return total;
}

double total_number_at(const SystemSpec& spec, const SpectralModel& model, const QubitState& state,
                       const RpaConfig& cfg, double delta)
{
    return resummed_integral(spec, model, state, cfg, delta, 1.0, 0.5);
}

double fluctuation_squared_at(const SystemSpec& spec, const SpectralModel& model,
                              const QubitState& state, const RpaConfig& cfg, double delta)
{
    return resummed_integral(spec, model, state, cfg, delta, 2.0, 1.0);
}

double extrapolate_to_zero(const std::vector<double>& hs, const std::vector<double>& values)
{
    if (hs.size() != values.size() || hs.empty())
        throw std::invalid_argument("extrapolate_to_zero: mismatched or empty samples");
    std::vector<double> p = values;
    const std::size_t n = hs.size();
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            // Neville step evaluated at h = 0
            p[i] = (hs[i + m] * p[i] - hs[i] * p[i + 1]) / (hs[i + m] - hs[i]);
        }
    }
    return p[0];
}

FluctuationResult delta_n_total(const SystemSpec& spec, const SpectralModel& model,
                                const QubitState& state, const RpaConfig& cfg)
{
    cfg.validate();
    FluctuationResult r;
    std::vector<double> deltas(cfg.ladder);
    for (std::size_t k = 0; k < cfg.ladder; ++k) deltas[k] = cfg.delta / std::pow(2.0, static_cast<double>(k));

    for (double d : deltas) {
        r.N_ladder.push_back(total_number_at(spec, model, state, cfg, d));
        r.fluctuation_ladder.push_back(fluctuation_squared_at(spec, model, state, cfg, d));
    }
    r.N = extrapolate_to_zero(deltas, r.N_ladder);
    r.delta_N_squared = extrapolate_to_zero(deltas, r.fluctuation_ladder);
    r.converged = cauchy_monotone(r.N_ladder) && cauchy_monotone(r.fluctuation_ladder);

    if (r.delta_N_squared < 0.0) {
        r.regularization_failure = true;
        r.delta_N = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.delta_N = std::sqrt(r.delta_N_squared);
    }
    r.ratio = r.N != 0.0 ? r.delta_N / r.N : std::numeric_limits<double>::quiet_NaN();
    return r;
}

} // namespace decohere
