#include "decohere/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace decohere {

namespace {

// slopes this small are round-off on a flat series
constexpr double kSlopeNoise = 1e-12;

} // namespace

void FitWindow::validate() const
{
    if (!(t_lo < t_hi)) throw std::invalid_argument("fit window needs t_lo < t_hi");
}

ExponentialFit fit_exponential_decay(std::span<const double> t, std::span<const double> y,
                                     const FitWindow& w)
{
    w.validate();
    if (t.size() != y.size()) throw std::invalid_argument("fit: time and value series differ in length");
    if (!t.empty() && (w.t_lo < t.front() - 1e-12 || w.t_hi > t.back() + 1e-12))
        throw FitError("fit window lies outside the sampled time range");

    // tolerate grid round-off at the window edges
    const double slack = 1e-9 * std::max(1.0, std::abs(w.t_hi));
    std::vector<double> xs, ls;
    ExponentialFit fit;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < w.t_lo - slack || t[k] > w.t_hi + slack) continue;
        double v = y[k];
        if (!std::isfinite(v) || v <= 0.0) {
            std::ostringstream os;
            os << "fit: non-positive sample y=" << v << " at t=" << t[k];
            throw FitError(os.str());
        }
        if (v < kMinSample) {
            v = kMinSample;
            fit.clipped = true;
        }
        xs.push_back(t[k]);
        ls.push_back(std::log(v));
    }
    if (xs.size() < kMinFitSamples) {
        std::ostringstream os;
        os << "fit: only " << xs.size() << " samples in [" << w.t_lo << ", " << w.t_hi
           << "], need " << kMinFitSamples;
        throw FitError(os.str());
    }

    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ls[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ls[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ls[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }

    fit.rate = -slope;
    fit.amplitude = std::exp(intercept);
    // a constant series is fitted exactly
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.samples = xs.size();
    return fit;
}

RateEstimate to_rate(const ExponentialFit& fit)
{
    RateEstimate r;
    r.fitted_rate = fit.rate;
    r.r_squared = fit.r_squared;
    r.clipped = fit.clipped;
    // decay slower than the noise floor is reported as none
    r.rate = fit.rate > kSlopeNoise ? fit.rate : 0.0;
    r.negative = fit.rate < -kSlopeNoise;
    // flat series carry no decay to judge the fit quality by
    r.low_quality = std::abs(fit.rate) > kSlopeNoise && fit.r_squared < kQualityThreshold;
    return r;
}

RateSet extract_rates(const Trajectory& traj, const FitWindow& w)
{
    if (traj.levels() < 2) throw std::invalid_argument("extract_rates: trajectory needs >= 2 levels");
    RateSet set;
    set.relaxation = to_rate(fit_exponential_decay(traj.times, traj.excited_population(), w));
    set.dephasing = to_rate(fit_exponential_decay(traj.times, traj.coherence_magnitude(), w));
    set.leakage = to_rate(fit_exponential_decay(traj.times, traj.qubit_population(), w));
    return set;
}

std::string RateSet::warnings() const
{
    std::string out;
    auto add = [&](const char* name, const RateEstimate& r) {
        if (r.negative) out += std::string(out.empty() ? "" : ";") + name + ":negative-slope";
        if (r.low_quality) out += std::string(out.empty() ? "" : ";") + name + ":low-r2";
        if (r.clipped) out += std::string(out.empty() ? "" : ";") + name + ":clipped";
    };
    add("relaxation", relaxation);
    add("dephasing", dephasing);
    add("leakage", leakage);
    return out;
}

} // namespace decohere
