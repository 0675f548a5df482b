// decohere: command-line front end.
//
//   decohere evolve           --config FILE --out DIR   trajectory.csv + rates.json
//   decohere rates            --config FILE | --trajectory CSV   rates.json
//   decohere sweep            --config FILE --out DIR --threads N   sweep.csv + sweep.meta.json
//   decohere correlator-table --config FILE --out DIR   correlator.csv
//   decohere spectrum-table   --config FILE --out DIR   spectrum.csv
//   decohere rpa              --config FILE --out DIR   rpa.json

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "decohere/harness/config.hpp"
#include "decohere/harness/output.hpp"
#include "decohere/harness/scenario.hpp"
#include "decohere/harness/sweep.hpp"
#include "decohere/simd/complex_dot.hpp"

namespace fs = std::filesystem;
using namespace decohere;
using namespace decohere::harness;

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    unsigned threads = 0;
    std::optional<double> dt;
    std::optional<double> tmax;
    std::string kernel = "auto";
    std::string trajectory;
    std::size_t points = 2001;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
};

Config load_config(const Options& o)
{
    Config cfg = Config::load(o.config);
    auto override_value = [&](const char* key, double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        cfg.set("evolution", key, os.str());
    };
    if (o.dt) override_value("dt", *o.dt);
    if (o.tmax) override_value("t_max", *o.tmax);
    return cfg;
}

void apply_kernel(const std::string& name)
{
    if (name == "auto") simd::select_backend(simd::best_backend());
    else if (name == "scalar") simd::select_backend(simd::Backend::Scalar);
    else if (name == "avx2") simd::select_backend(simd::Backend::Avx2);
    else throw std::invalid_argument("unknown kernel `" + name + "`");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_evolve(const Options& o)
{
    const Scenario s = scenario_from_config(load_config(o));
    const auto out = run_scenario(s);
    std::ostringstream csv;
    write_trajectory_csv(csv, out.trajectory);
    write_file(fs::path(o.out) / "trajectory.csv", csv.str());
    write_file(fs::path(o.out) / "rates.json", dump(rates_json(out.rates, &out.trajectory)));
    if (out.rates.any_warning()) std::cerr << "warning: " << out.rates.warnings() << "\n";
    return 0;
}

int cmd_rates(const Options& o)
{
    nlohmann::json j;
    if (!o.trajectory.empty()) {
        std::ifstream f(o.trajectory);
        if (!f) throw std::runtime_error("cannot open " + o.trajectory);
        const auto c = read_trajectory_csv(f);
        FitWindow w;
        if (!o.config.empty()) {
            const Scenario s = scenario_from_config(load_config(o));
            w = s.fit;
        }
        RateSet r;
        r.relaxation = to_rate(fit_exponential_decay(c.t, c.rho22, w));
        r.dephasing = to_rate(fit_exponential_decay(c.t, c.abs_rho12, w));
        r.leakage = to_rate(fit_exponential_decay(c.t, c.qubit_population, w));
        j = rates_json(r);
    } else {
        const auto out = run_scenario(scenario_from_config(load_config(o)));
        j = rates_json(out.rates, &out.trajectory);
    }
    write_file(fs::path(o.out) / "rates.json", dump(j));
    return 0;
}

int cmd_sweep(const Options& o)
{
    const SweepSpec spec = SweepSpec::from_config(load_config(o));
    const unsigned threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
    const auto rows = run_sweep(spec, threads);
    write_file(fs::path(o.out) / "sweep.csv", sweep_csv(spec, rows));
    const auto meta = sweep_metadata(spec, rows);
    write_file(fs::path(o.out) / "sweep.meta.json", dump(meta));
    if (meta["failed_rows"].get<std::size_t>() > 0)
        std::cerr << "warning: " << meta["failed_rows"] << " sweep point(s) failed, see status column\n";
    return 0;
}

int cmd_correlator(const Options& o)
{
    const Scenario s = scenario_from_config(load_config(o));
    std::ostringstream csv;
    write_correlator_table(csv, s.correlator(), s.evolution.t_max, s.evolution.dt);
    write_file(fs::path(o.out) / "correlator.csv", csv.str());
    return 0;
}

int cmd_spectrum(const Options& o)
{
    const Scenario s = scenario_from_config(load_config(o));
    const auto sup = s.spectrum.support();
    double lo = o.omega_min.value_or(sup.lo), hi = o.omega_max.value_or(sup.hi);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        // Default window for infinite supports.
        if (const auto* l = std::get_if<Lorentzian>(&s.spectrum.parameters())) {
            lo = o.omega_min.value_or(l->center - 20 * l->width);
            hi = o.omega_max.value_or(l->center + 20 * l->width);
        } else if (const auto* g = std::get_if<PowerGaussian>(&s.spectrum.parameters())) {
            hi = o.omega_max.value_or(10 * g->cutoff);
        }
    }
    std::ostringstream csv;
    write_spectrum_table(csv, s.spectrum, lo, hi, o.points);
    write_file(fs::path(o.out) / "spectrum.csv", csv.str());
    return 0;
}

int cmd_rpa(const Options& o)
{
    const Scenario s = scenario_from_config(load_config(o));
    const auto r = delta_n_total(s.system, s.spectrum, s.state, s.rpa);
    write_file(fs::path(o.out) / "rpa.json", dump(fluctuation_json(r)));
    if (!r.converged) std::cerr << "warning: delta extrapolation did not converge\n";
    if (r.regularization_failure) std::cerr << "warning: negative fluctuation after extrapolation\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-Markovian decoherence of a qubit in a multilevel system"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", o.config, "scenario configuration file");
        if (need_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--dt", o.dt, "override [evolution] dt");
        sub->add_option("--tmax", o.tmax, "override [evolution] t_max");
        sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
        sub->add_option("--kernel", o.kernel, "memory kernel backend")
            ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    };

    auto* evolve = app.add_subcommand("evolve", "integrate and write trajectory.csv and rates.json");
    common(evolve, true);
    auto* rates = app.add_subcommand("rates", "fit rates from a config or an existing trajectory CSV");
    common(rates, false);
    rates->add_option("--trajectory", o.trajectory, "trajectory CSV to refit")->check(CLI::ExistingFile);
    auto* sweep = app.add_subcommand("sweep", "run the [sweep] section and write sweep.csv");
    common(sweep, true);
    auto* corr = app.add_subcommand("correlator-table", "write (tau, Re F, Im F) on the time grid");
    common(corr, true);
    auto* spec = app.add_subcommand("spectrum-table", "write (omega, I) samples");
    common(spec, true);
    spec->add_option("--points", o.points, "number of samples")->check(CLI::Range(2, 10000000));
    spec->add_option("--omega-min", o.omega_min, "lower end of the window");
    spec->add_option("--omega-max", o.omega_max, "upper end of the window");
    auto* rpa = app.add_subcommand("rpa", "RPA photon number and fluctuation");
    common(rpa, true);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_kernel(o.kernel);
        if (*rates && o.config.empty() && o.trajectory.empty())
            throw std::invalid_argument("rates needs --config or --trajectory");
        if (*evolve) return cmd_evolve(o);
        if (*rates) return cmd_rates(o);
        if (*sweep) return cmd_sweep(o);
        if (*corr) return cmd_correlator(o);
        if (*spec) return cmd_spectrum(o);
        if (*rpa) return cmd_rpa(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
