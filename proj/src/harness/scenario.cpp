#include "decohere/harness/scenario.hpp"

#include <sstream>

namespace decohere::harness {

const Config::Schema& scenario_schema()
{
    static const Config::Schema schema{
        {"system", {"preset", "levels", "coupling", "range", "energies", "coupling_matrix"}},
        {"spectrum", {"model", "area", "center", "width", "ohmicity", "cutoff", "method"}},
        {"state", {"preset", "a", "b"}},
        {"evolution", {"t_max", "dt", "corrector_iterations"}},
        {"fit", {"t_lo", "t_hi"}},
        {"rpa", {"delta", "ladder", "cutoff", "scan_points"}},
        {"sweep", {"kind", "values", "log_range", "linear_range"}},
    };
    return schema;
}

namespace {

// Runs `build` and re-raises model errors against the given key.
template <class F>
auto checked(const Config& cfg, const std::string& section, const std::string& key, F&& build)
{
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        cfg.fail(section, key, e.what());
    }
}

SystemSpec system_from(const Config& cfg)
{
    const std::string preset = cfg.get_string("system", "preset", "three-level");
    if (preset == "three-level") return build_three_level();
    if (preset == "two-level") return build_two_level();
    if (preset == "multilevel") {
        const long levels = cfg.get_int("system", "levels");
        if (levels < 2) cfg.fail("system", "levels", "multilevel systems need at least 2 levels");
        const std::string kind = cfg.get_string("system", "coupling", "flat");
        if (kind != "flat" && kind != "exponential")
            cfg.fail("system", "coupling", "coupling must be `flat` or `exponential`");
        const auto type = kind == "flat" ? MultilevelCoupling::Flat : MultilevelCoupling::Exponential;
        const double range = type == MultilevelCoupling::Exponential ? cfg.get_double("system", "range") : 1.0;
        return checked(cfg, "system", type == MultilevelCoupling::Flat ? "levels" : "range",
                       [&] { return build_multilevel(static_cast<std::size_t>(levels), type, range); });
    }
    if (preset == "custom") {
        const auto e = cfg.get_doubles("system", "energies");
        const auto rows_text = cfg.get_string("system", "coupling_matrix");
        std::vector<std::vector<double>> rows;
        std::istringstream is(rows_text);
        std::string row;
        while (std::getline(is, row, ';')) {
            Config tmp = Config::parse("[r]\nv = " + row + "\n");
            try {
                rows.push_back(tmp.get_doubles("r", "v"));
            } catch (const ConfigError&) {
                cfg.fail("system", "coupling_matrix", "rows must be comma-separated numbers");
            }
        }
        const auto M = static_cast<Eigen::Index>(e.size());
        if (static_cast<Eigen::Index>(rows.size()) != M)
            cfg.fail("system", "coupling_matrix", "expected " + std::to_string(M) + " rows");
        RealMatrix phi(M, M);
        for (Eigen::Index i = 0; i < M; ++i) {
            if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != M)
                cfg.fail("system", "coupling_matrix", "row " + std::to_string(i + 1) + " has the wrong length");
            for (Eigen::Index j = 0; j < M; ++j) phi(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        RealVector ev = Eigen::Map<const RealVector>(e.data(), M);
        return checked(cfg, "system", "coupling_matrix", [&] { return SystemSpec::create(ev, phi); });
    }
    cfg.fail("system", "preset", "unknown system preset `" + preset + "`");
}

SpectralModel spectrum_from(const Config& cfg)
{
    const std::string model = cfg.get_string("spectrum", "model");
    const double A = cfg.get_double("spectrum", "area");
    if (model == "rectangular" || model == "lorentzian") {
        const double c = cfg.get_double("spectrum", "center");
        const double w = cfg.get_double("spectrum", "width");
        return checked(cfg, "spectrum", "model", [&] {
            return model == "rectangular" ? SpectralModel::rectangular(A, c, w)
                                          : SpectralModel::lorentzian(A, c, w);
        });
    }
    if (model == "power-gaussian") {
        const double nu = cfg.get_double("spectrum", "ohmicity");
        const double lam = cfg.get_double("spectrum", "cutoff");
        return checked(cfg, "spectrum", "ohmicity", [&] { return SpectralModel::power_gaussian(A, nu, lam); });
    }
    cfg.fail("spectrum", "model", "unknown spectral model `" + model + "`");
}

CorrelatorMethod method_from(const Config& cfg)
{
    const std::string m = cfg.get_string("spectrum", "method", "auto");
    if (m == "auto") return CorrelatorMethod::Automatic;
    if (m == "analytic") return CorrelatorMethod::Analytic;
    if (m == "quadrature") return CorrelatorMethod::Quadrature;
    cfg.fail("spectrum", "method", "method must be auto, analytic or quadrature");
}

Complex complex_from(const Config& cfg, const std::string& key)
{
    const auto v = cfg.get_doubles("state", key);
    if (v.size() != 2) cfg.fail("state", key, "`" + key + "` expects `re, im`");
    return {v[0], v[1]};
}

QubitState state_from(const Config& cfg)
{
    const std::string preset = cfg.get_string("state", "preset", cfg.has("state", "a") ? "custom" : "baseline");
    if (preset == "baseline") return QubitState::baseline();
    if (preset != "custom") cfg.fail("state", "preset", "state preset must be `baseline` or `custom`");
    const Complex a = complex_from(cfg, "a");
    const Complex b = complex_from(cfg, "b");
    return checked(cfg, "state", "a", [&] { return QubitState::create(a, b); });
}

} // namespace

Scenario scenario_from_config(const Config& cfg)
{
    cfg.check_schema(scenario_schema());

    EvolutionConfig evo;
    evo.t_max = cfg.get_double("evolution", "t_max", evo.t_max);
    evo.dt = cfg.get_double("evolution", "dt", evo.dt);
    evo.corrector_iterations =
        static_cast<int>(cfg.get_int("evolution", "corrector_iterations", evo.corrector_iterations));
    checked(cfg, "evolution", "dt", [&] { evo.validate(); return 0; });

    FitWindow fit;
    fit.t_lo = cfg.get_double("fit", "t_lo", fit.t_lo);
    fit.t_hi = cfg.get_double("fit", "t_hi", fit.t_hi);
    checked(cfg, "fit", "t_lo", [&] { fit.validate(); return 0; });
    if (fit.t_hi > evo.t_max + 1e-12) cfg.fail("fit", "t_hi", "fit window ends after t_max");

    RpaConfig rpa;
    rpa.delta = cfg.get_double("rpa", "delta", rpa.delta);
    rpa.ladder = static_cast<std::size_t>(cfg.get_int("rpa", "ladder", static_cast<long>(rpa.ladder)));
    rpa.cutoff = cfg.get_double("rpa", "cutoff", rpa.cutoff);
    rpa.scan_points = static_cast<std::size_t>(cfg.get_int("rpa", "scan_points", static_cast<long>(rpa.scan_points)));
    checked(cfg, "rpa", "delta", [&] { rpa.validate(); return 0; });

    const auto method = method_from(cfg);
    auto spectrum = spectrum_from(cfg);
    if (method == CorrelatorMethod::Analytic && !spectrum.has_closed_form_correlator())
        cfg.fail("spectrum", "method", "no closed-form correlator for the " + spectrum.name() + " spectrum");

    return Scenario{system_from(cfg), std::move(spectrum), method, state_from(cfg), evo, fit, rpa};
}

ScenarioOutcome run_scenario(const Scenario& s)
{
    const auto table = correlator_table(s.correlator(), s.evolution.t_max, s.evolution.dt);
    const auto rho0 = initial_density(s.state, s.system.levels());
    auto traj = integrate(s.system, table, rho0, s.evolution);
    auto rates = extract_rates(traj, s.fit);
    return {std::move(traj), rates};
}

} // namespace decohere::harness
