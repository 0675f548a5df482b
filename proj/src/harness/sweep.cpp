#include "decohere/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "decohere/harness/output.hpp"
#include "decohere/harness/scenario.hpp"

namespace decohere::harness {

namespace {

struct KindInfo {
    SweepKind kind;
    const char* name;
    const char* section;
    const char* key;
};

constexpr KindInfo kKinds[] = {
    {SweepKind::SpectralCenter, "spectral-center", "spectrum", "center"},
    {SweepKind::SpectralArea, "spectral-area", "spectrum", "area"},
    {SweepKind::Levels, "levels", "system", "levels"},
    {SweepKind::Correlator, "correlator", "spectrum", "ohmicity"},
    {SweepKind::RpaWidth, "rpa-width", "spectrum", "width"},
    {SweepKind::RpaArea, "rpa-area", "spectrum", "area"},
};

const KindInfo& info(SweepKind k)
{
    for (const auto& i : kKinds)
        if (i.kind == k) return i;
    throw std::logic_error("unknown sweep kind");
}

std::vector<double> grid_from(const Config& cfg)
{
    const int given = int(cfg.has("sweep", "values")) + int(cfg.has("sweep", "log_range")) +
                      int(cfg.has("sweep", "linear_range"));
    if (given != 1) cfg.fail("sweep", "kind", "give exactly one of values, log_range, linear_range");

    if (cfg.has("sweep", "values")) return cfg.get_doubles("sweep", "values");

    const bool log = cfg.has("sweep", "log_range");
    const char* key = log ? "log_range" : "linear_range";
    const auto r = cfg.get_doubles("sweep", key);
    if (r.size() != 3) cfg.fail("sweep", key, "expected `lo, hi, count`");
    const double lo = r[0], hi = r[1], n = r[2];
    if (n < 1 || n != std::floor(n)) cfg.fail("sweep", key, "count must be a positive integer");
    if (log && !(lo > 0 && hi > 0)) cfg.fail("sweep", key, "log_range bounds must be positive");
    const auto count = static_cast<std::size_t>(n);
    std::vector<double> g(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double s = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        g[k] = log ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))) : lo + s * (hi - lo);
    }
    if (count > 1) { g.front() = lo; g.back() = hi; }
    return g;
}

} // namespace

SweepKind parse_sweep_kind(const std::string& name)
{
    for (const auto& i : kKinds)
        if (name == i.name) return i.kind;
    throw std::invalid_argument("unknown sweep kind `" + name + "`");
}

std::string sweep_kind_name(SweepKind kind) { return info(kind).name; }

bool is_rpa_sweep(SweepKind kind) { return kind == SweepKind::RpaWidth || kind == SweepKind::RpaArea; }

SweepSpec SweepSpec::from_config(const Config& cfg)
{
    cfg.check_schema(scenario_schema());
    SweepSpec s;
    try {
        s.kind = parse_sweep_kind(cfg.get_string("sweep", "kind"));
    } catch (const std::invalid_argument& e) {
        cfg.fail("sweep", "kind", e.what());
    }
    s.grid = grid_from(cfg);
    if (s.grid.empty()) cfg.fail("sweep", "kind", "sweep grid is empty");
    const bool up = s.grid.size() < 2 || s.grid[1] > s.grid[0];
    for (std::size_t k = 1; k < s.grid.size(); ++k)
        if (up ? !(s.grid[k] > s.grid[k - 1]) : !(s.grid[k] < s.grid[k - 1]))
            cfg.fail("sweep", cfg.has("sweep", "values") ? "values" : "kind", "sweep grid must be strictly monotone");
    if (s.kind == SweepKind::Levels)
        for (double v : s.grid)
            if (v != std::floor(v) || v < 2) cfg.fail("sweep", "kind", "levels grid must hold integers >= 2");

    s.base = cfg;
    // Validate the base scenario once so that structural errors surface
    // before any work is scheduled.
    scenario_from_config(s.point_config(s.grid.front()));
    return s;
}

Config SweepSpec::point_config(double value) const
{
    Config c = base;
    c.erase_section("sweep");
    const auto& i = info(kind);
    if (kind == SweepKind::Levels) {
        c.set("system", "preset", "multilevel");
        c.set(i.section, i.key, std::to_string(static_cast<long>(value)));
    } else {
        c.set(i.section, i.key, format_double(value));
    }
    return c;
}

ResultRow evaluate_point(const SweepSpec& spec, double value)
{
    ResultRow row;
    row.value = value;
    const Config cfg = spec.point_config(value);
    row.config_hash = fnv1a_hex(cfg.canonical());
    try {
        const Scenario s = scenario_from_config(cfg);
        if (is_rpa_sweep(spec.kind)) {
            row.fluctuation = delta_n_total(s.system, s.spectrum, s.state, s.rpa);
        } else {
            const auto out = run_scenario(s);
            row.rates = out.rates;
            row.max_trace_drift = out.trajectory.max_trace_drift;
            row.max_hermiticity_defect = out.trajectory.max_hermiticity_defect;
        }
    } catch (const std::exception& e) {
        row.status = e.what();
    }
    return row;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned threads)
{
    std::vector<ResultRow> rows(spec.grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) rows[k] = evaluate_point(spec, spec.grid[k]);
    };
    const unsigned n = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(rows.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.value < b.value; });
    return rows;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<ResultRow>& rows)
{
    std::ostringstream os;
    CsvWriter w(os);
    const std::string param = info(spec.kind).key;
    if (is_rpa_sweep(spec.kind)) {
        w.header({param, "N", "delta_N", "ratio", "delta_N_squared", "converged", "regularization_failure",
                  "config_hash", "status"});
        for (const auto& r : rows) {
            w.field(r.value);
            if (r.fluctuation) {
                const auto& f = *r.fluctuation;
                w.field(f.N).field(f.delta_N).field(f.ratio).field(f.delta_N_squared);
                w.field(long(f.converged)).field(long(f.regularization_failure));
            } else {
                for (int i = 0; i < 6; ++i) w.field(std::string());
            }
            w.field(r.config_hash).field(r.status);
            w.end_row();
        }
        return os.str();
    }

    w.header({param, "relaxation_rate", "dephasing_rate", "leakage_rate", "relaxation_r2", "dephasing_r2",
              "leakage_r2", "warnings", "max_trace_drift", "max_hermiticity_defect", "config_hash", "status"});
    for (const auto& r : rows) {
        w.field(r.value);
        if (r.rates) {
            const auto& s = *r.rates;
            w.field(s.relaxation.rate).field(s.dephasing.rate).field(s.leakage.rate);
            w.field(s.relaxation.r_squared).field(s.dephasing.r_squared).field(s.leakage.r_squared);
            w.field(s.warnings()).field(r.max_trace_drift).field(r.max_hermiticity_defect);
        } else {
            for (int i = 0; i < 9; ++i) w.field(std::string());
        }
        w.field(r.config_hash).field(r.status);
        w.end_row();
    }
    return os.str();
}

nlohmann::json sweep_metadata(const SweepSpec& spec, const std::vector<ResultRow>& rows)
{
    Config base = spec.base;
    const std::string canonical = base.canonical();
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status != "ok";
    return {{"kind", sweep_kind_name(spec.kind)},
            {"parameter", std::string(info(spec.kind).section) + "." + info(spec.kind).key},
            {"grid", spec.grid},
            {"rows", rows.size()},
            {"failed_rows", failed},
            {"base_config", canonical},
            {"base_config_hash", fnv1a_hex(canonical)},
            {"source", spec.base.source()}};
}

} // namespace decohere::harness
