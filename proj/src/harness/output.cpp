#include "decohere/harness/output.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace decohere::harness {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

void CsvWriter::header(const std::vector<std::string>& names)
{
    for (const auto& n : names) field(n);
    end_row();
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }
CsvWriter& CsvWriter::field(long v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(const std::string& v)
{
    if (!first_) os_ << ',';
    first_ = false;
    if (v.find_first_of(",\"\n") == std::string::npos) {
        os_ << v;
    } else {
        os_ << '"';
        for (char c : v) {
            if (c == '"') os_ << '"';
            os_ << c;
        }
        os_ << '"';
    }
    return *this;
}

void CsvWriter::end_row()
{
    os_ << '\n';
    first_ = true;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    const auto M = static_cast<Eigen::Index>(traj.levels());
    CsvWriter w(os);
    std::vector<std::string> names{"t"};
    for (Eigen::Index n = 0; n < M; ++n)
        for (Eigen::Index m = n; m < M; ++m) {
            const auto tag = std::to_string(n + 1) + std::to_string(m + 1);
            names.push_back("re_rho" + tag);
            names.push_back("im_rho" + tag);
        }
    names.insert(names.end(), {"rho22", "abs_rho12", "leakage"});
    w.header(names);

    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Matrix& r = traj.states[k];
        w.field(traj.times[k]);
        for (Eigen::Index n = 0; n < M; ++n)
            for (Eigen::Index m = n; m < M; ++m) w.field(r(n, m).real()).field(r(n, m).imag());
        const double q = r(0, 0).real() + (M > 1 ? r(1, 1).real() : 0.0);
        w.field(M > 1 ? r(1, 1).real() : 0.0).field(M > 1 ? std::abs(r(0, 1)) : 0.0).field(1.0 - q);
        w.end_row();
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

TrajectoryColumns read_trajectory_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw OutputError("trajectory CSV is empty");
    const auto names = split_csv_line(line);
    auto col = [&](const std::string& n) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return i;
        throw OutputError("trajectory CSV has no `" + n + "` column");
    };
    const std::size_t it = col("t"), i22 = col("rho22"), i12 = col("abs_rho12"), il = col("leakage");

    TrajectoryColumns c;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != names.size())
            throw OutputError("trajectory CSV line " + std::to_string(row) + ": expected " +
                              std::to_string(names.size()) + " fields");
        try {
            c.t.push_back(std::stod(f[it]));
            c.rho22.push_back(std::stod(f[i22]));
            c.abs_rho12.push_back(std::stod(f[i12]));
            c.qubit_population.push_back(1.0 - std::stod(f[il]));
        } catch (const std::exception&) {
            throw OutputError("trajectory CSV line " + std::to_string(row) + ": malformed number");
        }
    }
    return c;
}

nlohmann::json rate_json(const RateEstimate& r)
{
    return {{"rate", r.rate},
            {"fitted_rate", r.fitted_rate},
            {"r_squared", r.r_squared},
            {"negative", r.negative},
            {"low_quality", r.low_quality},
            {"clipped", r.clipped}};
}

nlohmann::json rates_json(const RateSet& rates, const Trajectory* traj)
{
    nlohmann::json j{{"relaxation", rate_json(rates.relaxation)},
                     {"dephasing", rate_json(rates.dephasing)},
                     {"leakage", rate_json(rates.leakage)},
                     {"warnings", rates.warnings()}};
    if (traj) {
        j["integrator"] = {{"max_trace_drift", traj->max_trace_drift},
                           {"max_hermiticity_defect", traj->max_hermiticity_defect},
                           {"samples", traj->times.size()}};
    }
    return j;
}

nlohmann::json fluctuation_json(const FluctuationResult& r)
{
    return {{"N", r.N},
            {"delta_N", r.delta_N},
            {"ratio", r.ratio},
            {"delta_N_squared", r.delta_N_squared},
            {"converged", r.converged},
            {"regularization_failure", r.regularization_failure},
            {"N_ladder", r.N_ladder},
            {"fluctuation_ladder", r.fluctuation_ladder}};
}

void write_spectrum_table(std::ostream& os, const SpectralModel& model, double w_lo, double w_hi,
                          std::size_t points)
{
    if (points < 2 || !(w_hi > w_lo)) throw OutputError("spectrum table needs w_hi > w_lo and >= 2 points");
    CsvWriter w(os);
    w.header({"omega", "I"});
    for (std::size_t k = 0; k < points; ++k) {
        const double x = w_lo + (w_hi - w_lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        w.field(x).field(model(x));
        w.end_row();
    }
}

void write_correlator_table(std::ostream& os, const Correlator& c, double t_max, double dt)
{
    const auto table = correlator_table(c, t_max, dt);
    CsvWriter w(os);
    w.header({"tau", "re_F", "im_F"});
    for (std::size_t k = 0; k < table.size(); ++k) {
        w.field(static_cast<double>(k) * dt).field(table[k].real()).field(table[k].imag());
        w.end_row();
    }
}

void write_file(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot open " + path.string() + " for writing");
    f << contents;
    if (!f) throw OutputError("failed writing " + path.string());
}

} // namespace decohere::harness
