// output.hpp: CSV and JSON writers. CSV: comma separated, header row,
// 17 significant digits, LF line endings.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "decohere/evolve.hpp"
#include "decohere/rates.hpp"
#include "decohere/rpa.hpp"
#include "decohere/spectra.hpp"

namespace decohere::harness {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest text for a double that still carries 17 significant digits.
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names);
    CsvWriter& field(double v);
    CsvWriter& field(const std::string& v);
    CsvWriter& field(long v);
    void end_row();

private:
    std::ostream& os_;
    bool first_ = true;
};

// t, Re/Im of every ρ_nm with n <= m, then rho22, abs_rho12, leakage.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// Reads back the columns needed for fitting: t, rho22, abs_rho12, rho11 + rho22.
struct TrajectoryColumns {
    std::vector<double> t, rho22, abs_rho12, qubit_population;
};
TrajectoryColumns read_trajectory_csv(std::istream& is);

nlohmann::json rate_json(const RateEstimate& r);
nlohmann::json rates_json(const RateSet& rates, const Trajectory* traj = nullptr);
nlohmann::json fluctuation_json(const FluctuationResult& r);

void write_spectrum_table(std::ostream& os, const SpectralModel& model, double w_lo, double w_hi,
                          std::size_t points);
void write_correlator_table(std::ostream& os, const Correlator& c, double t_max, double dt);

// Writes `contents` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& contents);

} // namespace decohere::harness
