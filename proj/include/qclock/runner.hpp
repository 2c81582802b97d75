#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qclock/distribution.hpp"
#include "qclock/measurement.hpp"
#include "qclock/run_config.hpp"

namespace qclock::runner {

/// Worker count for sweeps: QCLOCK_THREADS if set and positive, otherwise the core count.
std::size_t thread_count();

/// Rows are sigma0 rungs, columns are thetas, in config order.
struct TableResult {
    std::vector<double> sigma0;
    std::vector<double> thetas_deg;
    std::vector<std::vector<measurement::MeasurementResult>> cells;  // [rung][theta]
};

struct CurveResult {
    double sigma0;
    distribution::AngularDistribution dist;
    double peak_phi_deg;
    double variance;  // rad^2
};

struct CompareResult {
    double sigma0;
    std::vector<measurement::DeviationRow> total;
    std::vector<measurement::DeviationRow> schrodinger;
    std::vector<measurement::DeviationRow> semiclassical;
};

TableResult compute_table(const RunConfig& cfg);
std::vector<CurveResult> compute_curves(const RunConfig& cfg);
std::vector<CompareResult> compute_compare(const RunConfig& cfg);

/// sigma0_cm then a p_plus/p_minus pair per theta, 5 decimals rounded half away from zero.
void write_table(std::ostream& out, const TableResult& table);
/// key=value summary of one curve.
void write_curve_summary(std::ostream& out, const CurveResult& curve);
/// theta_deg, p_plus_total, p_plus_schrodinger, spin_term (= total - schrodinger).
void write_spin_term(std::ostream& out, const CompareResult& compare);

/// Shortest round-trip spelling of a double, used in file names.
std::string short_number(double value);

struct RunReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Each run computes everything first, then writes its files into cfg.output_dir.
/// Every file goes through a temporary and a rename; if any write fails the files
/// already written by the run are removed and IoError is thrown.
RunReport run_table(const RunConfig& cfg);
RunReport run_curve(const RunConfig& cfg);
RunReport run_compare(const RunConfig& cfg);

} // namespace qclock::runner
