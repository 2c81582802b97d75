#include "qclock/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "qclock/errors.hpp"

namespace qclock::runner {

namespace {

// Runs body(i) for i in [0, n) on up to thread_count() workers. Results land in
// caller-owned slots, so ordering never depends on scheduling. The exception of
// the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(n, thread_count());
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& thread : pool) {
        thread.join();
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
}

std::vector<double> thetas_rad(const RunConfig& cfg) {
    std::vector<double> out;
    out.reserve(cfg.thetas_deg.size());
    for (double deg : cfg.thetas_deg) {
        out.push_back(deg_to_rad(deg));
    }
    return out;
}

std::string fixed5(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.5f", measurement::round_half_away(value, 5));
    // "-0.00000" is not a probability.
    return std::string(buffer) == "-0.00000" ? "0.00000" : buffer;
}

std::string full(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (!committed_) {
            std::error_code ignored;
            for (const auto& path : written_) {
                std::filesystem::remove(path, ignored);
            }
        }
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            throw IoError("cannot create " + dir_.string() + ": " + ec.message());
        }
        const auto path = dir_ / name;
        auto temp = path;
        temp += ".tmp";
        {
            std::ofstream out(temp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw IoError("cannot open " + temp.string());
            }
            fill(out);
            out.flush();
            if (!out) {
                out.close();
                std::filesystem::remove(temp, ec);
                throw IoError("write failed for " + temp.string());
            }
        }
        std::filesystem::rename(temp, path, ec);
        if (ec) {
            std::filesystem::remove(temp, ec);
            throw IoError("cannot rename into " + path.string());
        }
        written_.push_back(path);
    }

    RunReport commit(std::vector<std::string> warnings) {
        committed_ = true;
        return RunReport{written_, std::move(warnings)};
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
};

std::string prefixed(double sigma0, const std::string& warning) {
    return "sigma0=" + short_number(sigma0) + ": " + warning;
}

} // namespace

std::size_t thread_count() {
    if (const char* env = std::getenv("QCLOCK_THREADS")) {
        const std::string_view text(env);
        unsigned long value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc{} && ptr == text.data() + text.size() && value > 0) {
            return value;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string short_number(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ec == std::errc{} ? ptr : buffer);
}

TableResult compute_table(const RunConfig& cfg) {
    cfg.validate();
    TableResult table{cfg.sigma0_ladder, cfg.thetas_deg, {}};
    table.cells.resize(cfg.sigma0_ladder.size());
    const auto thetas = thetas_rad(cfg);
    parallel_for(cfg.sigma0_ladder.size(), [&](std::size_t i) {
        const auto physics = cfg.physics_for(cfg.sigma0_ladder[i]);
        auto& row = table.cells[i];
        if (cfg.scheme == distribution::ArrivalScheme::semiclassical_delta) {
            for (double theta : thetas) {
                row.push_back(measurement::semiclassical_prediction(physics, theta));
            }
            return;
        }
        const auto dist = distribution::pi_of_phi(physics, cfg.scheme, cfg.quad, cfg.curve_points);
        for (double theta : thetas) {
            row.push_back(measurement::measure(dist, theta, cfg.quad));
        }
    });
    return table;
}

std::vector<CurveResult> compute_curves(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.scheme == distribution::ArrivalScheme::semiclassical_delta) {
        throw UnsupportedOperation("the semiclassical scheme has no density curve");
    }
    std::vector<std::optional<CurveResult>> slots(cfg.sigma0_ladder.size());
    parallel_for(slots.size(), [&](std::size_t i) {
        const double sigma0 = cfg.sigma0_ladder[i];
        auto dist = distribution::pi_of_phi(cfg.physics_for(sigma0), cfg.scheme, cfg.quad, cfg.curve_points);
        const double peak = rad_to_deg(distribution::peak_phi(dist));
        const double variance = distribution::variance_phi(dist);
        slots[i].emplace(CurveResult{sigma0, std::move(dist), peak, variance});
    });
    std::vector<CurveResult> out;
    out.reserve(slots.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

std::vector<CompareResult> compute_compare(const RunConfig& cfg) {
    cfg.validate();
    const auto thetas = thetas_rad(cfg);
    std::vector<CompareResult> out(cfg.sigma0_ladder.size());
    parallel_for(out.size(), [&](std::size_t i) {
        const double sigma0 = cfg.sigma0_ladder[i];
        const auto physics = cfg.physics_for(sigma0);
        using distribution::ArrivalScheme;
        out[i] = CompareResult{
            sigma0,
            measurement::deviation_report(physics, ArrivalScheme::modulus_total_current, thetas, cfg.quad),
            measurement::deviation_report(physics, ArrivalScheme::modulus_schrodinger_current, thetas, cfg.quad),
            measurement::deviation_report(physics, ArrivalScheme::semiclassical_delta, thetas, cfg.quad),
        };
    });
    return out;
}

void write_table(std::ostream& out, const TableResult& table) {
    out << "sigma0_cm";
    for (double theta : table.thetas_deg) {
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "%.5f", theta);
        out << ",p_plus_" << buffer << ",p_minus_" << buffer;
    }
    out << '\n';
    for (std::size_t i = 0; i < table.sigma0.size(); ++i) {
        out << short_number(table.sigma0[i]);
        for (const auto& cell : table.cells[i]) {
            out << ',' << fixed5(cell.p_plus) << ',' << fixed5(cell.p_minus);
        }
        out << '\n';
    }
}

void write_curve_summary(std::ostream& out, const CurveResult& curve) {
    out << "sigma0_cm=" << full(curve.sigma0) << '\n';
    if (curve.dist.scheme()) {
        out << "scheme=" << distribution::scheme_name(*curve.dist.scheme()) << '\n';
    }
    out << "peak_phi_deg=" << full(curve.peak_phi_deg) << '\n';
    out << "variance_rad2=" << full(curve.variance) << '\n';
    out << "tail_mass=" << full(curve.dist.tail_mass()) << '\n';
    out << "norm_check=" << full(curve.dist.norm_check()) << '\n';
    for (const auto& warning : curve.dist.warnings()) {
        out << "warning=" << warning << '\n';
    }
}

void write_spin_term(std::ostream& out, const CompareResult& compare) {
    out << "theta_deg,p_plus_total,p_plus_schrodinger,spin_term\n";
    for (std::size_t i = 0; i < compare.total.size(); ++i) {
        const auto& total = compare.total[i];
        const auto& sch = compare.schrodinger[i];
        out << full(rad_to_deg(total.theta)) << ',' << full(total.p_plus) << ',' << full(sch.p_plus) << ','
            << full(total.p_plus - sch.p_plus) << '\n';
    }
}

RunReport run_table(const RunConfig& cfg) {
    const auto table = compute_table(cfg);
    OutputSet files(cfg.output_dir);
    files.write("table_" + std::string(distribution::scheme_name(cfg.scheme)) + ".csv",
                [&](std::ostream& out) { write_table(out, table); });
    return files.commit({});
}

RunReport run_curve(const RunConfig& cfg) {
    const auto curves = compute_curves(cfg);
    const std::string scheme(distribution::scheme_name(cfg.scheme));
    OutputSet files(cfg.output_dir);
    std::vector<std::string> warnings;
    for (const auto& curve : curves) {
        const std::string stem = "curve_" + scheme + "_sigma0_" + short_number(curve.sigma0);
        files.write(stem + ".csv", [&](std::ostream& out) { distribution::write_csv(out, curve.dist); });
        files.write(stem + ".summary", [&](std::ostream& out) { write_curve_summary(out, curve); });
        for (const auto& warning : curve.dist.warnings()) {
            warnings.push_back(prefixed(curve.sigma0, warning));
        }
    }
    return files.commit(std::move(warnings));
}

RunReport run_compare(const RunConfig& cfg) {
    const auto results = compute_compare(cfg);
    OutputSet files(cfg.output_dir);
    for (const auto& result : results) {
        const std::string suffix = "_sigma0_" + short_number(result.sigma0) + ".csv";
        files.write("compare_total" + suffix, [&](std::ostream& out) { measurement::write_csv(out, result.total); });
        files.write("compare_schrodinger" + suffix,
                    [&](std::ostream& out) { measurement::write_csv(out, result.schrodinger); });
        files.write("compare_semiclassical" + suffix,
                    [&](std::ostream& out) { measurement::write_csv(out, result.semiclassical); });
        files.write("compare_spin_term" + suffix, [&](std::ostream& out) { write_spin_term(out, result); });
    }
    return files.commit({});
}

} // namespace qclock::runner
