// qclock: arrival-time distributions of a spin clock and the Stern-Gerlach
// probabilities that follow from them.
//
//   qclock table   --preset I --sigma0 1e-5 --sigma0 1e-8 --out results
//   qclock curve   --config run.cfg
//   qclock compare --preset II --sigma0 1e-8
//   qclock validate --config run.cfg

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qclock/errors.hpp"
#include "qclock/run_config.hpp"
#include "qclock/runner.hpp"

namespace {

enum ExitCode : int {
    ok = 0,
    other_failure = 1,
    parse_failure = 2,
    validation_failure = 3,
    convergence_failure = 4,
    io_failure = 5,
    unsupported = 6,
};

struct Options {
    std::string config_path;
    std::string preset;
    std::vector<std::string> sigma0;
    std::vector<std::string> theta_deg;
    std::string scheme;
    std::string out;
    std::string rel_tol;
};

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? "," : "") + parts[i];
    }
    return out;
}

std::vector<qclock::KeyValue> overrides_from(const Options& o) {
    std::vector<qclock::KeyValue> kv;
    if (!o.preset.empty()) kv.emplace_back("preset", o.preset);
    if (!o.sigma0.empty()) {
        kv.emplace_back("sigma0_ladder", join(o.sigma0));
        kv.emplace_back("sigma0", o.sigma0.front());
    }
    if (!o.theta_deg.empty()) kv.emplace_back("thetas_deg", join(o.theta_deg));
    if (!o.scheme.empty()) kv.emplace_back("scheme", o.scheme);
    if (!o.out.empty()) kv.emplace_back("output_dir", o.out);
    if (!o.rel_tol.empty()) kv.emplace_back("rel_tol", o.rel_tol);
    return kv;
}

qclock::RunConfig load(const Options& o) {
    std::string text;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path, std::ios::binary);
        if (!in) {
            throw qclock::IoError("cannot read " + o.config_path);
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }
    return qclock::parse_config(text, overrides_from(o));
}

void report(const qclock::runner::RunReport& r) {
    for (const auto& warning : r.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    for (const auto& file : r.files) {
        std::cout << file.string() << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-clock arrival-time distributions and Stern-Gerlach probabilities"};
    app.require_subcommand(1);

    Options opts;
    auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key=value configuration file");
        sub->add_option("--preset", opts.preset, "parameter set")->check(CLI::IsMember({"I", "II"}));
        sub->add_option("--sigma0", opts.sigma0, "initial packet width in cm (repeatable)");
        sub->add_option("--theta-deg", opts.theta_deg, "analyser angle in degrees (repeatable)");
        sub->add_option("--scheme", opts.scheme, "total | schrodinger | semiclassical");
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--rel-tol", opts.rel_tol, "quadrature relative tolerance");
    };

    auto* table = app.add_subcommand("table", "P+/P- for every sigma0 and theta");
    auto* curve = app.add_subcommand("curve", "density of emergent spin azimuths, one file per sigma0");
    auto* compare = app.add_subcommand("compare", "quantum schemes against the semiclassical baseline");
    auto* validate = app.add_subcommand("validate", "check a configuration and print it back");
    for (auto* sub : {table, curve, compare, validate}) {
        add_common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : parse_failure;
    }

    try {
        const auto cfg = load(opts);
        if (*table) {
            report(qclock::runner::run_table(cfg));
        } else if (*curve) {
            report(qclock::runner::run_curve(cfg));
        } else if (*compare) {
            report(qclock::runner::run_compare(cfg));
        } else {
            std::cout << qclock::serialize(cfg);
        }
        return ok;
    } catch (const qclock::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return parse_failure;
    } catch (const qclock::ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return validation_failure;
    } catch (const qclock::ConvergenceError& e) {
        std::cerr << "quadrature did not converge: " << e.what() << '\n';
        return convergence_failure;
    } catch (const qclock::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_failure;
    } catch (const qclock::UnsupportedOperation& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return unsupported;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return other_failure;
    }
}
