#include "qclock/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qclock/current.hpp"
#include "qclock/errors.hpp"
#include "qclock/simd/kernels.hpp"
#include "qclock/wavepacket.hpp"

namespace qclock::distribution {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) {
        throw DomainError("output grid needs at least two points");
    }
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = two_pi * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    grid.back() = two_pi;
    return grid;
}

// Raw |J| (or |J_Sch|) as a function of phi, batched through the SIMD kernel.
quadrature::BatchIntegrand current_density(const PhysicsConfig& cfg, ArrivalScheme scheme) {
    const auto params = simd::ExitCurrentParams::from(cfg);
    const double inv_two_omega = 1.0 / (2.0 * cfg.omega());
    const bool total = scheme == ArrivalScheme::modulus_total_current;
    return [params, inv_two_omega, total](std::span<const double> phi, std::span<double> out) {
        std::vector<double> t(phi.size()), jx(phi.size()), jz(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) {
            t[i] = phi[i] * inv_two_omega;
        }
        simd::exit_current(params, t, jx, jz, out);
        if (!total) {
            for (std::size_t i = 0; i < phi.size(); ++i) {
                out[i] = std::abs(jx[i]);
            }
        }
    };
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

} // namespace

std::string_view scheme_name(ArrivalScheme scheme) {
    switch (scheme) {
    case ArrivalScheme::modulus_total_current:
        return "total";
    case ArrivalScheme::modulus_schrodinger_current:
        return "schrodinger";
    case ArrivalScheme::semiclassical_delta:
        return "semiclassical";
    }
    return "unknown";
}

std::optional<ArrivalScheme> parse_scheme(std::string_view text) {
    if (text == "total" || text == "ModulusTotalCurrent") {
        return ArrivalScheme::modulus_total_current;
    }
    if (text == "schrodinger" || text == "ModulusSchrodingerCurrent") {
        return ArrivalScheme::modulus_schrodinger_current;
    }
    if (text == "semiclassical" || text == "SemiclassicalDelta") {
        return ArrivalScheme::semiclassical_delta;
    }
    return std::nullopt;
}

double pi_of_t(const PhysicsConfig& cfg, ArrivalScheme scheme, double t) {
    if (scheme == ArrivalScheme::semiclassical_delta) {
        throw UnsupportedOperation(
            "the semiclassical scheme has no arrival-time density; use measurement::semiclassical_prediction");
    }
    if (!(t >= 0.0 && t <= std::numbers::pi / cfg.omega())) {
        throw DomainError("pi_of_t: t must lie in [0, pi/omega]");
    }
    const auto sample = current::current_at_exit(cfg, t);
    return scheme == ArrivalScheme::modulus_total_current ? sample.modulus : std::abs(sample.jx_sch);
}

AngularDistribution AngularDistribution::from_density(quadrature::BatchIntegrand raw_density, std::vector<double> hints,
                                                      const quadrature::QuadratureSpec& quad,
                                                      std::size_t output_points) {
    AngularDistribution dist;
    dist.raw_ = std::make_shared<const quadrature::BatchIntegrand>(std::move(raw_density));
    dist.hints_ = std::move(hints);
    dist.quad_ = quad;

    const auto total = quadrature::integrate_batch(*dist.raw_, 0.0, two_pi, quad, dist.hints_, true);
    if (!std::isfinite(total.value) || !(total.value > 0.0)) {
        throw DegenerateDistribution("distribution has zero or non-finite total weight");
    }
    dist.normalization_ = total.value;

    const quadrature::BatchIntegrand normalized = [&dist](std::span<const double> x, std::span<double> y) {
        dist.density(x, y);
    };
    dist.norm_check_ = quadrature::integrate_batch(normalized, 0.0, two_pi, quad, dist.hints_).value;
    if (std::abs(dist.norm_check_ - 1.0) > normalization_tolerance) {
        throw InvariantViolation("normalized distribution integrates to " + format_double(dist.norm_check_));
    }

    dist.output_grid_ = uniform_grid(output_points);
    std::vector<double> merged;
    merged.reserve(total.nodes.size() + dist.output_grid_.size());
    std::merge(total.nodes.begin(), total.nodes.end(), dist.output_grid_.begin(), dist.output_grid_.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    dist.grid_ = std::move(merged);
    dist.values_.resize(dist.grid_.size());
    dist.density(dist.grid_, dist.values_);
    for (double v : dist.values_) {
        if (!(v >= 0.0)) {
            throw InvariantViolation("distribution has a negative or non-finite sample");
        }
    }
    return dist;
}

double AngularDistribution::density_at(double phi) const {
    double out = 0.0;
    density(std::span<const double>(&phi, 1), std::span<double>(&out, 1));
    return out;
}

void AngularDistribution::density(std::span<const double> phi, std::span<double> out) const {
    (*raw_)(phi, out);
    const double inv = 1.0 / normalization_;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        out[i] = (phi[i] >= 0.0 && phi[i] <= two_pi) ? out[i] * inv : 0.0;
    }
}

std::vector<double> AngularDistribution::output_values() const {
    std::vector<double> out(output_grid_.size());
    density(output_grid_, out);
    return out;
}

std::vector<double> peak_hints(const PhysicsConfig& cfg, double upper) {
    const double peak = cfg.peak_phi();
    const double sigma_exit = wavepacket::width(cfg, cfg.transit_time()).sigma_t;
    const double spike = 2.0 * cfg.omega() * sigma_exit / cfg.u;
    std::vector<double> hints;
    auto add = [&](double x) {
        if (x > 0.0 && x < upper) {
            hints.push_back(x);
        }
    };
    add(peak);
    for (double k : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
        add(peak - k * spike);
        add(peak + k * spike);
    }
    std::sort(hints.begin(), hints.end());
    return hints;
}

AngularDistribution pi_of_phi(const PhysicsConfig& cfg, ArrivalScheme scheme, const quadrature::QuadratureSpec& quad,
                              std::size_t output_points) {
    cfg.validate();
    if (scheme == ArrivalScheme::semiclassical_delta) {
        throw UnsupportedOperation(
            "the semiclassical scheme is a delta in phi and is never tabulated; use measurement::semiclassical_prediction");
    }
    auto raw = current_density(cfg, scheme);

    // Weight beyond phi = 2 pi, i.e. t > pi/omega. Both the spike and the slowly
    // decaying spread tail are covered by a window reaching well past the peak.
    const double peak = cfg.peak_phi();
    const double spike = 2.0 * cfg.omega() * wavepacket::width(cfg, cfg.transit_time()).sigma_t / cfg.u;
    const double tail_end = std::max(4.0 * two_pi, peak + 128.0 * spike);
    std::vector<double> tail_hints;
    for (double h : peak_hints(cfg, tail_end)) {
        if (h > two_pi) {
            tail_hints.push_back(h);
        }
    }
    const double tail = quadrature::integrate_batch(raw, two_pi, tail_end, quad, tail_hints).value;

    AngularDistribution dist = AngularDistribution::from_density(std::move(raw), peak_hints(cfg), quad, output_points);
    dist.physics_ = cfg;
    dist.scheme_ = scheme;
    dist.tail_mass_ = tail / (dist.normalization_ + tail);
    if (dist.tail_mass_ > tail_warning_threshold) {
        dist.warnings_.push_back("discarded weight beyond phi = 2 pi is " + format_double(dist.tail_mass_));
    }
    return dist;
}

double peak_phi(const AngularDistribution& dist) {
    const auto& grid = dist.grid();
    const auto& values = dist.values();
    const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    const double top = values[best];
    if (!(top > 0.0)) {
        throw DegenerateDistribution("peak_phi: distribution is identically zero");
    }
    const std::size_t lo_index = best == 0 ? 0 : best - 1;
    const std::size_t hi_index = std::min(best + 1, grid.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if ((i < lo_index || i > hi_index) && values[i] >= top * (1.0 - 1e-12)) {
            throw AmbiguousPeak("peak_phi: maximum is not isolated (ties at " + format_double(grid[best]) + " and " +
                                format_double(grid[i]) + ")");
        }
    }

    // Golden-section maximization on the continuous density.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid[lo_index];
    double b = grid[hi_index];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = dist.density_at(c);
    double fd = dist.density_at(d);
    for (int iter = 0; iter < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++iter) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = dist.density_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = dist.density_at(d);
        }
    }
    const double refined = 0.5 * (a + b);
    return dist.density_at(refined) >= top ? refined : grid[best];
}

double variance_phi(const AngularDistribution& dist) {
    const auto& quad = dist.quad();
    const auto& hints = dist.hints();
    const quadrature::BatchIntegrand first = [&dist](std::span<const double> x, std::span<double> y) {
        dist.density(x, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] *= x[i];
        }
    };
    const double mean = quadrature::integrate_batch(first, 0.0, two_pi, quad, hints).value;
    const quadrature::BatchIntegrand second = [&dist, mean](std::span<const double> x, std::span<double> y) {
        dist.density(x, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double dev = x[i] - mean;
            y[i] *= dev * dev;
        }
    };
    return quadrature::integrate_batch(second, 0.0, two_pi, quad, hints).value;
}

void write_csv(std::ostream& out, const AngularDistribution& dist) {
    if (const auto& cfg = dist.physics()) {
        out << "# hbar=" << format_double(cfg->hbar) << '\n'
            << "# m0=" << format_double(cfg->m0) << '\n'
            << "# mu=" << format_double(cfg->mu) << '\n'
            << "# sigma0=" << format_double(cfg->sigma0) << '\n'
            << "# u=" << format_double(cfg->u) << '\n'
            << "# d=" << format_double(cfg->d) << '\n'
            << "# B=" << format_double(cfg->B) << '\n';
    }
    if (const auto& scheme = dist.scheme()) {
        out << "# scheme=" << scheme_name(*scheme) << '\n';
    }
    out << "# norm_check=" << format_double(dist.norm_check()) << '\n';
    out << "phi_rad,density_per_rad\n";
    const auto values = dist.output_values();
    const auto& grid = dist.output_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid[i]) << ',' << format_double(values[i]) << '\n';
    }
}

} // namespace qclock::distribution
