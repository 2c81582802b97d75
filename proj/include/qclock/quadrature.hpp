#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qclock::quadrature {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    int max_depth = 40;
    int panel_order = 16;  // Gauss-Legendre nodes per panel

    /// Throws ValidationError.
    void validate() const;

    bool operator==(const QuadratureSpec&) const = default;
};

/// Evaluates f at every x[i] into y[i]; x and y have equal length.
using BatchIntegrand = std::function<void(std::span<const double> x, std::span<double> y)>;
using Integrand = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;        // sum over panels of |coarse - refined|
    std::size_t panels = 0;
    std::size_t evaluations = 0;
    std::vector<double> nodes;  // filled only when requested
};

/// Gauss-Legendre rule of the given order on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

/// Adaptive bisection with fixed-order Gauss-Legendre panels. A panel is refined
/// until the single-panel and two-half-panel estimates agree; the global sum of
/// those disagreements must fall below rel_tol * |integral| (floor 1e-300).
///
/// `hints` are interior points that seed the initial partition, graded
/// geometrically toward each hint down to (b - a) 2^-30. Pass the location of any
/// spike narrower than the interval: a rule that never samples a spike will
/// happily converge to zero.
///
/// Throws ConvergenceError carrying the best estimate when every panel is at
/// max_depth or the partition grows past 2^18 panels.
QuadratureResult integrate_batch(const BatchIntegrand& f, double a, double b, const QuadratureSpec& spec,
                                 std::span<const double> hints = {}, bool collect_nodes = false);

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                 std::span<const double> hints = {});

} // namespace qclock::quadrature
