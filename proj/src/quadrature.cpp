#include "qclock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "qclock/errors.hpp"

namespace qclock::quadrature {

namespace {

constexpr double absolute_floor = 1e-300;
// Hard cap so a noise-limited integrand fails instead of running forever.
constexpr std::size_t panel_budget = 1u << 18;
constexpr int hint_grading_levels = 30;

struct Panel {
    double a;
    double b;
    int depth;
    double whole;
    double left;
    double right;

    double refined() const { return left + right; }
    double error() const { return std::abs(whole - refined()); }
};

struct ByError {
    const std::vector<Panel>* panels;
    bool operator()(std::size_t lhs, std::size_t rhs) const {
        const double el = (*panels)[lhs].error();
        const double er = (*panels)[rhs].error();
        if (el != er) {
            return el < er;
        }
        return (*panels)[lhs].a > (*panels)[rhs].a;  // leftmost first on ties
    }
};

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) {
            acc += v;
        }
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

class Integrator {
public:
    Integrator(const BatchIntegrand& f, const QuadratureSpec& spec)
        : f_(f), rule_(gauss_legendre(spec.panel_order)) {}

    // Rule applied on each [lo_k, hi_k]; one batch call for all of them.
    void apply(std::span<const double> lo, std::span<const double> hi, std::span<double> out) {
        const std::size_t n = rule_.nodes.size();
        x_.resize(lo.size() * n);
        y_.resize(lo.size() * n);
        for (std::size_t k = 0; k < lo.size(); ++k) {
            const double mid = 0.5 * (lo[k] + hi[k]);
            const double half = 0.5 * (hi[k] - lo[k]);
            for (std::size_t j = 0; j < n; ++j) {
                x_[k * n + j] = mid + half * rule_.nodes[j];
            }
        }
        f_(x_, y_);
        evaluations_ += x_.size();
        for (std::size_t k = 0; k < lo.size(); ++k) {
            const double half = 0.5 * (hi[k] - lo[k]);
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double y = y_[k * n + j];
                if (!std::isfinite(y)) {
                    throw DomainError("integrand is not finite at x = " + std::to_string(x_[k * n + j]));
                }
                acc += rule_.weights[j] * y;
            }
            out[k] = half * acc;
        }
    }

    const GaussLegendreRule& rule() const { return rule_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    const BatchIntegrand& f_;
    GaussLegendreRule rule_;
    std::vector<double> x_;
    std::vector<double> y_;
    std::size_t evaluations_ = 0;
};

} // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
        throw ValidationError("rel_tol must be positive");
    }
    if (max_depth < 1) {
        throw ValidationError("max_depth must be at least 1");
    }
    if (panel_order < 8) {
        throw ValidationError("panel_order must be at least 8");
    }
}

GaussLegendreRule gauss_legendre(int order) {
    const auto n = static_cast<std::size_t>(order);
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

QuadratureResult integrate_batch(const BatchIntegrand& f, double a, double b, const QuadratureSpec& spec,
                                 std::span<const double> hints, bool collect_nodes) {
    spec.validate();
    if (!(a < b)) {
        throw DomainError("integrate: require a < b");
    }

    // Each hint gets cuts at h +- (b - a) 2^-k, so the initial panels shrink
    // geometrically toward it and a spike of any width above the finest step is
    // sampled by some panel.
    std::vector<double> cuts{a};
    const double length = b - a;
    for (double h : hints) {
        if (!(h > a && h < b)) {
            continue;
        }
        cuts.push_back(h);
        for (int k = 1; k <= hint_grading_levels; ++k) {
            const double step = std::ldexp(length, -k);
            for (double c : {h - step, h + step}) {
                if (c > a && c < b) {
                    cuts.push_back(c);
                }
            }
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Integrator integrator(f, spec);
    std::vector<Panel> panels;

    {
        // Each initial panel needs its whole-panel rule and both halves.
        const std::size_t count = cuts.size() - 1;
        std::vector<double> lo(3 * count), hi(3 * count), out(3 * count);
        for (std::size_t k = 0; k < count; ++k) {
            const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            lo[3 * k] = cuts[k];
            hi[3 * k] = cuts[k + 1];
            lo[3 * k + 1] = cuts[k];
            hi[3 * k + 1] = mid;
            lo[3 * k + 2] = mid;
            hi[3 * k + 2] = cuts[k + 1];
        }
        integrator.apply(lo, hi, out);
        for (std::size_t k = 0; k < count; ++k) {
            panels.push_back(Panel{cuts[k], cuts[k + 1], 0, out[3 * k], out[3 * k + 1], out[3 * k + 2]});
        }
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> queue(ByError{&panels});
    for (std::size_t i = 0; i < panels.size(); ++i) {
        queue.push(i);
    }

    auto exact_totals = [&panels]() {
        std::vector<Panel> sorted = panels;
        std::sort(sorted.begin(), sorted.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        std::vector<double> values(sorted.size()), errors(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            values[i] = sorted[i].refined();
            errors[i] = sorted[i].error();
        }
        return std::pair{pairwise_sum(values), pairwise_sum(errors)};
    };

    auto [total, error] = exact_totals();
    // Running sums steer the loop; the pairwise totals confirm convergence.
    double running_total = total;
    double running_error = error;
    std::vector<double> lo(4), hi(4), out(4);

    auto converged = [&spec](double t, double e) { return e <= std::max(spec.rel_tol * std::abs(t), absolute_floor); };

    while (!converged(total, error)) {
        if (panels.size() >= panel_budget) {
            throw ConvergenceError("adaptive quadrature exhausted its panel budget", total, error);
        }
        // Drop panels that may not be split any further.
        while (!queue.empty() && panels[queue.top()].depth >= spec.max_depth) {
            queue.pop();
        }
        if (queue.empty()) {
            throw ConvergenceError("adaptive quadrature reached max_depth without converging", total, error);
        }
        const std::size_t index = queue.top();
        queue.pop();
        const Panel parent = panels[index];
        const double mid = 0.5 * (parent.a + parent.b);
        const double q1 = 0.5 * (parent.a + mid);
        const double q3 = 0.5 * (mid + parent.b);
        lo = {parent.a, q1, mid, q3};
        hi = {q1, mid, q3, parent.b};
        integrator.apply(lo, hi, out);

        panels[index] = Panel{parent.a, mid, parent.depth + 1, parent.left, out[0], out[1]};
        panels.push_back(Panel{mid, parent.b, parent.depth + 1, parent.right, out[2], out[3]});
        queue.push(index);
        queue.push(panels.size() - 1);

        const Panel& l = panels[index];
        const Panel& r = panels.back();
        running_total += l.refined() + r.refined() - parent.refined();
        running_error += l.error() + r.error() - parent.error();
        if (converged(running_total, running_error)) {
            std::tie(total, error) = exact_totals();
            running_total = total;
            running_error = error;
        } else {
            total = running_total;
            error = running_error;
        }
    }
    std::tie(total, error) = exact_totals();

    QuadratureResult result;
    result.value = total;
    result.error = error;
    result.panels = panels.size();
    result.evaluations = integrator.evaluations();
    if (collect_nodes) {
        const auto& rule = integrator.rule();
        result.nodes.reserve(panels.size() * 2 * rule.nodes.size() + panels.size() + 1);
        for (const Panel& p : panels) {
            const double mid = 0.5 * (p.a + p.b);
            for (const auto& [lo_edge, hi_edge] : {std::pair{p.a, mid}, std::pair{mid, p.b}}) {
                const double c = 0.5 * (lo_edge + hi_edge);
                const double h = 0.5 * (hi_edge - lo_edge);
                for (double node : rule.nodes) {
                    result.nodes.push_back(c + h * node);
                }
            }
            result.nodes.push_back(p.a);
        }
        result.nodes.push_back(b);
        std::sort(result.nodes.begin(), result.nodes.end());
    }
    return result;
}

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec, std::span<const double> hints) {
    const BatchIntegrand batch = [&f](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = f(x[i]);
        }
    };
    return integrate_batch(batch, a, b, spec, hints).value;
}

} // namespace qclock::quadrature
