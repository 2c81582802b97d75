#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qclock/distribution.hpp"
#include "qclock/physics_config.hpp"
#include "qclock/quadrature.hpp"

namespace qclock {

/// Everything a table/curve/compare run needs. Angles are in degrees here and
/// nowhere else; conversion to radians happens in the runner.
struct RunConfig {
    PhysicsConfig physics = preset_one();
    distribution::ArrivalScheme scheme = distribution::ArrivalScheme::modulus_total_current;
    std::vector<double> thetas_deg;
    std::vector<double> sigma0_ladder;
    quadrature::QuadratureSpec quad;
    std::string output_dir = ".";
    std::size_t curve_points = distribution::default_output_points;

    /// thetas in [0, 360), non-empty ladder whose entries all pass the width guard.
    void validate() const;

    /// Physics for one rung of the ladder.
    PhysicsConfig physics_for(double sigma0) const;

    bool operator==(const RunConfig&) const = default;
};

using KeyValue = std::pair<std::string, std::string>;

/// Parses a `key = value` document (`#` starts a comment). Omitted keys take the
/// set I defaults; `preset` is applied before any other key regardless of order.
/// `overrides` are applied after the document and may repeat its keys.
///
/// Keys: preset, hbar, m0, mu (number | derived | codata), sigma0, u, d, B, scheme,
/// thetas_deg, sigma0_ladder (comma-separated lists), rel_tol, max_depth,
/// panel_order, output_dir, curve_points.
///
/// Throws ParseError (with line number) or ValidationError.
RunConfig parse_config(std::string_view text, const std::vector<KeyValue>& overrides = {});

/// Inverse of parse_config: every key written explicitly, doubles at 17 digits.
std::string serialize(const RunConfig& cfg);

} // namespace qclock
