#pragma once

#include <nlohmann/json.hpp>
#include <ostream>

#include "rollsym/rolling_core.hpp"

namespace rollsym {

using json = nlohmann::json;

// {"kind": "sphere", "dim": 2, "radius": 1.0}; warped products take
// "interval": [lo, hi], "warp": {"name": "cos"|"cosh"|"exp"|"affine", ...}
// and "fiber": {...}.
SpaceForm space_form_from_json(const json& j);
json to_json(const SpaceForm& M);

// {"x": [...], "x_hat": [...], "A": [[...], ...]}.
RollingState state_from_json(const RollingModel& model, const json& j);
json to_json(const RollingState& q);

Vec vec_from_json(const json& j);
Mat mat_from_json(const json& j);
json to_json(const Vec& v);
json to_json(const Mat& m);
// Infinite or NaN values become null.
json finite_or_null(double v);

// Columns: t, x_*, x_hat_*, A_ij (row-major), isometry_residual.
void write_trajectory_csv(std::ostream& os, const RollingCurve& curve);

}  // namespace rollsym
