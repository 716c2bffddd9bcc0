#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "seascape/grid.hpp"
#include "seascape/ingest.hpp"

namespace seascape {

enum class NeedleMode {
    interpolated,    // horizontal bilinear at each level
    nearest_column,  // values of the closest grid column
};

struct ProfileRow {
    double depth = 0.0;
    std::vector<double> values;  // one per requested variable; NaN when masked
    bool masked = false;         // true if any value is missing
};

struct DepthProfile {
    double lon = 0.0;
    double lat = 0.0;
    std::size_t t = 0;
    double time = 0.0;  // seconds
    std::vector<VariableRole> variables;
    std::vector<ProfileRow> rows;  // one per native depth level, shallow first
};

// Throws OutOfDomain when (lon, lat) is outside the grid.
DepthProfile depth_profile(const Dataset& d, double lon, double lat, std::size_t t,
                           const std::vector<VariableRole>& variables, NeedleMode mode = NeedleMode::interpolated,
                           MaskPolicy policy = MaskPolicy::reject);

// Single-field variant used by the dataset overload.
std::vector<double> sample_column(const ScalarField& f, double lon, double lat, NeedleMode mode, MaskPolicy policy);

struct VerticalSlice {
    double lon = 0.0;
    Axis lat;
    Axis depth;
    std::vector<double> values;  // index j + ny * k; NaN when masked

    double at(std::size_t j, std::size_t k) const { return values[j + lat.size() * k]; }
};

VerticalSlice vertical_slice(const ScalarField& f, double lon, NeedleMode mode = NeedleMode::interpolated);
VerticalSlice vertical_slice(const Dataset& d, double lon, std::size_t t, VariableRole variable,
                             NeedleMode mode = NeedleMode::interpolated);

struct DepthMap {
    Axis lon;
    Axis lat;
    std::vector<double> depth;  // index i + nx * j; NaN where absent
    std::vector<std::uint8_t> present;

    double at(std::size_t i, std::size_t j) const { return depth[i + lon.size() * j]; }
    bool has(std::size_t i, std::size_t j) const { return present[i + lon.size() * j] != 0; }
};

// Shallowest crossing of `iso` per column, linear between adjacent valid levels.
DepthMap isosurface_depth(const ScalarField& f, double iso);
DepthMap isosurface_depth(const Dataset& d, VariableRole variable, double iso, std::size_t t);

}  // namespace seascape
