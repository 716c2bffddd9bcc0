#pragma once

#include <string_view>

#include "seascape/grid.hpp"

namespace seascape {

enum class DerivedFieldKind {
    speed,
    speed_horizontal,
    vorticity_z,
    curl_magnitude,
    okubo_weiss,
};

std::string_view to_string(DerivedFieldKind kind);
// Throws InvalidArgument for unknown names.
DerivedFieldKind parse_derived_field_kind(std::string_view name);

// All functions below return a field on vf's grid. `jobs` caps the number of
// worker threads (0 = hardware concurrency); work is split over depth slices.

ScalarField speed(const VectorField& vf, bool include_vertical, unsigned jobs = 0);

// dv/dx - du/dy in 1/s. Throws DegenerateAxis when a horizontal axis has a single node.
ScalarField vorticity_z(const VectorField& vf, unsigned jobs = 0);

// |curl V|. Equals |vorticity_z| when w is absent.
ScalarField curl_magnitude(const VectorField& vf, unsigned jobs = 0);

// W = s_n^2 + s_s^2 - omega^2 in 1/s^2; negative in vorticity-dominated regions.
ScalarField okubo_weiss(const VectorField& vf, unsigned jobs = 0);

ScalarField derive(const VectorField& vf, DerivedFieldKind kind, unsigned jobs = 0);

}  // namespace seascape
