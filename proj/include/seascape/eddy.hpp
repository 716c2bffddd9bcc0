#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "seascape/grid.hpp"
#include "seascape/topology.hpp"
#include "seascape/tracer.hpp"

namespace seascape {

// Eddy detection on horizontal depth slices of a velocity field. Every slice
// operation takes the full VectorField plus a depth index k and integrates
// streamlines at that fixed depth with the vertical component ignored.

struct EddyCentre {
    Position position;  // node coordinates of the speed minimum
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    double persistence = 0.0;
    double speed_at_centre = 0.0;
    // Sub-cell estimate of the rotation centre (centroid of the first winding of the
    // check streamline); equals `position` until winding_check succeeds.
    Position core;
    // Vertical vorticity at the node; sign gives the rotation sense (metadata only).
    double vorticity = 0.0;
};

struct WindingParams {
    double seed_offset_cells = 1.0;  // seed distance east of the centre, in cells
    double steps_per_turn = 64.0;    // step = 2*pi*offset / steps_per_turn
    std::size_t max_steps = 1000;
};

struct BoundaryParams {
    double r_max = 250e3;  // meters
    int iterations = 12;
    // A probe is "nearly closed" when, after at least one full winding, the
    // trajectory returns within closure_fraction * seed radius of its seed.
    double closure_fraction = 0.25;
    double steps_per_turn = 64.0;
    // Integration budget, in circle perimeters of the probe radius.
    double max_turn_lengths = 8.0;
};

enum class RadialAxis { east = 0, west = 1, north = 2, south = 3 };
inline constexpr std::array<RadialAxis, 4> kRadialAxes = {RadialAxis::east, RadialAxis::west, RadialAxis::north,
                                                         RadialAxis::south};
std::string_view to_string(RadialAxis axis);

enum class LoopShape { closed, spiral, open };
std::string_view to_string(LoopShape shape);

struct ProbeResult {
    bool nearly_closed = false;
    double winding_angle = 0.0;    // radians, signed, around the core
    double return_distance = 0.0;  // meters, min distance back to the seed after half a winding
    FieldLine line;
};

struct BoundaryProbe {
    RadialAxis axis = RadialAxis::east;
    double radius = 0.0;
    bool closed = false;
};

struct BoundaryResult {
    std::array<double, 4> radii{};  // meters, indexed by RadialAxis
    std::vector<BoundaryProbe> probes;
    std::vector<std::string> diagnostics;  // e.g. non-monotone probe outcomes

    double radius(RadialAxis axis) const { return radii[static_cast<std::size_t>(axis)]; }
};

struct ProfileLine {
    std::size_t k = 0;
    RadialAxis axis = RadialAxis::east;
    double seed_radius = 0.0;
    LoopShape shape = LoopShape::open;
    FieldLine line;
};

struct EddyLevel {
    EddyCentre centre;
    BoundaryResult boundary;
    std::vector<ProfileLine> lines;
};

struct EddyProfile {
    EddyCentre centre;                 // top-most level
    std::array<double, 4> boundary_radii{};  // of the top-most level
    std::vector<EddyLevel> levels;     // consecutive depth slices, shallow to deep
    std::vector<std::string> diagnostics;

    std::size_t depth_extent() const { return levels.size(); }
};

struct EddyParams {
    double persistence_threshold = 0.0;  // m/s
    WindingParams winding;
    BoundaryParams boundary;
    double stacking_radius_cells = 2.0;
    bool compute_boundary = true;
    // Profile streamline seeds as fractions of each boundary radius.
    std::vector<double> profile_fractions{1.0 / 3.0, 2.0 / 3.0, 1.0};
    unsigned jobs = 0;
};

// Horizontal speed of slice k.
std::vector<double> horizontal_speed_slice(const VectorField& vf, std::size_t k, std::vector<std::uint8_t>& valid);

// Persistence-simplified speed minima of slice k (not yet winding-verified),
// sorted by linear index.
std::vector<EddyCentre> detect_centres(const VectorField& vf, std::size_t k, double persistence_threshold);

// True iff the streamline seeded seed_offset_cells east of the centre visits all
// four quadrants of the centre-local frame. On success, updates centre.core.
bool winding_check(const VectorField& vf, EddyCentre& centre, const WindingParams& params = {});

// Integrates from `seed` and evaluates the nearly-closed predicate around `core`.
ProbeResult probe_streamline(const VectorField& vf, std::size_t k, const Position& core, const Position& seed,
                             const BoundaryParams& params);

// Position at `radius` meters from the centre node along `axis`.
Position radial_position(const RectilinearGrid3D& grid, const EddyCentre& centre, RadialAxis axis, double radius);

// Radial binary search per axis for the furthest nearly-closed seed. The search is
// bracketed by the winding seed offset (innermost probe) and params.r_max.
// Throws NoClosedStreamline when the innermost probe fails on any axis.
BoundaryResult eddy_boundary(const VectorField& vf, const EddyCentre& centre, const BoundaryParams& params = {},
                             const WindingParams& winding = {});

// Winding-verified centres (and boundaries) of slice k.
std::vector<EddyLevel> detect_eddies_in_slice(const VectorField& vf, std::size_t k, const EddyParams& params,
                                              std::vector<std::string>* diagnostics = nullptr);

// Runs slice detection on every depth level in parallel and stacks centres of
// adjacent levels closer than stacking_radius_cells into one profile.
std::vector<EddyProfile> detect_eddies_3d(const VectorField& vf, const EddyParams& params = {});

}  // namespace seascape
