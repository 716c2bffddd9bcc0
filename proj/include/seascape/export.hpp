#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seascape/eddy.hpp"
#include "seascape/fronts.hpp"
#include "seascape/grid.hpp"
#include "seascape/profile.hpp"
#include "seascape/tracer.hpp"

namespace seascape {

// Legacy ASCII VTK. Points are written as (lon, lat, -depth) so that "up" is +z.
// Missing values are written as 0 with a companion "<name>_valid" array.

void write_vtk_polylines(std::ostream& os, std::span<const FieldLine> lines, const std::string& title = "field lines");

struct NamedArray {
    std::string name;
    std::span<const double> values;  // NaN = missing
};

// RECTILINEAR_GRID with the given coordinates (z already in output orientation).
void write_vtk_rectilinear(std::ostream& os, std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, std::span<const NamedArray> arrays,
                           const std::string& title = "fields");

// Scalar fields over a grid; invalid nodes count as missing.
void write_vtk_fields(std::ostream& os, std::span<const ScalarField* const> fields);

void write_vtk_depth_map(std::ostream& os, const DepthMap& map, const std::string& name);
void write_vtk_vertical_slice(std::ostream& os, const VerticalSlice& slice, const std::string& name);

// One polyline per track through the front centroids.
void write_vtk_tracks(std::ostream& os, const TrackGraph& g, std::span<const Track> tracks);

// CSV tables with a header row.
void write_eddy_csv(std::ostream& os, std::span<const EddyProfile> eddies, double time);
void write_tracks_csv(std::ostream& os, const TrackGraph& g, std::span<const Track> tracks, const Axis& time);
void write_profile_csv(std::ostream& os, const DepthProfile& p);

nlohmann::json eddies_to_json(std::span<const EddyProfile> eddies, double time);
nlohmann::json track_graph_to_json(const TrackGraph& g, std::span<const Track> tracks, const Axis& time);

// Streams number formatting in a locale-independent, round-trippable way.
std::string format_number(double x);

}  // namespace seascape
