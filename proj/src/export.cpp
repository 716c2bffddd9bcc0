#include "seascape/export.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "seascape/error.hpp"

namespace seascape {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

void write_header(std::ostream& os, const std::string& title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
}

void write_array(std::ostream& os, const std::string& name, std::span<const double> values) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const double v : values) os << format_number(finite_or_zero(v)) << '\n';
    bool any_missing = false;
    for (const double v : values) any_missing = any_missing || !std::isfinite(v);
    if (!any_missing) return;
    os << "SCALARS " << name << "_valid int 1\nLOOKUP_TABLE default\n";
    for (const double v : values) os << (std::isfinite(v) ? 1 : 0) << '\n';
}

void write_coords(std::ostream& os, const char* tag, std::span<const double> c) {
    os << tag << ' ' << c.size() << " double\n";
    for (std::size_t i = 0; i < c.size(); ++i) os << format_number(c[i]) << (i + 1 < c.size() ? ' ' : '\n');
}

void write_polydata(std::ostream& os, const std::vector<std::vector<Position>>& lines,
                    const std::vector<std::pair<std::string, std::vector<double>>>& point_data,
                    const std::string& title) {
    write_header(os, title);
    std::size_t points = 0;
    for (const auto& l : lines) points += l.size();
    os << "DATASET POLYDATA\nPOINTS " << points << " double\n";
    for (const auto& l : lines)
        for (const auto& p : l)
            os << format_number(p.lon) << ' ' << format_number(p.lat) << ' ' << format_number(0.0 - p.depth) << '\n';
    std::size_t drawn = 0, size = 0;
    for (const auto& l : lines) {
        if (l.empty()) continue;
        ++drawn;
        size += l.size() + 1;
    }
    os << "LINES " << drawn << ' ' << size << '\n';
    std::size_t base = 0;
    for (const auto& l : lines) {
        if (l.empty()) continue;
        os << l.size();
        for (std::size_t i = 0; i < l.size(); ++i) os << ' ' << base + i;
        os << '\n';
        base += l.size();
    }
    if (points == 0) return;
    os << "POINT_DATA " << points << '\n';
    for (const auto& [name, values] : point_data) write_array(os, name, values);
}

}  // namespace

void write_vtk_polylines(std::ostream& os, std::span<const FieldLine> lines, const std::string& title) {
    std::vector<std::vector<Position>> geometry;
    std::vector<double> line_id, time, speed;
    // Attached scalars are exported only when every line carries the same set.
    std::vector<std::string> names;
    if (!lines.empty())
        for (const auto& s : lines.front().scalars) names.push_back(s.first);
    for (const auto& l : lines) {
        bool same = l.scalars.size() == names.size();
        for (std::size_t s = 0; same && s < names.size(); ++s) same = l.scalars[s].first == names[s];
        if (!same) names.clear();
    }
    std::vector<std::vector<double>> extra(names.size());
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto& l = lines[n];
        geometry.push_back(l.vertices);
        for (std::size_t v = 0; v < l.size(); ++v) {
            line_id.push_back(static_cast<double>(n));
            time.push_back(v < l.time.size() ? l.time[v] : std::nan(""));
            speed.push_back(v < l.speed.size() ? l.speed[v] : std::nan(""));
            for (std::size_t s = 0; s < names.size(); ++s) extra[s].push_back(l.scalars[s].second[v]);
        }
    }
    std::vector<std::pair<std::string, std::vector<double>>> data{
        {"line_id", std::move(line_id)}, {"time", std::move(time)}, {"speed", std::move(speed)}};
    for (std::size_t s = 0; s < names.size(); ++s) data.emplace_back(names[s], std::move(extra[s]));
    write_polydata(os, geometry, data, title);
}

void write_vtk_rectilinear(std::ostream& os, std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, std::span<const NamedArray> arrays, const std::string& title) {
    const std::size_t n = x.size() * y.size() * z.size();
    for (const auto& a : arrays)
        if (a.values.size() != n) throw DimensionMismatch("array '" + a.name + "' does not match the grid");
    write_header(os, title);
    os << "DATASET RECTILINEAR_GRID\nDIMENSIONS " << x.size() << ' ' << y.size() << ' ' << z.size() << '\n';
    write_coords(os, "X_COORDINATES", x);
    write_coords(os, "Y_COORDINATES", y);
    write_coords(os, "Z_COORDINATES", z);
    os << "POINT_DATA " << n << '\n';
    for (const auto& a : arrays) write_array(os, a.name, a.values);
}

void write_vtk_fields(std::ostream& os, std::span<const ScalarField* const> fields) {
    if (fields.empty()) throw InvalidArgument("no fields to write");
    const auto& g = fields.front()->grid();
    std::vector<double> z(g.nz());
    for (std::size_t k = 0; k < g.nz(); ++k) z[k] = 0.0 - g.depth()[k];
    std::vector<std::vector<double>> storage;
    for (const auto* f : fields) {
        if (!(f->grid() == g)) throw DimensionMismatch("fields live on different grids");
        std::vector<double> v(f->values().begin(), f->values().end());
        for (std::size_t n = 0; n < v.size(); ++n)
            if (!f->is_valid(n)) v[n] = std::nan("");
        storage.push_back(std::move(v));
    }
    std::vector<NamedArray> arrays;
    for (std::size_t s = 0; s < fields.size(); ++s) arrays.push_back({fields[s]->name(), storage[s]});
    write_vtk_rectilinear(os, g.lon().values(), g.lat().values(), z, arrays, "seascape fields");
}

void write_vtk_depth_map(std::ostream& os, const DepthMap& map, const std::string& name) {
    const double z = 0.0;
    const NamedArray a{name, map.depth};
    write_vtk_rectilinear(os, map.lon.values(), map.lat.values(), {&z, 1}, {&a, 1}, "isosurface depth");
}

void write_vtk_vertical_slice(std::ostream& os, const VerticalSlice& slice, const std::string& name) {
    std::vector<double> z(slice.depth.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = 0.0 - slice.depth[k];
    const NamedArray a{name, slice.values};
    write_vtk_rectilinear(os, {&slice.lon, 1}, slice.lat.values(), z, {&a, 1}, "vertical slice");
}

void write_vtk_tracks(std::ostream& os, const TrackGraph& g, std::span<const Track> tracks) {
    std::vector<std::vector<Position>> geometry;
    std::vector<double> id, t, size;
    for (std::size_t n = 0; n < tracks.size(); ++n) {
        std::vector<Position> line;
        for (const auto& f : tracks[n].fronts) {
            const auto& front = g.front(f);
            line.push_back(front.centroid);
            id.push_back(static_cast<double>(n));
            t.push_back(static_cast<double>(f.t));
            size.push_back(static_cast<double>(front.size()));
        }
        geometry.push_back(std::move(line));
    }
    write_polydata(os, geometry, {{"track_id", id}, {"timestep", t}, {"size", size}}, "front tracks");
}

void write_eddy_csv(std::ostream& os, std::span<const EddyProfile> eddies, double time) {
    os << "eddy,time,depth_index,depth,lon,lat,persistence,speed,vorticity,radius_e,radius_w,radius_n,radius_s\n";
    for (std::size_t e = 0; e < eddies.size(); ++e) {
        for (const auto& lvl : eddies[e].levels) {
            const auto& c = lvl.centre;
            os << e << ',' << format_number(time) << ',' << c.k << ',' << format_number(c.position.depth) << ','
               << format_number(c.core.lon) << ',' << format_number(c.core.lat) << ','
               << format_number(c.persistence) << ',' << format_number(c.speed_at_centre) << ','
               << format_number(c.vorticity);
            for (const auto r : lvl.boundary.radii) os << ',' << format_number(r);
            os << '\n';
        }
    }
}

void write_tracks_csv(std::ostream& os, const TrackGraph& g, std::span<const Track> tracks, const Axis& time) {
    os << "track,timestep,time,lon,lat,depth,size\n";
    for (std::size_t n = 0; n < tracks.size(); ++n) {
        for (const auto& f : tracks[n].fronts) {
            const auto& front = g.front(f);
            const double t = f.t < time.size() ? time[f.t] : std::nan("");
            os << n << ',' << f.t << ',' << format_number(t) << ',' << format_number(front.centroid.lon) << ','
               << format_number(front.centroid.lat) << ',' << format_number(front.centroid.depth) << ','
               << front.size() << '\n';
        }
    }
}

void write_profile_csv(std::ostream& os, const DepthProfile& p) {
    os << "depth,time";
    for (const auto r : p.variables) os << ',' << to_string(r);
    os << ",masked\n";
    for (const auto& row : p.rows) {
        os << format_number(row.depth) << ',' << format_number(p.time);
        for (const double v : row.values) os << ',' << (std::isnan(v) ? std::string() : format_number(v));
        os << ',' << (row.masked ? 1 : 0) << '\n';
    }
}

namespace {

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json position_json(const Position& p) { return {{"lon", p.lon}, {"lat", p.lat}, {"depth", p.depth}}; }

}  // namespace

nlohmann::json eddies_to_json(std::span<const EddyProfile> eddies, double time) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : eddies) {
        nlohmann::json levels = nlohmann::json::array();
        for (const auto& lvl : e.levels) {
            const auto& c = lvl.centre;
            nlohmann::json radii;
            for (const auto axis : kRadialAxes) radii[std::string(to_string(axis))] = lvl.boundary.radius(axis);
            nlohmann::json lines = nlohmann::json::array();
            for (const auto& pl : lvl.lines)
                lines.push_back({{"axis", to_string(pl.axis)},
                                 {"seed_radius", pl.seed_radius},
                                 {"shape", to_string(pl.shape)},
                                 {"vertices", pl.line.size()}});
            levels.push_back({{"depth_index", c.k},
                              {"node", {{"i", c.i}, {"j", c.j}}},
                              {"position", position_json(c.position)},
                              {"core", position_json(c.core)},
                              {"persistence", number_or_null(c.persistence)},
                              {"speed_at_centre", c.speed_at_centre},
                              {"vorticity", c.vorticity},
                              {"radii", radii},
                              {"profile_lines", lines}});
        }
        out.push_back({{"time", time},
                       {"centre", position_json(e.centre.core)},
                       {"depth_extent", e.depth_extent()},
                       {"levels", levels},
                       {"diagnostics", e.diagnostics}});
    }
    return {{"format", "seascape-eddies"}, {"version", 1}, {"eddies", out}};
}

nlohmann::json track_graph_to_json(const TrackGraph& g, std::span<const Track> tracks, const Axis& time) {
    auto id_json = [](const FrontId& id) { return nlohmann::json::array({id.t, id.index}); };
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& step : g.fronts)
        for (const auto& f : step)
            nodes.push_back({{"id", id_json(f.id)},
                             {"time", f.id.t < time.size() ? number_or_null(time[f.id.t]) : nlohmann::json(nullptr)},
                             {"centroid", position_json(f.centroid)},
                             {"size", f.size()}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges) edges.push_back({{"from", id_json(e.from)}, {"to", id_json(e.to)}, {"weight", e.weight}});
    nlohmann::json track_list = nlohmann::json::array();
    for (const auto& t : tracks) {
        nlohmann::json ids = nlohmann::json::array();
        for (const auto& f : t.fronts) ids.push_back(id_json(f));
        track_list.push_back({{"length", t.length()}, {"fronts", ids}});
    }
    return {{"format", "seascape-track-graph"}, {"version", 1}, {"first_timestep", g.first_timestep},
            {"nodes", nodes},           {"edges", edges},    {"tracks", track_list}};
}

}  // namespace seascape
