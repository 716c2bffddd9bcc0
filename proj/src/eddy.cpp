#include "seascape/eddy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "seascape/error.hpp"
#include "seascape/parallel.hpp"

namespace seascape {

std::string_view to_string(RadialAxis axis) {
    switch (axis) {
        case RadialAxis::east: return "E";
        case RadialAxis::west: return "W";
        case RadialAxis::north: return "N";
        case RadialAxis::south: return "S";
    }
    return "?";
}

std::string_view to_string(LoopShape shape) {
    switch (shape) {
        case LoopShape::closed: return "closed";
        case LoopShape::spiral: return "spiral";
        case LoopShape::open: return "open";
    }
    return "?";
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Meters east/north of `origin`.
struct LocalFrame {
    Position origin;
    HorizontalMetric metric;

    LocalFrame(HorizontalFrame frame, const Position& o) : origin(o), metric(metric_at_latitude(frame, o.lat)) {}

    std::pair<double, double> xy(const Position& p) const {
        return {(p.lon - origin.lon) * metric.dx, (p.lat - origin.lat) * metric.dy};
    }
};

int quadrant(double x, double y) {
    if (x >= 0.0) return y >= 0.0 ? 0 : 3;
    return y >= 0.0 ? 1 : 2;
}

// Accumulates the signed angle swept around the frame origin.
class WindingCounter {
public:
    explicit WindingCounter(const LocalFrame& frame, const Position& start) : frame_(frame) {
        auto [x, y] = frame_.xy(start);
        last_ = std::atan2(y, x);
    }
    double add(const Position& p) {
        auto [x, y] = frame_.xy(p);
        const double a = std::atan2(y, x);
        double d = a - last_;
        if (d > kPi) d -= kTwoPi;
        if (d < -kPi) d += kTwoPi;
        angle_ += d;
        last_ = a;
        return angle_;
    }
    double angle() const { return angle_; }

private:
    const LocalFrame& frame_;
    double last_ = 0.0;
    double angle_ = 0.0;
};

double segment_distance(std::pair<double, double> a, std::pair<double, double> b, std::pair<double, double> p) {
    const double dx = b.first - a.first;
    const double dy = b.second - a.second;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.first - a.first) * dx + (p.second - a.second) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = a.first + t * dx - p.first;
    const double ey = a.second + t * dy - p.second;
    return std::sqrt(ex * ex + ey * ey);
}

// Smallest horizontal node spacing (meters) around the cell containing p.
double local_cell_size(const RectilinearGrid3D& grid, const Position& p) {
    const auto m = metric_at_latitude(grid.frame(), p.lat);
    auto spacing = [](const Axis& ax, double x) {
        if (ax.size() < 2) return std::numeric_limits<double>::infinity();
        const auto [i, f] = ax.interval(std::clamp(x, ax.front(), ax.back()));
        return ax[i + 1] - ax[i];
    };
    const double sx = spacing(grid.lon(), p.lon) * m.dx;
    const double sy = spacing(grid.lat(), p.lat) * m.dy;
    const double s = std::min(sx > 0.0 ? sx : sy, sy);
    return std::isfinite(s) ? s : 1.0;
}

// Cell width (meters) next to node (i, j) in the direction of `axis`.
double cell_width(const RectilinearGrid3D& grid, std::size_t i, std::size_t j, RadialAxis axis) {
    const auto m = horizontal_metric(grid, j);
    auto width = [](const Axis& ax, std::size_t n, bool forward) {
        if (ax.size() < 2) return 0.0;
        if (forward) return n + 1 < ax.size() ? ax[n + 1] - ax[n] : ax[n] - ax[n - 1];
        return n > 0 ? ax[n] - ax[n - 1] : ax[n + 1] - ax[n];
    };
    switch (axis) {
        case RadialAxis::east: return width(grid.lon(), i, true) * m.dx;
        case RadialAxis::west: return width(grid.lon(), i, false) * m.dx;
        case RadialAxis::north: return width(grid.lat(), j, true) * m.dy;
        case RadialAxis::south: return width(grid.lat(), j, false) * m.dy;
    }
    return 0.0;
}

double node_vorticity(const VectorField& vf, std::size_t i, std::size_t j, std::size_t k) {
    const auto& g = vf.grid();
    const auto m = horizontal_metric(g, j);
    auto diff = [&](std::span<const double> f, bool along_x) -> double {
        const Axis& ax = along_x ? g.lon() : g.lat();
        const std::size_t n = along_x ? i : j;
        const std::size_t stride = along_x ? 1 : g.nx();
        const std::size_t idx = g.index(i, j, k);
        const bool lo = n > 0 && vf.is_valid(idx - stride);
        const bool hi = n + 1 < ax.size() && vf.is_valid(idx + stride);
        double num = 0.0, den = 0.0;
        if (lo && hi) {
            num = f[idx + stride] - f[idx - stride];
            den = ax[n + 1] - ax[n - 1];
        } else if (hi) {
            num = f[idx + stride] - f[idx];
            den = ax[n + 1] - ax[n];
        } else if (lo) {
            num = f[idx] - f[idx - stride];
            den = ax[n] - ax[n - 1];
        } else {
            return 0.0;
        }
        const double scale = along_x ? m.dx : m.dy;
        return scale > 0.0 ? num / den / scale : 0.0;
    };
    return diff(vf.v(), true) - diff(vf.u(), false);
}

IntegrationParams slice_params(double step, std::size_t max_steps) {
    IntegrationParams p;
    p.step_length = step;
    p.max_steps = std::max<std::size_t>(1, max_steps);
    p.include_vertical = false;
    p.min_speed = 1e-9;
    return p;
}

}  // namespace

std::vector<double> horizontal_speed_slice(const VectorField& vf, std::size_t k, std::vector<std::uint8_t>& valid) {
    const auto& g = vf.grid();
    if (k >= g.nz()) throw InvalidArgument("depth index " + std::to_string(k) + " out of range");
    const std::size_t n = g.slice_size();
    std::vector<double> speed(n, 0.0);
    valid.assign(n, 0);
    const std::size_t base = k * n;
    for (std::size_t e = 0; e < n; ++e) {
        if (!vf.is_valid(base + e)) continue;
        speed[e] = std::hypot(vf.u()[base + e], vf.v()[base + e]);
        valid[e] = 1;
    }
    return speed;
}

std::vector<EddyCentre> detect_centres(const VectorField& vf, std::size_t k, double persistence_threshold) {
    std::vector<std::uint8_t> valid;
    const auto speed = horizontal_speed_slice(vf, k, valid);
    const auto& g = vf.grid();
    std::vector<EddyCentre> out;
    if (std::find(valid.begin(), valid.end(), std::uint8_t{1}) == valid.end()) return out;
    const Slice2D slice{g.nx(), g.ny(), speed, valid};
    const auto minima = simplify_minima(persistence_of_minima(slice), persistence_threshold);
    for (const auto& m : minima) {
        EddyCentre c;
        c.i = m.i;
        c.j = m.j;
        c.k = k;
        c.position = g.node_position(m.i, m.j, k);
        c.core = c.position;
        c.persistence = m.persistence;
        c.speed_at_centre = m.value;
        out.push_back(c);
    }
    return out;
}

bool winding_check(const VectorField& vf, EddyCentre& centre, const WindingParams& params) {
    const auto& g = vf.grid();
    if (centre.i + 1 >= g.nx()) return false;
    const Position node = g.node_position(centre.i, centre.j, centre.k);
    const double cell = cell_width(g, centre.i, centre.j, RadialAxis::east);
    const double offset = params.seed_offset_cells * cell;
    const Position seed = radial_position(g, centre, RadialAxis::east, offset);
    const LocalFrame frame(g.frame(), node);
    WindingCounter winding(frame, seed);
    std::array<bool, 4> visited{};
    {
        auto [x, y] = frame.xy(seed);
        visited[quadrant(x, y)] = true;
    }
    // Arc-length weighted centroid of the first full winding.
    double cx = 0.0, cy = 0.0, total = 0.0;
    bool full_turn = false;
    Position prev = seed;
    auto stop = [&](const Position& p) {
        auto [x, y] = frame.xy(p);
        visited[quadrant(x, y)] = true;
        winding.add(p);
        if (!full_turn) {
            auto [px, py] = frame.xy(prev);
            const double len = std::hypot(x - px, y - py);
            cx += 0.5 * (x + px) * len;
            cy += 0.5 * (y + py) * len;
            total += len;
            full_turn = std::abs(winding.angle()) >= kTwoPi;
        }
        prev = p;
        const bool all = visited[0] && visited[1] && visited[2] && visited[3];
        return all && full_turn;
    };
    const auto p = slice_params(kTwoPi * offset / params.steps_per_turn, params.max_steps);
    integrate_streamline_until(vf, {seed, 0.0}, p, stop);
    const bool all = visited[0] && visited[1] && visited[2] && visited[3];
    if (all && full_turn && total > 0.0) {
        centre.core = {node.lon + (cx / total) / frame.metric.dx, node.lat + (cy / total) / frame.metric.dy,
                       node.depth};
        if (!g.contains(centre.core)) centre.core = node;
    }
    return all;
}

ProbeResult probe_streamline(const VectorField& vf, std::size_t k, const Position& core, const Position& seed,
                             const BoundaryParams& params) {
    (void)k;
    const auto& g = vf.grid();
    const LocalFrame frame(g.frame(), core);
    const auto seed_xy = frame.xy(seed);
    const double r = std::hypot(seed_xy.first, seed_xy.second);
    ProbeResult out;
    if (!(r > 0.0)) return out;
    const double step = std::min(kTwoPi * r / params.steps_per_turn, local_cell_size(g, core));
    const auto max_steps = static_cast<std::size_t>(std::ceil(params.max_turn_lengths * kTwoPi * r / step));

    WindingCounter winding(frame, seed);
    double best = std::numeric_limits<double>::infinity();
    auto prev = seed_xy;
    auto stop = [&](const Position& p) {
        const double angle = std::abs(winding.add(p));
        const auto xy = frame.xy(p);
        if (angle >= kPi) best = std::min(best, segment_distance(prev, xy, seed_xy));
        prev = xy;
        return angle >= kTwoPi + 0.5 * kPi;
    };
    out.line = integrate_streamline_until(vf, {seed, 0.0}, slice_params(step, max_steps), stop);
    out.winding_angle = winding.angle();
    out.return_distance = best;
    out.nearly_closed = std::abs(out.winding_angle) >= kTwoPi && best < params.closure_fraction * r;
    return out;
}

Position radial_position(const RectilinearGrid3D& grid, const EddyCentre& centre, RadialAxis axis, double radius) {
    const Position node = grid.node_position(centre.i, centre.j, centre.k);
    const auto m = metric_at_latitude(grid.frame(), node.lat);
    Position p = node;
    switch (axis) {
        case RadialAxis::east: p.lon += m.dx > 0.0 ? radius / m.dx : 0.0; break;
        case RadialAxis::west: p.lon -= m.dx > 0.0 ? radius / m.dx : 0.0; break;
        case RadialAxis::north: p.lat += radius / m.dy; break;
        case RadialAxis::south: p.lat -= radius / m.dy; break;
    }
    return p;
}

BoundaryResult eddy_boundary(const VectorField& vf, const EddyCentre& centre, const BoundaryParams& params,
                             const WindingParams& winding) {
    if (!(params.r_max > 0.0) || params.iterations < 0) throw InvalidArgument("invalid boundary search parameters");
    const auto& g = vf.grid();
    BoundaryResult result;
    auto closed = [&](RadialAxis axis, double r) {
        const Position seed = radial_position(g, centre, axis, r);
        const bool c = probe_streamline(vf, centre.k, centre.core, seed, params).nearly_closed;
        result.probes.push_back({axis, r, c});
        return c;
    };
    for (const auto axis : kRadialAxes) {
        const double innermost = std::max(params.r_max / std::ldexp(1.0, params.iterations),
                                          winding.seed_offset_cells * cell_width(g, centre.i, centre.j, axis));
        double lo = params.r_max;
        if (!closed(axis, params.r_max)) {
            if (innermost >= params.r_max || !closed(axis, innermost)) {
                std::ostringstream msg;
                msg << "no nearly-closed streamline on axis " << to_string(axis) << " at " << innermost
                    << " m from centre (" << centre.i << ", " << centre.j << ", " << centre.k << ")";
                throw NoClosedStreamline(msg.str());
            }
            lo = innermost;
            double hi = params.r_max;
            for (int it = 0; it < params.iterations; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (closed(axis, mid)) lo = mid;
                else hi = mid;
            }
        }
        result.radii[static_cast<std::size_t>(axis)] = lo;
        // The bisection assumes closed probes form an inner disc; spot-check inside it.
        for (const double f : {0.25, 0.5, 0.75}) {
            const double r = f * lo;
            if (r <= innermost) continue;
            if (!closed(axis, r)) {
                std::ostringstream msg;
                msg << "non-monotone boundary predicate on axis " << to_string(axis) << ": open at " << r
                    << " m inside closed radius " << lo << " m (centre " << centre.i << ", " << centre.j << ", "
                    << centre.k << ")";
                result.diagnostics.push_back(msg.str());
            }
        }
    }
    return result;
}

std::vector<EddyLevel> detect_eddies_in_slice(const VectorField& vf, std::size_t k, const EddyParams& params,
                                              std::vector<std::string>* diagnostics) {
    std::vector<EddyLevel> out;
    for (auto& c : detect_centres(vf, k, params.persistence_threshold)) {
        if (!winding_check(vf, c, params.winding)) continue;
        c.vorticity = node_vorticity(vf, c.i, c.j, c.k);
        EddyLevel level;
        level.centre = c;
        if (params.compute_boundary) {
            try {
                level.boundary = eddy_boundary(vf, c, params.boundary, params.winding);
            } catch (const NoClosedStreamline& e) {
                if (diagnostics) diagnostics->push_back(e.what());
                continue;
            }
            if (diagnostics) {
                diagnostics->insert(diagnostics->end(), level.boundary.diagnostics.begin(),
                                    level.boundary.diagnostics.end());
            }
            for (const auto axis : kRadialAxes) {
                const double radius = level.boundary.radius(axis);
                for (const double f : params.profile_fractions) {
                    const double r = f * radius;
                    if (!(r > 0.0)) continue;
                    auto probe = probe_streamline(vf, k, c.core, radial_position(vf.grid(), c, axis, r),
                                                  params.boundary);
                    ProfileLine pl;
                    pl.k = k;
                    pl.axis = axis;
                    pl.seed_radius = r;
                    if (!probe.nearly_closed) pl.shape = LoopShape::open;
                    else if (probe.return_distance <= 0.05 * r) pl.shape = LoopShape::closed;
                    else pl.shape = LoopShape::spiral;
                    pl.line = std::move(probe.line);
                    level.lines.push_back(std::move(pl));
                }
            }
        }
        out.push_back(std::move(level));
    }
    return out;
}

std::vector<EddyProfile> detect_eddies_3d(const VectorField& vf, const EddyParams& params) {
    const auto& g = vf.grid();
    std::vector<std::vector<EddyLevel>> per_slice(g.nz());
    std::vector<std::vector<std::string>> per_slice_diag(g.nz());
    parallel_for(g.nz(), params.jobs, [&](std::size_t k) {
        per_slice[k] = detect_eddies_in_slice(vf, k, params, &per_slice_diag[k]);
    });

    std::vector<EddyProfile> profiles;
    std::vector<std::size_t> open;  // profiles whose last level is k - 1
    for (std::size_t k = 0; k < g.nz(); ++k) {
        auto& levels = per_slice[k];
        // Candidate links sorted by distance; greedy one-to-one assignment.
        struct Link {
            double distance;
            std::size_t profile;
            std::size_t level;
        };
        std::vector<Link> links;
        for (const std::size_t p : open) {
            const auto& last = profiles[p].levels.back().centre;
            for (std::size_t l = 0; l < levels.size(); ++l) {
                const double di = static_cast<double>(levels[l].centre.i) - static_cast<double>(last.i);
                const double dj = static_cast<double>(levels[l].centre.j) - static_cast<double>(last.j);
                const double d = std::hypot(di, dj);
                if (d < params.stacking_radius_cells) links.push_back({d, p, l});
            }
        }
        std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
            return std::tie(a.distance, a.profile, a.level) < std::tie(b.distance, b.profile, b.level);
        });
        std::vector<bool> level_used(levels.size(), false);
        std::vector<std::size_t> next_open;
        for (const auto& link : links) {
            if (level_used[link.level]) continue;
            if (std::find(next_open.begin(), next_open.end(), link.profile) != next_open.end()) continue;
            profiles[link.profile].levels.push_back(std::move(levels[link.level]));
            level_used[link.level] = true;
            next_open.push_back(link.profile);
        }
        for (std::size_t l = 0; l < levels.size(); ++l) {
            if (level_used[l]) continue;
            EddyProfile p;
            p.levels.push_back(std::move(levels[l]));
            profiles.push_back(std::move(p));
            next_open.push_back(profiles.size() - 1);
        }
        std::sort(next_open.begin(), next_open.end());
        open = std::move(next_open);
    }
    for (auto& p : profiles) {
        p.centre = p.levels.front().centre;
        p.boundary_radii = p.levels.front().boundary.radii;
        for (const auto& lvl : p.levels) {
            auto& d = per_slice_diag[lvl.centre.k];
            (void)d;
        }
    }
    // Slice diagnostics are reported on the profile whose top level lives in that slice,
    // or on the first profile when no eddy survived.
    for (std::size_t k = 0; k < g.nz(); ++k) {
        if (per_slice_diag[k].empty()) continue;
        auto it = std::find_if(profiles.begin(), profiles.end(),
                               [&](const EddyProfile& p) { return p.levels.front().centre.k == k; });
        if (it != profiles.end()) {
            it->diagnostics.insert(it->diagnostics.end(), per_slice_diag[k].begin(), per_slice_diag[k].end());
        }
    }
    return profiles;
}

}  // namespace seascape
