#include "seascape/profile.hpp"

#include <cmath>
#include <limits>

#include "seascape/error.hpp"

namespace seascape {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_horizontal(const RectilinearGrid3D& g, double lon, double lat) {
    if (!g.lon().contains(lon) || !g.lat().contains(lat)) {
        throw OutOfDomain("needle position (" + std::to_string(lon) + ", " + std::to_string(lat) +
                          ") is outside the grid");
    }
}

}  // namespace

std::vector<double> sample_column(const ScalarField& f, double lon, double lat, NeedleMode mode, MaskPolicy policy) {
    const auto& g = f.grid();
    require_horizontal(g, lon, lat);
    std::vector<double> out(g.nz(), kNaN);
    if (mode == NeedleMode::nearest_column) {
        const std::size_t i = g.lon().nearest(lon), j = g.lat().nearest(lat);
        for (std::size_t k = 0; k < g.nz(); ++k) {
            const std::size_t n = g.index(i, j, k);
            if (f.is_valid(n)) out[k] = f[n];
        }
        return out;
    }
    for (std::size_t k = 0; k < g.nz(); ++k) {
        double v = 0.0;
        if (sample_scalar(f, {lon, lat, g.depth()[k]}, policy, v) == SampleStatus::ok) out[k] = v;
    }
    return out;
}

DepthProfile depth_profile(const Dataset& d, double lon, double lat, std::size_t t,
                           const std::vector<VariableRole>& variables, NeedleMode mode, MaskPolicy policy) {
    const auto& g = d.grid();
    require_horizontal(g, lon, lat);
    if (t >= d.timestep_count()) throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range");
    DepthProfile p;
    p.lon = lon;
    p.lat = lat;
    p.t = t;
    p.time = d.time()[t];
    p.variables = variables;
    p.rows.resize(g.nz());
    for (std::size_t k = 0; k < g.nz(); ++k) p.rows[k].depth = g.depth()[k];
    for (const auto role : variables) {
        const auto column = sample_column(load_scalar(d, role, t), lon, lat, mode, policy);
        for (std::size_t k = 0; k < g.nz(); ++k) {
            p.rows[k].values.push_back(column[k]);
            if (std::isnan(column[k])) p.rows[k].masked = true;
        }
    }
    return p;
}

VerticalSlice vertical_slice(const ScalarField& f, double lon, NeedleMode mode) {
    const auto& g = f.grid();
    if (!g.lon().contains(lon)) throw OutOfDomain("slice longitude " + std::to_string(lon) + " is outside the grid");
    VerticalSlice s;
    s.lon = lon;
    s.lat = g.lat();
    s.depth = g.depth();
    s.values.assign(g.ny() * g.nz(), kNaN);
    for (std::size_t j = 0; j < g.ny(); ++j) {
        const auto column = sample_column(f, lon, g.lat()[j], mode, MaskPolicy::reject);
        for (std::size_t k = 0; k < g.nz(); ++k) s.values[j + g.ny() * k] = column[k];
    }
    return s;
}

VerticalSlice vertical_slice(const Dataset& d, double lon, std::size_t t, VariableRole variable, NeedleMode mode) {
    return vertical_slice(load_scalar(d, variable, t), lon, mode);
}

DepthMap isosurface_depth(const ScalarField& f, double iso) {
    const auto& g = f.grid();
    DepthMap m;
    m.lon = g.lon();
    m.lat = g.lat();
    m.depth.assign(g.slice_size(), kNaN);
    m.present.assign(g.slice_size(), 0);
    const auto& z = g.depth();
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const std::size_t col = i + g.nx() * j;
            for (std::size_t k = 0; k < g.nz(); ++k) {
                const std::size_t n = g.index(i, j, k);
                if (!f.is_valid(n)) continue;
                const double a = f[n] - iso;
                if (a == 0.0) {
                    m.depth[col] = z[k];
                    m.present[col] = 1;
                    break;
                }
                if (k + 1 >= g.nz()) break;
                const std::size_t n1 = g.index(i, j, k + 1);
                if (!f.is_valid(n1)) continue;
                const double b = f[n1] - iso;
                if ((a < 0.0) != (b < 0.0) || b == 0.0) {
                    m.depth[col] = z[k] + (z[k + 1] - z[k]) * a / (a - b);
                    m.present[col] = 1;
                    break;
                }
            }
        }
    }
    return m;
}

DepthMap isosurface_depth(const Dataset& d, VariableRole variable, double iso, std::size_t t) {
    return isosurface_depth(load_scalar(d, variable, t), iso);
}

}  // namespace seascape
