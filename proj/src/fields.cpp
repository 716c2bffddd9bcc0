#include "seascape/fields.hpp"

#include <array>
#include <string>

#include "seascape/error.hpp"
#include "seascape/parallel.hpp"

namespace seascape {

std::string_view to_string(DerivedFieldKind kind) {
    switch (kind) {
        case DerivedFieldKind::speed: return "speed";
        case DerivedFieldKind::speed_horizontal: return "speed_horizontal";
        case DerivedFieldKind::vorticity_z: return "vorticity_z";
        case DerivedFieldKind::curl_magnitude: return "curl_magnitude";
        case DerivedFieldKind::okubo_weiss: return "okubo_weiss";
    }
    return "unknown";
}

DerivedFieldKind parse_derived_field_kind(std::string_view name) {
    for (auto kind : {DerivedFieldKind::speed, DerivedFieldKind::speed_horizontal, DerivedFieldKind::vorticity_z,
                      DerivedFieldKind::curl_magnitude, DerivedFieldKind::okubo_weiss}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw InvalidArgument("unknown derived field kind '" + std::string(name) + "'");
}

namespace {

enum class Direction { x, y, z };

// First derivative of `values` along one axis at node (i,j,k), in units per meter.
// Central difference when both neighbours are valid, one-sided when only one is.
// Returns false when neither neighbour is usable or the metric degenerates.
class Differentiator {
public:
    explicit Differentiator(const VectorField& vf) : grid_(vf.grid()), valid_(vf.valid()) {}

    bool operator()(std::span<const double> values, Direction dir, std::size_t i, std::size_t j, std::size_t k,
                    double& out) const {
        const Axis* axis = nullptr;
        std::size_t pos = 0;
        std::size_t stride = 0;
        double scale = 1.0;
        switch (dir) {
            case Direction::x: {
                axis = &grid_.lon();
                pos = i;
                stride = 1;
                const double dx = horizontal_metric(grid_, j).dx;
                if (dx <= 0.0) return false;
                scale = 1.0 / dx;
                break;
            }
            case Direction::y:
                axis = &grid_.lat();
                pos = j;
                stride = grid_.nx();
                scale = 1.0 / horizontal_metric(grid_, j).dy;
                break;
            case Direction::z:
                axis = &grid_.depth();
                pos = k;
                stride = grid_.slice_size();
                break;
        }
        const std::size_t n = axis->size();
        const std::size_t idx = grid_.index(i, j, k);
        const bool has_lo = pos > 0 && valid_[idx - stride];
        const bool has_hi = pos + 1 < n && valid_[idx + stride];
        double num = 0.0;
        double den = 0.0;
        if (has_lo && has_hi) {
            num = values[idx + stride] - values[idx - stride];
            den = (*axis)[pos + 1] - (*axis)[pos - 1];
        } else if (has_hi) {
            num = values[idx + stride] - values[idx];
            den = (*axis)[pos + 1] - (*axis)[pos];
        } else if (has_lo) {
            num = values[idx] - values[idx - stride];
            den = (*axis)[pos] - (*axis)[pos - 1];
        } else {
            return false;
        }
        out = num / den * scale;
        return true;
    }

private:
    const RectilinearGrid3D& grid_;
    std::span<const std::uint8_t> valid_;
};

void require_horizontal_extent(const RectilinearGrid3D& grid) {
    if (grid.nx() < 2 || grid.ny() < 2) {
        throw DegenerateAxis("horizontal derivatives need at least 2 nodes along lon and lat");
    }
}

// Evaluates fn(i,j,k,idx, out) -> bool on every valid node, slice-parallel.
template <typename Fn>
ScalarField map_nodes(const VectorField& vf, std::string name, std::string units, unsigned jobs, Fn fn) {
    const auto& grid = vf.grid();
    std::vector<double> values(grid.node_count(), 0.0);
    std::vector<std::uint8_t> valid(grid.node_count(), 0);
    parallel_for(grid.nz(), jobs, [&](std::size_t k) {
        for (std::size_t j = 0; j < grid.ny(); ++j) {
            for (std::size_t i = 0; i < grid.nx(); ++i) {
                const std::size_t idx = grid.index(i, j, k);
                if (!vf.is_valid(idx)) continue;
                double out = 0.0;
                if (fn(i, j, k, idx, out)) {
                    values[idx] = out;
                    valid[idx] = 1;
                }
            }
        }
    });
    return ScalarField(vf.grid_ptr(), std::move(name), std::move(units), std::move(values), std::move(valid));
}

}  // namespace

ScalarField speed(const VectorField& vf, bool include_vertical, unsigned jobs) {
    const bool use_w = include_vertical && vf.has_w();
    return map_nodes(vf, use_w ? "speed" : "speed_horizontal", "m/s", jobs,
                     [&](std::size_t, std::size_t, std::size_t, std::size_t idx, double& out) {
                         const double u = vf.u()[idx];
                         const double v = vf.v()[idx];
                         const double w = use_w ? vf.w()[idx] : 0.0;
                         out = std::sqrt(u * u + v * v + w * w);
                         return true;
                     });
}

ScalarField vorticity_z(const VectorField& vf, unsigned jobs) {
    require_horizontal_extent(vf.grid());
    const Differentiator d(vf);
    return map_nodes(vf, "vorticity_z", "1/s", jobs,
                     [&](std::size_t i, std::size_t j, std::size_t k, std::size_t, double& out) {
                         double dv_dx = 0.0;
                         double du_dy = 0.0;
                         if (!d(vf.v(), Direction::x, i, j, k, dv_dx) || !d(vf.u(), Direction::y, i, j, k, du_dy)) {
                             return false;
                         }
                         out = dv_dx - du_dy;
                         return true;
                     });
}

ScalarField curl_magnitude(const VectorField& vf, unsigned jobs) {
    require_horizontal_extent(vf.grid());
    const Differentiator d(vf);
    const bool vertical = vf.has_w() && vf.grid().nz() >= 2;
    return map_nodes(vf, "curl_magnitude", "1/s", jobs,
                     [&](std::size_t i, std::size_t j, std::size_t k, std::size_t, double& out) {
                         double dv_dx = 0.0;
                         double du_dy = 0.0;
                         if (!d(vf.v(), Direction::x, i, j, k, dv_dx) || !d(vf.u(), Direction::y, i, j, k, du_dy)) {
                             return false;
                         }
                         const double omega = dv_dx - du_dy;
                         if (!vertical) {
                             out = std::abs(omega);
                             return true;
                         }
                         double dw_dy = 0.0, dv_dz = 0.0, du_dz = 0.0, dw_dx = 0.0;
                         if (!d(vf.w(), Direction::y, i, j, k, dw_dy) || !d(vf.v(), Direction::z, i, j, k, dv_dz) ||
                             !d(vf.u(), Direction::z, i, j, k, du_dz) || !d(vf.w(), Direction::x, i, j, k, dw_dx)) {
                             return false;
                         }
                         // z is positive-down, so d/dz_up = -d/ddepth.
                         const double cx = dw_dy + dv_dz;
                         const double cy = -du_dz - dw_dx;
                         out = std::sqrt(cx * cx + cy * cy + omega * omega);
                         return true;
                     });
}

ScalarField okubo_weiss(const VectorField& vf, unsigned jobs) {
    require_horizontal_extent(vf.grid());
    const Differentiator d(vf);
    return map_nodes(vf, "okubo_weiss", "1/s^2", jobs,
                     [&](std::size_t i, std::size_t j, std::size_t k, std::size_t, double& out) {
                         double du_dx = 0.0, du_dy = 0.0, dv_dx = 0.0, dv_dy = 0.0;
                         if (!d(vf.u(), Direction::x, i, j, k, du_dx) || !d(vf.u(), Direction::y, i, j, k, du_dy) ||
                             !d(vf.v(), Direction::x, i, j, k, dv_dx) || !d(vf.v(), Direction::y, i, j, k, dv_dy)) {
                             return false;
                         }
                         const double normal = du_dx - dv_dy;
                         const double shear = dv_dx + du_dy;
                         const double omega = dv_dx - du_dy;
                         out = normal * normal + shear * shear - omega * omega;
                         return true;
                     });
}

ScalarField derive(const VectorField& vf, DerivedFieldKind kind, unsigned jobs) {
    switch (kind) {
        case DerivedFieldKind::speed: return speed(vf, true, jobs);
        case DerivedFieldKind::speed_horizontal: return speed(vf, false, jobs);
        case DerivedFieldKind::vorticity_z: return vorticity_z(vf, jobs);
        case DerivedFieldKind::curl_magnitude: return curl_magnitude(vf, jobs);
        case DerivedFieldKind::okubo_weiss: return okubo_weiss(vf, jobs);
    }
    throw InvalidArgument("unknown derived field kind");
}

}  // namespace seascape
