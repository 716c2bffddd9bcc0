#include "seascape/grid.hpp"

#include <algorithm>
#include <array>

#include "seascape/error.hpp"

namespace seascape {

Axis::Axis(std::string name, std::vector<double> values, std::string units)
    : name_(std::move(name)), values_(std::move(values)), units_(std::move(units)) {
    if (values_.empty()) {
        throw DegenerateAxis("axis '" + name_ + "' has no values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw UnsortedAxis("axis '" + name_ + "' has a non-finite value");
        }
        if (i > 0 && !(values_[i] > values_[i - 1])) {
            throw UnsortedAxis("axis '" + name_ + "' is not strictly increasing");
        }
    }
}

std::pair<std::size_t, double> Axis::interval(double x) const {
    const std::size_t n = values_.size();
    if (n == 1) {
        return {0, 0.0};
    }
    // First node strictly greater than x, clamped so the last node maps onto the last interval.
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - values_.begin());
    hi = std::clamp<std::size_t>(hi, 1, n - 1);
    const std::size_t lo = hi - 1;
    const double frac = (x - values_[lo]) / (values_[hi] - values_[lo]);
    return {lo, std::clamp(frac, 0.0, 1.0)};
}

std::size_t Axis::nearest(double x) const {
    if (x <= front()) return 0;
    if (x >= back()) return size() - 1;
    auto [lo, frac] = interval(x);
    return frac <= 0.5 ? lo : lo + 1;
}

HorizontalMetric metric_at_latitude(HorizontalFrame frame, double lat) {
    if (frame == HorizontalFrame::cartesian) {
        return {1.0, 1.0};
    }
    const double dy = kEarthRadius * kPi / 180.0;
    double c = std::cos(lat * kPi / 180.0);
    if (std::abs(lat) == 90.0) {
        c = 0.0;
    }
    return {dy * c, dy};
}

RectilinearGrid3D::RectilinearGrid3D(Axis lon, Axis lat, Axis depth, std::vector<std::uint8_t> land_mask,
                                     HorizontalFrame frame)
    : lon_(std::move(lon)), lat_(std::move(lat)), depth_(std::move(depth)), land_(std::move(land_mask)),
      frame_(frame) {
    if (lon_.size() == 0 || lat_.size() == 0 || depth_.size() == 0) {
        throw DegenerateAxis("grid axes must be non-empty");
    }
    if (land_.empty()) {
        land_.assign(node_count(), 0);
    } else if (land_.size() != node_count()) {
        throw DimensionMismatch("land mask size " + std::to_string(land_.size()) + " does not match grid " +
                                std::to_string(nx()) + "x" + std::to_string(ny()) + "x" + std::to_string(nz()));
    }
}

CellIndex RectilinearGrid3D::unravel(std::size_t idx) const {
    const std::size_t i = idx % nx();
    const std::size_t rest = idx / nx();
    return {i, rest % ny(), rest / ny()};
}

RectilinearGrid3D RectilinearGrid3D::with_land_mask(std::vector<std::uint8_t> land_mask) const {
    return RectilinearGrid3D(lon_, lat_, depth_, std::move(land_mask), frame_);
}

HorizontalMetric horizontal_metric(const RectilinearGrid3D& grid, std::size_t j) {
    return metric_at_latitude(grid.frame(), grid.lat()[j]);
}

ScalarField::ScalarField(GridPtr grid, std::string name, std::string units, std::vector<double> values,
                         std::vector<std::uint8_t> valid)
    : grid_(std::move(grid)), name_(std::move(name)), units_(std::move(units)), values_(std::move(values)),
      valid_(std::move(valid)) {
    if (!grid_) {
        throw InvalidArgument("scalar field '" + name_ + "' has no grid");
    }
    const std::size_t n = grid_->node_count();
    if (values_.size() != n) {
        throw DimensionMismatch("scalar field '" + name_ + "' has " + std::to_string(values_.size()) +
                                " values, grid has " + std::to_string(n) + " nodes");
    }
    if (valid_.empty()) {
        valid_.assign(n, 1);
    } else if (valid_.size() != n) {
        throw DimensionMismatch("scalar field '" + name_ + "' validity mask has wrong size");
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (grid_->is_land(idx) || !std::isfinite(values_[idx])) {
            valid_[idx] = 0;
        }
    }
}

std::size_t ScalarField::valid_count() const {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

VectorField::VectorField(GridPtr grid, std::vector<double> u, std::vector<double> v, std::vector<double> w,
                         std::vector<std::uint8_t> valid)
    : grid_(std::move(grid)), u_(std::move(u)), v_(std::move(v)), w_(std::move(w)), valid_(std::move(valid)) {
    if (!grid_) {
        throw InvalidArgument("vector field has no grid");
    }
    const std::size_t n = grid_->node_count();
    if (u_.size() != n || v_.size() != n || (!w_.empty() && w_.size() != n)) {
        throw DimensionMismatch("vector field components do not match grid size");
    }
    if (valid_.empty()) {
        valid_.assign(n, 1);
    } else if (valid_.size() != n) {
        throw DimensionMismatch("vector field validity mask has wrong size");
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
        const bool finite = std::isfinite(u_[idx]) && std::isfinite(v_[idx]) && (w_.empty() || std::isfinite(w_[idx]));
        if (grid_->is_land(idx) || !finite) {
            valid_[idx] = 0;
        }
    }
}

VectorField VectorField::from_components(const ScalarField& u, const ScalarField& v, const ScalarField* w) {
    if (u.grid_ptr() != v.grid_ptr() && !(u.grid() == v.grid())) {
        throw DimensionMismatch("u and v live on different grids");
    }
    if (w && w->grid_ptr() != u.grid_ptr() && !(w->grid() == u.grid())) {
        throw DimensionMismatch("w lives on a different grid");
    }
    const std::size_t n = u.grid().node_count();
    std::vector<std::uint8_t> valid(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        valid[idx] = u.is_valid(idx) && v.is_valid(idx) && (!w || w->is_valid(idx));
    }
    auto copy = [](const ScalarField& f) { return std::vector<double>(f.values().begin(), f.values().end()); };
    return VectorField(u.grid_ptr(), copy(u), copy(v), w ? copy(*w) : std::vector<double>{}, std::move(valid));
}

ScalarField VectorField::component(char which) const {
    std::span<const double> src;
    switch (which) {
        case 'u': src = u_; break;
        case 'v': src = v_; break;
        case 'w':
            if (w_.empty()) {
                throw MissingVariable("vector field has no vertical component");
            }
            src = w_;
            break;
        default: throw InvalidArgument(std::string("unknown vector component '") + which + "'");
    }
    return ScalarField(grid_, std::string(1, which), "m/s", std::vector<double>(src.begin(), src.end()), valid_);
}

bool try_locate(const RectilinearGrid3D& grid, const Position& p, CellLocation& out) {
    if (!grid.contains(p)) {
        return false;
    }
    auto [i, fx] = grid.lon().interval(p.lon);
    auto [j, fy] = grid.lat().interval(p.lat);
    auto [k, fz] = grid.depth().interval(p.depth);
    out = {{i, j, k}, fx, fy, fz};
    return true;
}

CellLocation locate(const RectilinearGrid3D& grid, const Position& p) {
    CellLocation loc;
    if (!try_locate(grid, p, loc)) {
        throw OutOfDomain("position (" + std::to_string(p.lon) + ", " + std::to_string(p.lat) + ", " +
                          std::to_string(p.depth) + ") is outside the grid");
    }
    return loc;
}

namespace {

struct Corners {
    std::array<std::size_t, 8> idx;
    std::array<double, 8> weight;
};

Corners corners_of(const RectilinearGrid3D& grid, const CellLocation& loc) {
    const std::size_t i1 = std::min(loc.cell.i + 1, grid.nx() - 1);
    const std::size_t j1 = std::min(loc.cell.j + 1, grid.ny() - 1);
    const std::size_t k1 = std::min(loc.cell.k + 1, grid.nz() - 1);
    const std::array<std::size_t, 2> is{loc.cell.i, i1};
    const std::array<std::size_t, 2> js{loc.cell.j, j1};
    const std::array<std::size_t, 2> ks{loc.cell.k, k1};
    const std::array<double, 2> wx{1.0 - loc.fx, loc.fx};
    const std::array<double, 2> wy{1.0 - loc.fy, loc.fy};
    const std::array<double, 2> wz{1.0 - loc.fz, loc.fz};
    Corners c{};
    int n = 0;
    for (int c2 = 0; c2 < 2; ++c2) {
        for (int b = 0; b < 2; ++b) {
            for (int a = 0; a < 2; ++a, ++n) {
                c.idx[n] = grid.index(is[a], js[b], ks[c2]);
                c.weight[n] = wx[a] * wy[b] * wz[c2];
            }
        }
    }
    return c;
}

// Corner with the largest trilinear weight among valid ones, or -1.
int nearest_valid_corner(const Corners& c, std::span<const std::uint8_t> valid) {
    int best = -1;
    for (int n = 0; n < 8; ++n) {
        if (valid[c.idx[n]] && (best < 0 || c.weight[n] > c.weight[best])) {
            best = n;
        }
    }
    return best;
}

// Zero-weight corners never veto: a position exactly on a valid face stays valid.
bool corners_valid(const Corners& c, std::span<const std::uint8_t> valid) {
    for (int n = 0; n < 8; ++n) {
        if (c.weight[n] > 0.0 && !valid[c.idx[n]]) {
            return false;
        }
    }
    return true;
}

}  // namespace

SampleStatus sample_scalar(const ScalarField& f, const Position& p, MaskPolicy policy, double& out) {
    CellLocation loc;
    if (!try_locate(f.grid(), p, loc)) {
        return SampleStatus::out_of_domain;
    }
    const Corners c = corners_of(f.grid(), loc);
    if (!corners_valid(c, f.valid())) {
        if (policy == MaskPolicy::reject) {
            return SampleStatus::masked;
        }
        const int n = nearest_valid_corner(c, f.valid());
        if (n < 0) {
            return SampleStatus::masked;
        }
        out = f[c.idx[n]];
        return SampleStatus::ok;
    }
    double acc = 0.0;
    for (int n = 0; n < 8; ++n) {
        if (c.weight[n] > 0.0) {
            acc += c.weight[n] * f[c.idx[n]];
        }
    }
    out = acc;
    return SampleStatus::ok;
}

SampleStatus sample_vector(const VectorField& vf, const Position& p, bool include_vertical, MaskPolicy policy,
                           Vec3& out) {
    CellLocation loc;
    if (!try_locate(vf.grid(), p, loc)) {
        return SampleStatus::out_of_domain;
    }
    const Corners c = corners_of(vf.grid(), loc);
    const bool use_w = include_vertical && vf.has_w();
    if (!corners_valid(c, vf.valid())) {
        if (policy == MaskPolicy::reject) {
            return SampleStatus::masked;
        }
        const int n = nearest_valid_corner(c, vf.valid());
        if (n < 0) {
            return SampleStatus::masked;
        }
        const std::size_t idx = c.idx[n];
        out = {vf.u()[idx], vf.v()[idx], use_w ? vf.w()[idx] : 0.0};
        return SampleStatus::ok;
    }
    Vec3 acc;
    const auto u = vf.u();
    const auto v = vf.v();
    for (int n = 0; n < 8; ++n) {
        const double wgt = c.weight[n];
        if (wgt > 0.0) {
            acc.x += wgt * u[c.idx[n]];
            acc.y += wgt * v[c.idx[n]];
            if (use_w) {
                acc.z += wgt * vf.w()[c.idx[n]];
            }
        }
    }
    out = acc;
    return SampleStatus::ok;
}

double interpolate_scalar(const ScalarField& f, const Position& p, MaskPolicy policy) {
    double out = 0.0;
    switch (sample_scalar(f, p, policy, out)) {
        case SampleStatus::ok: return out;
        case SampleStatus::out_of_domain: locate(f.grid(), p); break;
        case SampleStatus::masked: break;
    }
    throw MaskedRegion("interpolation of '" + f.name() + "' touches an invalid node");
}

Vec3 interpolate_vector(const VectorField& vf, const Position& p, bool include_vertical, MaskPolicy policy) {
    Vec3 out;
    switch (sample_vector(vf, p, include_vertical, policy, out)) {
        case SampleStatus::ok: return out;
        case SampleStatus::out_of_domain: locate(vf.grid(), p); break;
        case SampleStatus::masked: break;
    }
    throw MaskedRegion("vector interpolation touches an invalid node");
}

}  // namespace seascape
