#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace seascape {

inline constexpr double kEarthRadius = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// lon/lat in degrees (or meters on a cartesian grid), depth in meters positive-down.
struct Position {
    double lon = 0.0;
    double lat = 0.0;
    double depth = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

// A 1-D coordinate axis. Values are strictly increasing.
class Axis {
public:
    Axis() = default;
    Axis(std::string name, std::vector<double> values, std::string units = {});

    const std::string& name() const { return name_; }
    const std::string& units() const { return units_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }
    bool contains(double x) const { return x >= front() && x <= back(); }

    // Interval [i, i+1] holding x, plus the fractional offset inside it.
    // Requires contains(x). On a single-node axis returns (0, 0).
    std::pair<std::size_t, double> interval(double x) const;

    // Index of the node closest to x (x clamped to the axis range).
    std::size_t nearest(double x) const;

    friend bool operator==(const Axis&, const Axis&) = default;

private:
    std::string name_;
    std::vector<double> values_;
    std::string units_;
};

// How horizontal coordinates map to meters.
enum class HorizontalFrame {
    geographic,  // lon/lat in degrees on a sphere of radius kEarthRadius
    cartesian,   // lon/lat axes already in meters
};

struct CellIndex {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct CellLocation {
    CellIndex cell;
    double fx = 0.0;
    double fy = 0.0;
    double fz = 0.0;
};

// Meters per unit of horizontal coordinate.
struct HorizontalMetric {
    double dx = 0.0;
    double dy = 0.0;
};

HorizontalMetric metric_at_latitude(HorizontalFrame frame, double lat);

class RectilinearGrid3D {
public:
    // Empty land_mask means "no land".
    RectilinearGrid3D(Axis lon, Axis lat, Axis depth, std::vector<std::uint8_t> land_mask = {},
                      HorizontalFrame frame = HorizontalFrame::geographic);

    const Axis& lon() const { return lon_; }
    const Axis& lat() const { return lat_; }
    const Axis& depth() const { return depth_; }
    HorizontalFrame frame() const { return frame_; }

    std::size_t nx() const { return lon_.size(); }
    std::size_t ny() const { return lat_.size(); }
    std::size_t nz() const { return depth_.size(); }
    std::size_t node_count() const { return nx() * ny() * nz(); }
    std::size_t slice_size() const { return nx() * ny(); }

    // lon varies fastest, then lat, then depth (matches file order).
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + nx() * (j + ny() * k); }
    CellIndex unravel(std::size_t idx) const;

    bool is_land(std::size_t idx) const { return land_[idx] != 0; }
    std::span<const std::uint8_t> land_mask() const { return land_; }

    Position node_position(std::size_t i, std::size_t j, std::size_t k) const {
        return {lon_[i], lat_[j], depth_[k]};
    }
    bool contains(const Position& p) const {
        return lon_.contains(p.lon) && lat_.contains(p.lat) && depth_.contains(p.depth);
    }

    // Same axes and frame; land mask replaced.
    RectilinearGrid3D with_land_mask(std::vector<std::uint8_t> land_mask) const;

    friend bool operator==(const RectilinearGrid3D&, const RectilinearGrid3D&) = default;

private:
    Axis lon_;
    Axis lat_;
    Axis depth_;
    std::vector<std::uint8_t> land_;
    HorizontalFrame frame_;
};

using GridPtr = std::shared_ptr<const RectilinearGrid3D>;

// dx, dy in meters per degree at latitude row j (1, 1 on cartesian grids).
HorizontalMetric horizontal_metric(const RectilinearGrid3D& grid, std::size_t j);

class ScalarField {
public:
    ScalarField() = default;
    // Nodes that are land, non-finite, or flagged invalid become invalid.
    // An empty valid vector means "valid everywhere except land".
    ScalarField(GridPtr grid, std::string name, std::string units, std::vector<double> values,
                std::vector<std::uint8_t> valid = {});

    const RectilinearGrid3D& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::string& name() const { return name_; }
    const std::string& units() const { return units_; }
    std::span<const double> values() const { return values_; }
    std::span<const std::uint8_t> valid() const { return valid_; }
    double operator[](std::size_t idx) const { return values_[idx]; }
    bool is_valid(std::size_t idx) const { return valid_[idx] != 0; }
    double at(std::size_t i, std::size_t j, std::size_t k) const { return values_[grid_->index(i, j, k)]; }
    std::size_t valid_count() const;

private:
    GridPtr grid_;
    std::string name_;
    std::string units_;
    std::vector<double> values_;
    std::vector<std::uint8_t> valid_;
};

class VectorField {
public:
    VectorField() = default;
    // w may be empty (absent). Validity is the conjunction of the component masks.
    VectorField(GridPtr grid, std::vector<double> u, std::vector<double> v, std::vector<double> w = {},
                std::vector<std::uint8_t> valid = {});

    static VectorField from_components(const ScalarField& u, const ScalarField& v, const ScalarField* w = nullptr);

    const RectilinearGrid3D& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const double> u() const { return u_; }
    std::span<const double> v() const { return v_; }
    std::span<const double> w() const { return w_; }
    bool has_w() const { return !w_.empty(); }
    std::span<const std::uint8_t> valid() const { return valid_; }
    bool is_valid(std::size_t idx) const { return valid_[idx] != 0; }

    ScalarField component(char which) const;

private:
    GridPtr grid_;
    std::vector<double> u_, v_, w_;
    std::vector<std::uint8_t> valid_;
};

// What to do when some of the 8 interpolation corners are invalid.
enum class MaskPolicy {
    reject,         // MaskedRegion
    nearest_valid,  // value of the nearest valid corner
};

enum class SampleStatus { ok, out_of_domain, masked };

// Throws OutOfDomain.
CellLocation locate(const RectilinearGrid3D& grid, const Position& p);
bool try_locate(const RectilinearGrid3D& grid, const Position& p, CellLocation& out);

// Throwing variants raise OutOfDomain / MaskedRegion.
double interpolate_scalar(const ScalarField& f, const Position& p, MaskPolicy policy = MaskPolicy::reject);
Vec3 interpolate_vector(const VectorField& vf, const Position& p, bool include_vertical,
                        MaskPolicy policy = MaskPolicy::reject);

// Non-throwing variants used in hot loops.
SampleStatus sample_scalar(const ScalarField& f, const Position& p, MaskPolicy policy, double& out);
SampleStatus sample_vector(const VectorField& vf, const Position& p, bool include_vertical, MaskPolicy policy,
                           Vec3& out);

}  // namespace seascape
