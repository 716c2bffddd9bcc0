#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "seascape/grid.hpp"

namespace seascape::testing {

inline std::vector<double> linspace(double a, double step, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + step * static_cast<double>(i);
    return v;
}

inline GridPtr make_grid(std::vector<double> lon, std::vector<double> lat, std::vector<double> depth,
                         HorizontalFrame frame = HorizontalFrame::cartesian, std::vector<std::uint8_t> land = {}) {
    return std::make_shared<const RectilinearGrid3D>(Axis("lon", std::move(lon)), Axis("lat", std::move(lat)),
                                                     Axis("depth", std::move(depth)), std::move(land), frame);
}

// nx x ny x nz nodes with spacing d (meters) centred on the origin horizontally.
inline GridPtr centred_grid(std::size_t nx, std::size_t ny, std::size_t nz, double d, double dz = 10.0) {
    const double x0 = -0.5 * d * static_cast<double>(nx - 1);
    const double y0 = -0.5 * d * static_cast<double>(ny - 1);
    return make_grid(linspace(x0, d, nx), linspace(y0, d, ny), linspace(0.0, dz, nz));
}

inline std::vector<double> sample(const RectilinearGrid3D& g, const std::function<double(const Position&)>& f) {
    std::vector<double> out(g.node_count());
    for (std::size_t k = 0; k < g.nz(); ++k)
        for (std::size_t j = 0; j < g.ny(); ++j)
            for (std::size_t i = 0; i < g.nx(); ++i) out[g.index(i, j, k)] = f(g.node_position(i, j, k));
    return out;
}

inline ScalarField scalar_field(const GridPtr& g, const std::function<double(const Position&)>& f,
                                std::string name = "f") {
    return ScalarField(g, std::move(name), "", sample(*g, f));
}

inline VectorField vector_field(const GridPtr& g, const std::function<Vec3(const Position&)>& f, bool with_w = false) {
    std::vector<double> u(g->node_count()), v(g->node_count()), w;
    if (with_w) w.resize(g->node_count());
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        const auto c = g->unravel(n);
        const Vec3 x = f(g->node_position(c.i, c.j, c.k));
        u[n] = x.x;
        v[n] = x.y;
        if (with_w) w[n] = x.z;
    }
    return VectorField(g, std::move(u), std::move(v), std::move(w));
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("seascape-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace seascape::testing
