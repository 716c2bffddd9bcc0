#include <doctest.h>

#include <random>

#include "seascape/error.hpp"
#include "seascape/grid.hpp"
#include "support.hpp"

using namespace seascape;
using namespace seascape::testing;

namespace {

// Brute-force interval lookup.
std::size_t scan_interval(const Axis& a, double x) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        if (x >= a[i] && x <= a[i + 1] && (x < a[i + 1] || i + 2 == a.size())) return i;
    return a.size();
}

GridPtr irregular_grid() {
    return make_grid({0.0, 0.5, 1.7, 2.0, 4.5}, {-3.0, -1.0, 0.0, 2.5}, {0.0, 4.0, 10.0, 30.0, 100.0, 300.0});
}

}  // namespace

TEST_CASE("axis validation") {
    CHECK_THROWS_AS(Axis("x", {}), DegenerateAxis);
    CHECK_THROWS_AS(Axis("x", {0.0, 0.0}), UnsortedAxis);
    CHECK_THROWS_AS(Axis("x", {1.0, 0.0}), UnsortedAxis);
    CHECK_THROWS_AS(Axis("x", {0.0, std::nan("")}), UnsortedAxis);
    CHECK_NOTHROW(Axis("x", {5.0}));
}

TEST_CASE("axis interval and nearest") {
    const Axis a("x", {0.0, 1.0, 3.0, 7.0});
    CHECK(a.interval(0.0) == std::pair<std::size_t, double>{0, 0.0});
    CHECK(a.interval(2.0) == std::pair<std::size_t, double>{1, 0.5});
    CHECK(a.interval(7.0) == std::pair<std::size_t, double>{2, 1.0});
    CHECK(a.nearest(-5.0) == 0);
    CHECK(a.nearest(2.1) == 2);
    CHECK(a.nearest(100.0) == 3);
}

TEST_CASE("locate at nodes and midpoints") {
    auto g = make_grid({0.0, 2.0}, {0.0, 4.0}, {0.0, 8.0});
    const auto mid = locate(*g, {1.0, 2.0, 4.0});
    CHECK(mid.cell == CellIndex{0, 0, 0});
    CHECK(mid.fx == doctest::Approx(0.5));
    CHECK(mid.fy == doctest::Approx(0.5));
    CHECK(mid.fz == doctest::Approx(0.5));

    auto ig = irregular_grid();
    for (std::size_t k = 0; k < ig->nz(); ++k)
        for (std::size_t j = 0; j < ig->ny(); ++j)
            for (std::size_t i = 0; i < ig->nx(); ++i) {
                const auto loc = locate(*ig, ig->node_position(i, j, k));
                const auto node = [](std::size_t c, double f) { return f == 1.0 ? c + 1 : c; };
                CHECK(node(loc.cell.i, loc.fx) == i);
                CHECK(node(loc.cell.j, loc.fy) == j);
                CHECK(node(loc.cell.k, loc.fz) == k);
                CHECK((loc.fx == 0.0 || loc.fx == 1.0));
            }
}

TEST_CASE("locate matches a linear scan") {
    auto g = irregular_grid();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 4.5), uy(-3.0, 2.5), uz(0.0, 300.0);
    for (int n = 0; n < 2000; ++n) {
        const Position p{ux(rng), uy(rng), uz(rng)};
        const auto loc = locate(*g, p);
        CHECK(loc.cell.i == scan_interval(g->lon(), p.lon));
        CHECK(loc.cell.j == scan_interval(g->lat(), p.lat));
        CHECK(loc.cell.k == scan_interval(g->depth(), p.depth));
        CHECK(loc.fx >= 0.0);
        CHECK(loc.fx <= 1.0);
    }
}

TEST_CASE("locate outside the domain") {
    auto g = irregular_grid();
    CHECK_THROWS_AS(locate(*g, {-0.1, 0.0, 0.0}), OutOfDomain);
    CHECK_THROWS_AS(locate(*g, {0.0, 0.0, 301.0}), OutOfDomain);
    CellLocation out;
    CHECK_FALSE(try_locate(*g, {0.0, 3.0, 0.0}, out));
}

TEST_CASE("trilinear interpolation is exact on multilinear fields") {
    auto g = irregular_grid();
    auto fn = [](const Position& p) {
        return 1.5 + p.lon + 2.0 * p.lat + 3.0 * p.depth + 0.25 * p.lon * p.lat - 0.01 * p.lat * p.depth +
               0.002 * p.lon * p.lat * p.depth;
    };
    const auto f = scalar_field(g, fn);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0.0, 4.5), uy(-3.0, 2.5), uz(0.0, 300.0);
    for (int n = 0; n < 1000; ++n) {
        const Position p{ux(rng), uy(rng), uz(rng)};
        const double expect = fn(p);
        CHECK(interpolate_scalar(f, p) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("interpolation is continuous across cell faces") {
    auto g = irregular_grid();
    std::mt19937_64 rng(3);
    std::vector<double> values(g->node_count());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : values) v = u(rng);
    const ScalarField f(g, "noise", "", values);
    // Points on the face lon = 1.7, approached from both sides.
    for (int n = 0; n < 100; ++n) {
        const double y = -3.0 + 5.5 * (n + 0.5) / 100.0;
        const double z = 3.0 * n;
        const double on = interpolate_scalar(f, {1.7, y, z});
        const double left = interpolate_scalar(f, {std::nextafter(1.7, 0.0), y, z});
        const double right = interpolate_scalar(f, {std::nextafter(1.7, 5.0), y, z});
        CHECK(left == doctest::Approx(on).epsilon(1e-12));
        CHECK(right == doctest::Approx(on).epsilon(1e-12));
    }
}

TEST_CASE("node values are reproduced exactly") {
    auto g = irregular_grid();
    const auto f = scalar_field(g, [](const Position& p) { return std::sin(p.lon) * std::cos(p.lat) + p.depth; });
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        const auto c = g->unravel(n);
        CHECK(interpolate_scalar(f, g->node_position(c.i, c.j, c.k)) == f[n]);
    }
}

TEST_CASE("masked corners") {
    auto base = make_grid({0.0, 1.0, 2.0}, {0.0, 1.0}, {0.0, 1.0});
    std::vector<std::uint8_t> land(base->node_count(), 0);
    land[base->index(2, 1, 1)] = 1;
    auto g = std::make_shared<const RectilinearGrid3D>(base->with_land_mask(land));
    const auto f = scalar_field(g, [](const Position& p) { return 10.0 * p.lon + p.lat + 100.0 * p.depth; });
    CHECK_FALSE(f.is_valid(g->index(2, 1, 1)));
    CHECK(f.valid_count() == g->node_count() - 1);

    // Cell 1 touches the land node.
    CHECK_THROWS_AS(interpolate_scalar(f, {1.5, 0.5, 0.5}), MaskedRegion);
    // Nearest valid: corner with the largest weight among the valid ones.
    CHECK(interpolate_scalar(f, {1.9, 0.9, 0.2}, MaskPolicy::nearest_valid) == f.at(2, 1, 0));
    CHECK(interpolate_scalar(f, {1.1, 0.9, 0.9}, MaskPolicy::nearest_valid) == f.at(1, 1, 1));
    // Cell 0 is unaffected; a node next to land keeps its own value.
    CHECK(interpolate_scalar(f, {0.5, 0.5, 0.5}) == doctest::Approx(5.0 + 0.5 + 50.0));
    CHECK(interpolate_scalar(f, {1.0, 1.0, 1.0}) == f.at(1, 1, 1));
    double out = 0.0;
    CHECK(sample_scalar(f, {1.5, 0.5, 0.5}, MaskPolicy::reject, out) == SampleStatus::masked);
    CHECK(sample_scalar(f, {3.5, 0.5, 0.5}, MaskPolicy::reject, out) == SampleStatus::out_of_domain);
}

TEST_CASE("non-finite values are invalid") {
    auto g = make_grid({0.0, 1.0}, {0.0, 1.0}, {0.0});
    const ScalarField f(g, "f", "", {1.0, std::nan(""), 3.0, INFINITY});
    CHECK(f.valid_count() == 2);
    CHECK_THROWS_AS(ScalarField(g, "f", "", {1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("vector interpolation and the vertical flag") {
    auto g = make_grid({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0});
    const auto vf = vector_field(g, [](const Position&) { return Vec3{1.0, 0.0, 0.5}; }, true);
    auto near = [](Vec3 a, Vec3 b) { return (a - b).norm() < 1e-14; };
    CHECK(near(interpolate_vector(vf, {0.3, 0.3, 0.3}, false), Vec3{1.0, 0.0, 0.0}));
    CHECK(near(interpolate_vector(vf, {0.3, 0.3, 0.3}, true), Vec3{1.0, 0.0, 0.5}));
    CHECK(interpolate_vector(vf, {0.3, 0.3, 0.3}, false).z == 0.0);
    const auto no_w = vector_field(g, [](const Position&) { return Vec3{1.0, 2.0, 0.0}; });
    CHECK(near(interpolate_vector(no_w, {0.3, 0.3, 0.3}, true), Vec3{1.0, 2.0, 0.0}));

    auto lin = [](const Position& p) { return Vec3{p.lon + 2.0 * p.lat, 3.0 * p.depth - p.lon, p.lat * p.depth}; };
    const auto lf = vector_field(g, lin, true);
    const Position p{0.25, 0.6, 0.9};
    const auto got = interpolate_vector(lf, p, true);
    CHECK(got.x == doctest::Approx(interpolate_scalar(lf.component('u'), p)));
    CHECK(got.y == doctest::Approx(interpolate_scalar(lf.component('v'), p)));
    CHECK(got.z == doctest::Approx(lin(p).z));
}

TEST_CASE("vector validity is shared across components") {
    auto g = make_grid({0.0, 1.0}, {0.0, 1.0}, {0.0});
    const VectorField vf(g, {1.0, 1.0, 1.0, 1.0}, {1.0, std::nan(""), 1.0, 1.0});
    CHECK_FALSE(vf.is_valid(1));
    CHECK_FALSE(vf.component('u').is_valid(1));
    CHECK_THROWS_AS(vf.component('w'), MissingVariable);
}

TEST_CASE("horizontal metric") {
    const double deg = kEarthRadius * kPi / 180.0;
    auto m0 = metric_at_latitude(HorizontalFrame::geographic, 0.0);
    CHECK(m0.dx == doctest::Approx(deg));
    CHECK(m0.dy == doctest::Approx(deg));
    CHECK(m0.dx == doctest::Approx(111194.93).epsilon(1e-6));
    auto m60 = metric_at_latitude(HorizontalFrame::geographic, 60.0);
    CHECK(m60.dx == doctest::Approx(m60.dy / 2.0));
    CHECK(metric_at_latitude(HorizontalFrame::geographic, 90.0).dx == 0.0);
    auto mc = metric_at_latitude(HorizontalFrame::cartesian, 45.0);
    CHECK(mc.dx == 1.0);
    CHECK(mc.dy == 1.0);
    auto g = make_grid({0.0, 1.0}, {0.0, 60.0}, {0.0}, HorizontalFrame::geographic);
    CHECK(horizontal_metric(*g, 1).dx == doctest::Approx(deg / 2.0));
}

TEST_CASE("grid indexing") {
    auto g = irregular_grid();
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        const auto c = g->unravel(n);
        CHECK(g->index(c.i, c.j, c.k) == n);
    }
    CHECK(g->index(1, 0, 0) == 1);
    CHECK(g->index(0, 1, 0) == g->nx());
    CHECK_THROWS_AS(RectilinearGrid3D(g->lon(), g->lat(), g->depth(), std::vector<std::uint8_t>(3, 0)),
                    DimensionMismatch);
}
