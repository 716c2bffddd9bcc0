#include <doctest.h>

#include <random>

#include "seascape/error.hpp"
#include "seascape/fields.hpp"
#include "support.hpp"

using namespace seascape;
using namespace seascape::testing;

namespace {

bool interior(const RectilinearGrid3D& g, std::size_t n) {
    const auto c = g.unravel(n);
    return c.i > 0 && c.j > 0 && c.i + 1 < g.nx() && c.j + 1 < g.ny();
}

// Independent stencil: central where both neighbours are usable, one-sided otherwise.
double oracle_derivative(const VectorField& vf, std::span<const double> f, std::size_t i, std::size_t j, std::size_t k,
                         bool along_x) {
    const auto& g = vf.grid();
    const Axis& ax = along_x ? g.lon() : g.lat();
    const std::size_t n = along_x ? i : j;
    auto idx = [&](std::size_t m) { return along_x ? g.index(m, j, k) : g.index(i, m, k); };
    const bool lo = n > 0 && vf.is_valid(idx(n - 1));
    const bool hi = n + 1 < ax.size() && vf.is_valid(idx(n + 1));
    double d = 0.0;
    if (lo && hi) d = (f[idx(n + 1)] - f[idx(n - 1)]) / (ax[n + 1] - ax[n - 1]);
    else if (hi) d = (f[idx(n + 1)] - f[idx(n)]) / (ax[n + 1] - ax[n]);
    else if (lo) d = (f[idx(n)] - f[idx(n - 1)]) / (ax[n] - ax[n - 1]);
    else return std::nan("");
    const double lat = g.lat()[j] * kPi / 180.0;
    const double metre = along_x ? kEarthRadius * std::cos(lat) * kPi / 180.0 : kEarthRadius * kPi / 180.0;
    return d / metre;
}

GridPtr geographic_grid() {
    return make_grid({30.0, 30.25, 30.6, 31.0, 31.1, 31.5, 32.0}, {10.0, 10.4, 10.5, 11.0, 11.8, 12.0},
                     {0.0, 5.0, 20.0}, HorizontalFrame::geographic);
}

VectorField random_field(const GridPtr& g, std::uint64_t seed, bool holes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(g->node_count()), b(g->node_count());
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    if (holes) {
        for (std::size_t n = 0; n < a.size(); n += 5) a[n] = std::nan("");
    }
    return VectorField(g, a, b);
}

}  // namespace

TEST_CASE("speed") {
    auto g = centred_grid(3, 3, 1, 1.0);
    const auto vf = vector_field(g, [](const Position&) { return Vec3{3.0, 4.0, 12.0}; }, true);
    const auto h = speed(vf, false);
    const auto full = speed(vf, true);
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        CHECK(h[n] == 5.0);
        CHECK(full[n] == 13.0);
    }
    const auto rf = random_field(geographic_grid(), 5, true);
    const auto s = speed(rf, false);
    for (std::size_t n = 0; n < s.values().size(); ++n) {
        CHECK(s.is_valid(n) == rf.is_valid(n));
        if (s.is_valid(n)) {
            CHECK(s[n] == doctest::Approx(std::hypot(rf.u()[n], rf.v()[n])).epsilon(1e-15));
            CHECK(s[n] >= 0.0);
        }
    }
}

TEST_CASE("solid-body rotation and shear") {
    const double omega = 1.0;
    auto g = centred_grid(32, 32, 2, 100.0);
    const auto rot = vector_field(g, [&](const Position& p) { return Vec3{-omega * p.lat, omega * p.lon, 0.0}; });
    const auto w = vorticity_z(rot);
    const auto ow = okubo_weiss(rot);
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        CHECK(w[n] == doctest::Approx(2.0 * omega).epsilon(1e-9));
        CHECK(ow[n] == doctest::Approx(-4.0 * omega * omega).epsilon(1e-9));
        CHECK(ow[n] < 0.0);
    }
    const auto shear = vector_field(g, [](const Position& p) { return Vec3{p.lat, 0.0, 0.0}; });
    const auto ws = vorticity_z(shear);
    for (std::size_t n = 0; n < g->node_count(); ++n) CHECK(ws[n] == doctest::Approx(-1.0));
}

TEST_CASE("pure strain") {
    const double alpha = 0.3;
    auto g = centred_grid(16, 12, 1, 50.0);
    const auto vf = vector_field(g, [&](const Position& p) { return Vec3{alpha * p.lon, -alpha * p.lat, 0.0}; });
    const auto w = okubo_weiss(vf);
    const auto vort = vorticity_z(vf);
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        CHECK(w[n] == doctest::Approx(4.0 * alpha * alpha));
        CHECK(vort[n] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("vorticity and okubo-weiss match an independent stencil on a geographic grid") {
    auto g = geographic_grid();
    for (const bool holes : {false, true}) {
        const auto vf = random_field(g, 17, holes);
        const auto vort = vorticity_z(vf);
        const auto ow = okubo_weiss(vf);
        for (std::size_t k = 0; k < g->nz(); ++k)
            for (std::size_t j = 0; j < g->ny(); ++j)
                for (std::size_t i = 0; i < g->nx(); ++i) {
                    const std::size_t n = g->index(i, j, k);
                    const double ux = oracle_derivative(vf, vf.u(), i, j, k, true);
                    const double uy = oracle_derivative(vf, vf.u(), i, j, k, false);
                    const double vx = oracle_derivative(vf, vf.v(), i, j, k, true);
                    const double vy = oracle_derivative(vf, vf.v(), i, j, k, false);
                    const bool ok = vf.is_valid(n) && !std::isnan(ux + uy + vx + vy);
                    CHECK(vort.is_valid(n) == ok);
                    if (!ok) continue;
                    const double om = vx - uy, sn = ux - vy, ss = vx + uy;
                    CHECK(vort[n] == doctest::Approx(om).epsilon(1e-12));
                    CHECK(ow[n] == doctest::Approx(sn * sn + ss * ss - om * om).epsilon(1e-12));
                }
    }
}

TEST_CASE("derived nodes never depend on invalid input") {
    auto g = geographic_grid();
    const auto vf = random_field(g, 23, true);
    for (const auto kind : {DerivedFieldKind::speed, DerivedFieldKind::speed_horizontal, DerivedFieldKind::vorticity_z,
                            DerivedFieldKind::curl_magnitude, DerivedFieldKind::okubo_weiss}) {
        const auto f = derive(vf, kind);
        for (std::size_t n = 0; n < f.values().size(); ++n)
            if (f.is_valid(n)) {
                CHECK(vf.is_valid(n));
                CHECK(std::isfinite(f[n]));
            }
    }
}

TEST_CASE("second-order convergence of the central stencil") {
    // u = 0, v = sin(x / L): omega = cos(x / L) / L. Compare at x = L / 2 with spacing h and h / 2.
    const double L = 1000.0;
    auto error_at = [&](double h) {
        const std::size_t n = 2 * static_cast<std::size_t>(std::lround(L / h)) + 1;
        auto g = make_grid(linspace(-L, h, n), {0.0, h}, {0.0});
        const auto vf = vector_field(g, [&](const Position& p) { return Vec3{0.0, std::sin(p.lon / L), 0.0}; });
        const auto w = vorticity_z(vf);
        const std::size_t i = g->lon().nearest(0.5 * L);
        return std::abs(w.at(i, 0, 0) - std::cos(g->lon()[i] / L) / L);
    };
    const double e1 = error_at(50.0), e2 = error_at(25.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("scaling: omega is linear, W quadratic") {
    auto g = geographic_grid();
    const auto vf = random_field(g, 31, false);
    const double c = 3.5;
    std::vector<double> u(vf.u().begin(), vf.u().end()), v(vf.v().begin(), vf.v().end());
    for (auto& x : u) x *= c;
    for (auto& x : v) x *= c;
    const VectorField scaled(g, u, v);
    const auto w1 = vorticity_z(vf), w2 = vorticity_z(scaled);
    const auto o1 = okubo_weiss(vf), o2 = okubo_weiss(scaled);
    for (std::size_t n = 0; n < g->node_count(); ++n) {
        if (!interior(*g, n)) continue;
        CHECK(w2[n] == doctest::Approx(c * w1[n]).epsilon(1e-10));
        CHECK(o2[n] == doctest::Approx(c * c * o1[n]).epsilon(1e-10));
    }
}

TEST_CASE("curl magnitude") {
    auto g = centred_grid(6, 6, 5, 10.0, 10.0);
    const auto horizontal = vector_field(g, [](const Position& p) { return Vec3{-p.lat, p.lon, 0.0}; });
    const auto c = curl_magnitude(horizontal);
    const auto w = vorticity_z(horizontal);
    for (std::size_t n = 0; n < g->node_count(); ++n) CHECK(c[n] == doctest::Approx(std::abs(w[n])));

    // u grows with depth, w grows eastward: both feed the meridional component.
    const auto tilted = vector_field(g, [](const Position& p) { return Vec3{2.0 * p.depth, 0.0, 3.0 * p.lon}; }, true);
    const auto ct = curl_magnitude(tilted);
    for (std::size_t n = 0; n < g->node_count(); ++n) CHECK(ct[n] == doctest::Approx(5.0));
}

TEST_CASE("degenerate horizontal axes") {
    auto g = make_grid({0.0}, {0.0, 1.0}, {0.0});
    const VectorField vf(g, {1.0, 1.0}, {0.0, 0.0});
    CHECK_THROWS_AS(vorticity_z(vf), DegenerateAxis);
    CHECK_NOTHROW(speed(vf, false));
}

TEST_CASE("kind names round-trip and results do not depend on the worker count") {
    for (const auto kind : {DerivedFieldKind::speed, DerivedFieldKind::speed_horizontal, DerivedFieldKind::vorticity_z,
                            DerivedFieldKind::curl_magnitude, DerivedFieldKind::okubo_weiss})
        CHECK(parse_derived_field_kind(to_string(kind)) == kind);
    CHECK_THROWS_AS(parse_derived_field_kind("divergence"), InvalidArgument);
    const auto vf = random_field(geographic_grid(), 3, true);
    const auto a = okubo_weiss(vf, 1), b = okubo_weiss(vf, 4);
    for (std::size_t n = 0; n < a.values().size(); ++n) {
        CHECK(a.is_valid(n) == b.is_valid(n));
        if (a.is_valid(n)) CHECK(a[n] == b[n]);
    }
}
