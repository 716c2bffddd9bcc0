#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "seascape/export.hpp"
#include "support.hpp"

using namespace seascape;
using namespace seascape::testing;

TEST_CASE("numbers round-trip") {
    for (const double x : {0.0, -0.0, 1.0, 0.1, -2.5e-7, 6371000.0, 1.0 / 3.0, 1e300}) {
        const auto s = format_number(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("polyline VTK layout") {
    FieldLine a;
    a.vertices = {{1.0, 2.0, 5.0}, {1.5, 2.0, 5.0}};
    a.time = {0.0, 10.0};
    a.speed = {0.1, std::numeric_limits<double>::quiet_NaN()};
    FieldLine b = a;
    b.vertices.push_back({2.0, 2.0, 5.0});
    b.time.push_back(20.0);
    b.speed.push_back(0.2);
    const std::vector<FieldLine> lines{a, b};
    std::ostringstream os;
    write_vtk_polylines(os, lines);
    const auto text = os.str();
    CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(text.find("POINTS 5 double\n1 2 -5\n") != std::string::npos);
    CHECK(text.find("LINES 2 7\n2 0 1\n3 2 3 4\n") != std::string::npos);
    CHECK(text.find("POINT_DATA 5") != std::string::npos);
    CHECK(text.find("SCALARS speed_valid") != std::string::npos);
}

TEST_CASE("rectilinear VTK marks missing values") {
    auto g = make_grid({0.0, 1.0}, {0.0, 1.0}, {0.0, 10.0});
    std::vector<double> v(g->node_count(), 2.0);
    v[3] = std::numeric_limits<double>::quiet_NaN();
    const ScalarField f(g, "temp", "degC", v);
    const ScalarField* fields[] = {&f};
    std::ostringstream os;
    write_vtk_fields(os, fields);
    const auto text = os.str();
    CHECK(text.find("DIMENSIONS 2 2 2") != std::string::npos);
    CHECK(text.find("Z_COORDINATES 2 double\n0 -10\n") != std::string::npos);
    CHECK(text.find("SCALARS temp double 1\nLOOKUP_TABLE default\n2\n2\n2\n0\n") != std::string::npos);
    CHECK(text.find("SCALARS temp_valid") != std::string::npos);
}

TEST_CASE("profile CSV") {
    DepthProfile p;
    p.time = 3600.0;
    p.variables = {VariableRole::temperature, VariableRole::salinity};
    p.rows = {{0.5, {28.0, 34.5}, false}, {10.0, {std::numeric_limits<double>::quiet_NaN(), 34.6}, true}};
    std::ostringstream os;
    write_profile_csv(os, p);
    CHECK(os.str() == "depth,time,temperature,salinity,masked\n0.5,3600,28,34.5,0\n10,3600,,34.6,1\n");
}
