#include <doctest.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "seascape/error.hpp"
#include "seascape/ingest.hpp"
#include "seascape/netcdf_classic.hpp"
#include "support.hpp"

using namespace seascape;
using namespace seascape::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SEASCAPE_TEST_DATA;

// The formulas used by make_fixtures.py, rounded to float32 as stored.
double nemo_thetao(double lon, double depth, std::size_t t) {
    return static_cast<float>(28.0 - 0.02 * depth + 0.05 * (lon - 85.0) + 0.1 * static_cast<double>(t));
}
double nemo_so(double lat, double depth) { return static_cast<float>(34.0 + 0.005 * depth + 0.01 * (lat - 15.0)); }
bool nemo_land(double lon, double lat) { return lon >= 98.0 && lat >= 23.0; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Dataset small_memory_dataset() {
    auto g = make_grid({0.0, 1.0, 2.5}, {10.0, 11.0}, {0.0, 5.0, 20.0}, HorizontalFrame::geographic);
    std::map<VariableRole, MemoryVariable> vars;
    for (const auto role : {VariableRole::temperature, VariableRole::u, VariableRole::v}) {
        TimeSeries ts;
        for (std::size_t t = 0; t < 2; ++t) {
            std::vector<double> v(g->node_count());
            for (std::size_t n = 0; n < v.size(); ++n)
                v[n] = static_cast<float>(0.1 * static_cast<double>(n) + static_cast<double>(t) +
                                          static_cast<double>(static_cast<int>(role)));
            if (role == VariableRole::temperature) v[4] = std::nan("");
            ts.push_back(std::move(v));
        }
        vars[role] = {{std::string(to_string(role)), "unit"}, std::move(ts)};
    }
    return make_memory_dataset(*g, Axis("time", {0.0, 3600.0}, "s"), std::move(vars));
}

}  // namespace

TEST_CASE("NEMO-style NetCDF fixture") {
    const auto d = open_dataset(kData / "nemo_small.nc", VariableMap::nemo());
    const auto& g = d.grid();
    CHECK(g.nx() == 31);
    CHECK(g.ny() == 21);
    CHECK(g.nz() == 9);
    REQUIRE(d.timestep_count() == 3);
    CHECK(d.time()[0] == 18262.0 * 86400.0);
    CHECK(d.time()[2] - d.time()[1] == 86400.0);
    CHECK(g.depth()[0] == doctest::Approx(0.5));
    CHECK(d.has(VariableRole::w));
    CHECK(d.variable(VariableRole::temperature).name == "thetao");
    CHECK(d.variable(VariableRole::temperature).units == "degrees_C");

    for (std::size_t t = 0; t < 3; ++t) {
        const auto temp = load_scalar(d, VariableRole::temperature, t);
        for (std::size_t k = 0; k < g.nz(); ++k)
            for (std::size_t j = 0; j < g.ny(); ++j)
                for (std::size_t i = 0; i < g.nx(); ++i) {
                    const std::size_t n = g.index(i, j, k);
                    const bool land = nemo_land(g.lon()[i], g.lat()[j]);
                    CHECK(g.is_land(n) == land);
                    CHECK(temp.is_valid(n) == !land);
                    if (!land) CHECK(temp[n] == nemo_thetao(g.lon()[i], g.depth()[k], t));
                }
    }
    const auto so = load_scalar(d, VariableRole::salinity, 1);
    CHECK(so.at(3, 4, 5) == nemo_so(g.lat()[4], g.depth()[5]));
    const auto vf = load_vector(d, 0);
    CHECK(vf.has_w());
    CHECK(d.land_fraction() == doctest::Approx(3.0 * 3.0 / (31.0 * 21.0)));
}

TEST_CASE("missing mapped variables") {
    // Default names: the lon dimension itself is absent.
    CHECK_THROWS_AS(open_dataset(kData / "nemo_small.nc"), DimensionMismatch);
    auto map = VariableMap::nemo();
    map.salinity = "salt";
    CHECK_THROWS_AS(open_dataset(kData / "nemo_small.nc", map), MissingVariable);
    map.salinity.reset();
    const auto d = open_dataset(kData / "nemo_small.nc", map);
    CHECK_FALSE(d.has(VariableRole::salinity));
    CHECK_THROWS_AS(load_scalar(d, VariableRole::salinity, 0), MissingVariable);
    // w may be absent.
    auto no_w = VariableMap::nemo();
    no_w.w = "not_there";
    CHECK_FALSE(open_dataset(kData / "nemo_small.nc", no_w).has(VariableRole::w));
}

TEST_CASE("packed, permuted, flipped NetCDF matches a direct read") {
    const auto cfg = load_config(kData / "packed.cfg");
    const auto d = open_dataset(kData / "packed.nc", cfg.map);
    const auto& g = d.grid();
    CHECK(g.nx() == 5);
    CHECK(g.ny() == 4);
    CHECK(g.nz() == 4);
    // Latitude stored descending, depth stored as negative heights.
    CHECK(g.lat()[0] == 41.0);
    CHECK(g.lat()[3] == 44.0);
    CHECK(g.depth()[0] == 0.0);
    CHECK_FALSE(std::signbit(g.depth()[0]));
    CHECK(g.depth()[3] == 50.0);
    CHECK(d.time()[1] == 6.0 * 3600.0);
    CHECK_FALSE(d.has(VariableRole::u));

    // Oracle: raw stored values in (t, x, z, y) order with explicit unpacking.
    const netcdf::File file(kData / "packed.nc");
    const auto* temp_var = file.find_variable("temp");
    const auto* salt_var = file.find_variable("salt");
    REQUIRE(temp_var);
    REQUIRE(salt_var);
    const double scale = temp_var->attribute("scale_factor")->number().value();
    const double offset = temp_var->attribute("add_offset")->number().value();
    const auto ys = file.read_all(*file.find_variable("y"));
    const auto zs = file.read_all(*file.find_variable("z"));
    for (std::size_t t = 0; t < 2; ++t) {
        const auto raw_t = file.read_outer_slab(*temp_var, t);
        const auto raw_s = file.read_outer_slab(*salt_var, t);
        const auto temp = load_scalar(d, VariableRole::temperature, t);
        const auto salt = load_scalar(d, VariableRole::salinity, t);
        for (std::size_t xi = 0; xi < 5; ++xi)
            for (std::size_t zi = 0; zi < 4; ++zi)
                for (std::size_t yi = 0; yi < 4; ++yi) {
                    const std::size_t stored = (xi * 4 + zi) * 4 + yi;
                    const std::size_t j = g.lat().nearest(ys[yi]);
                    const std::size_t k = g.depth().nearest(-zs[zi]);
                    REQUIRE(g.lat()[j] == ys[yi]);
                    const std::size_t n = g.index(xi, j, k);
                    if (raw_t[stored] == -32768.0) {
                        CHECK_FALSE(temp.is_valid(n));
                    } else {
                        CHECK(temp[n] == raw_t[stored] * scale + offset);
                    }
                    CHECK(salt[n] == raw_s[stored]);
                }
    }
    // Land mask follows the first mapped variable (salinity), which has no gaps.
    CHECK(d.land_fraction() == 0.0);
}

TEST_CASE("in-house NetCDF writer: shape and descending depth") {
    TempDir dir;
    const auto path = dir / "shape.nc";
    std::vector<double> values(2 * 3 * 4 * 5);
    for (std::size_t n = 0; n < values.size(); ++n) values[n] = static_cast<double>(n);
    const std::vector<netcdf::WriteDimension> dims{{"time", 2, true}, {"depth", 3}, {"lat", 4}, {"lon", 5}};
    std::vector<netcdf::WriteVariable> vars{
        {"time", {"time"}, netcdf::Type::float64, {netcdf::text_attribute("units", "hours since 2000-01-01")}, {0, 1}},
        {"depth", {"depth"}, netcdf::Type::float64, {}, {30.0, 10.0, 0.0}},
        {"lat", {"lat"}, netcdf::Type::float64, {}, {0, 1, 2, 3}},
        {"lon", {"lon"}, netcdf::Type::float64, {}, {0, 1, 2, 3, 4}},
        {"temperature", {"time", "depth", "lat", "lon"}, netcdf::Type::float32, {}, values},
    };
    netcdf::write_file(path, dims, {}, vars);
    VariableMap map;
    map.salinity.reset();
    map.u.reset();
    map.v.reset();
    const auto d = open_dataset(path, map);
    CHECK(d.grid().nx() == 5);
    CHECK(d.grid().ny() == 4);
    CHECK(d.grid().nz() == 3);
    CHECK(d.timestep_count() == 2);
    CHECK(d.time()[1] == 3600.0);
    CHECK(d.grid().depth()[0] == 0.0);
    const auto f = load_scalar(d, VariableRole::temperature, 1);
    // Stored depth index 2 (0 m) becomes k = 0.
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t i = 0; i < 5; ++i)
                CHECK(f.at(i, j, k) == values[((1 * 3 + (2 - k)) * 4 + j) * 5 + i]);

    // Unsorted axis.
    vars[2].data = {0, 2, 1, 3};
    netcdf::write_file(dir / "bad.nc", dims, {}, vars);
    CHECK_THROWS_AS(open_dataset(dir / "bad.nc", map), UnsortedAxis);
    // Variable with the wrong shape.
    vars[2].data = {0, 1, 2, 3};
    vars[4].dims = {"time", "lat", "lon"};
    vars[4].data.resize(2 * 4 * 5);
    netcdf::write_file(dir / "flat.nc", dims, {}, vars);
    CHECK_THROWS_AS(open_dataset(dir / "flat.nc", map), DimensionMismatch);
}

TEST_CASE("format detection") {
    TempDir dir;
    std::ofstream(dir / "junk.nc") << "not a netcdf file";
    CHECK_THROWS_AS(open_dataset(dir / "junk.nc"), FormatError);
    CHECK_THROWS_AS(open_dataset(dir / "missing.json"), DataError);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(open_dataset(dir / "bad.json"), FormatError);
}

TEST_CASE("raw format round trip is bit-identical") {
    TempDir dir;
    const auto d = small_memory_dataset();
    write_raw(d, dir / "a.json");
    VariableMap map;
    map.salinity.reset();
    CHECK_THROWS_AS(open_dataset(dir / "a.json"), MissingVariable);
    const auto r = open_dataset(dir / "a.json", map);
    CHECK(r.grid().lon() == d.grid().lon());
    CHECK(r.grid().lat() == d.grid().lat());
    auto same_values = [](const Axis& a, const Axis& b) {
        return std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
    };
    CHECK(same_values(r.grid().depth(), d.grid().depth()));
    CHECK(r.grid().depth().units() == "m");
    CHECK(r.grid().frame() == d.grid().frame());
    CHECK(std::equal(r.grid().land_mask().begin(), r.grid().land_mask().end(), d.grid().land_mask().begin()));
    CHECK(r.time().values()[1] == 3600.0);
    for (const auto role : {VariableRole::temperature, VariableRole::u, VariableRole::v})
        for (std::size_t t = 0; t < 2; ++t) {
            const auto a = d.read(role, t), b = r.read(role, t);
            REQUIRE(a.size() == b.size());
            for (std::size_t n = 0; n < a.size(); ++n) {
                if (std::isnan(a[n])) CHECK(std::isnan(b[n]));
                else CHECK(std::memcmp(&a[n], &b[n], sizeof(double)) == 0);
            }
        }
    CHECK(r.grid().is_land(4));

    // Writing the re-opened dataset reproduces every byte.
    write_raw(r, dir / "b.json");
    for (const auto* var : {"temperature", "u", "v"})
        CHECK(slurp(dir / (std::string("a.") + var + ".f32")) == slurp(dir / (std::string("b.") + var + ".f32")));

    // Explicit fill value.
    write_raw(d, dir / "c.json", -999.0);
    const auto c = open_dataset(dir / "c.json", map);
    CHECK(std::isnan(c.read(VariableRole::temperature, 0)[4]));
    CHECK(slurp(dir / "c.json").find("-999") != std::string::npos);
}

TEST_CASE("raw files reopen under another mapping through their role tags") {
    TempDir dir;
    write_raw(open_dataset(kData / "nemo_small.nc", VariableMap::nemo()), dir / "n.json");
    const auto d = open_dataset(dir / "n.json");
    CHECK(d.variable(VariableRole::temperature).name == "thetao");
    CHECK(d.has(VariableRole::w));
}

TEST_CASE("subset") {
    const auto d = open_dataset(kData / "nemo_small.nc", VariableMap::nemo());
    SubsetRequest bay;
    bay.lon = ValueRange{75.0, 96.0};
    bay.depth = ValueRange{0.0, 200.0};
    const auto s = subset(d, bay);
    CHECK(s.grid().nx() == 22);
    CHECK(s.grid().ny() == 21);
    CHECK(s.grid().nz() == 7);
    for (const double x : s.grid().lon().values()) CHECK(bay.lon->contains(x));
    for (const double z : s.grid().depth().values()) CHECK(z <= 200.0);
    CHECK(s.grid().lon().front() == 75.0);
    CHECK(s.grid().lon().back() == 96.0);
    const auto full = load_scalar(d, VariableRole::temperature, 2);
    const auto cut = load_scalar(s, VariableRole::temperature, 2);
    for (std::size_t k = 0; k < 7; ++k)
        for (std::size_t j = 0; j < 21; ++j)
            for (std::size_t i = 0; i < 22; ++i) CHECK(cut.at(i, j, k) == full.at(i + 5, j, k));

    SubsetRequest times;
    times.time = IndexRange{1, 2};
    const auto st = subset(d, times);
    CHECK(st.timestep_count() == 2);
    CHECK(st.time()[0] == d.time()[1]);
    CHECK(load_scalar(st, VariableRole::temperature, 0).at(0, 0, 0) ==
          load_scalar(d, VariableRole::temperature, 1).at(0, 0, 0));

    const auto same = subset(d, {});
    CHECK(same.grid() == d.grid());
    CHECK(same.time() == d.time());
    const auto a = same.read(VariableRole::u, 1), b = d.read(VariableRole::u, 1);
    REQUIRE(a.size() == b.size());
    for (std::size_t n = 0; n < a.size(); ++n) CHECK((a[n] == b[n] || (std::isnan(a[n]) && std::isnan(b[n]))));

    SubsetRequest empty;
    empty.lon = ValueRange{120.0, 130.0};
    CHECK_THROWS_AS(subset(d, empty), EmptySubset);
    SubsetRequest between;
    between.depth = ValueRange{1.0, 9.0};
    CHECK_THROWS_AS(subset(d, between), EmptySubset);
}

TEST_CASE("timestep bounds and vector loading") {
    const auto d = small_memory_dataset();
    CHECK_THROWS_AS(load_scalar(d, VariableRole::temperature, 2), TimestepOutOfRange);
    const auto vf = load_vector(d, 1);
    CHECK_FALSE(vf.has_w());
    CHECK(vf.u()[0] == d.read(VariableRole::u, 1)[0]);
    for (std::size_t t = 0; t < d.timestep_count(); ++t) {
        const auto f = load_scalar(d, VariableRole::u, t);
        for (std::size_t n = 0; n < f.values().size(); ++n)
            if (f.is_valid(n)) CHECK(std::isfinite(f[n]));
    }
}

TEST_CASE("generated datasets call back per timestep") {
    auto g = make_grid({0.0, 1.0}, {0.0, 1.0}, {0.0});
    const auto d = make_generated_dataset(*g, Axis("time", {0.0, 1.0, 2.0}), {{VariableRole::salinity, {"s", "psu"}}},
                                          [](VariableRole, std::size_t t) {
                                              return std::vector<double>(4, 35.0 + static_cast<double>(t));
                                          });
    CHECK(load_scalar(d, VariableRole::salinity, 2)[3] == 37.0);
}

TEST_CASE("config parsing") {
    const auto cfg = parse_config(R"(
# comment
lon = longitude
lat=latitude   # trailing comment
[variables]
salinity = so
w =
fill_value = 1e20
[eddies]
persistence = 0.05
lon = 81.5
)");
    CHECK(cfg.map.lon == "longitude");
    CHECK(cfg.map.lat == "latitude");
    CHECK(cfg.map.salinity == std::optional<std::string>("so"));
    CHECK_FALSE(cfg.map.w.has_value());
    CHECK(cfg.map.fill_value == std::optional<double>(1e20));
    CHECK(cfg.extra.at("eddies.persistence") == "0.05");
    CHECK(cfg.extra.at("eddies.lon") == "81.5");
    CHECK_THROWS_AS(parse_config("u = x\nv = x\n").map.validate(), InvalidArgument);
    CHECK_THROWS_AS(parse_config("no equals sign"), InvalidArgument);
    CHECK(parse_config("u = uo", VariableMap::nemo()).map.temperature == std::optional<std::string>("thetao"));
}

TEST_CASE("role names") {
    for (const auto r : kAllRoles) CHECK(parse_role(to_string(r)) == r);
    CHECK_THROWS_AS(parse_role("pressure"), InvalidArgument);
}
