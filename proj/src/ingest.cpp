#include "seascape/ingest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seascape/error.hpp"
#include "seascape/netcdf_classic.hpp"

namespace seascape {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view to_string(VariableRole role) {
    switch (role) {
        case VariableRole::salinity: return "salinity";
        case VariableRole::temperature: return "temperature";
        case VariableRole::u: return "u";
        case VariableRole::v: return "v";
        case VariableRole::w: return "w";
    }
    return "unknown";
}

VariableRole parse_role(std::string_view name) {
    for (auto role : kAllRoles) {
        if (name == to_string(role)) return role;
    }
    throw InvalidArgument("unknown variable role '" + std::string(name) + "'");
}

VariableMap VariableMap::nemo() {
    VariableMap m;
    m.lon = "longitude";
    m.lat = "latitude";
    m.depth = "depth";
    m.time = "time";
    m.salinity = "so";
    m.temperature = "thetao";
    m.u = "uo";
    m.v = "vo";
    m.w = "wo";
    return m;
}

const std::optional<std::string>& VariableMap::name_of(VariableRole role) const {
    switch (role) {
        case VariableRole::salinity: return salinity;
        case VariableRole::temperature: return temperature;
        case VariableRole::u: return u;
        case VariableRole::v: return v;
        case VariableRole::w: return w;
    }
    throw InvalidArgument("unknown role");
}

std::optional<std::string>& VariableMap::name_of(VariableRole role) {
    return const_cast<std::optional<std::string>&>(std::as_const(*this).name_of(role));
}

void VariableMap::validate() const {
    std::set<std::string> seen;
    for (auto role : kAllRoles) {
        const auto& n = name_of(role);
        if (!n) continue;
        if (!seen.insert(*n).second) {
            throw InvalidArgument("variable '" + *n + "' is mapped to more than one role");
        }
    }
    std::set<std::string> dims{lon, lat, depth, time};
    if (dims.size() != 4) throw InvalidArgument("dimension names must be distinct");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

ConfigFile parse_config(std::string_view text, VariableMap base) {
    ConfigFile cfg{std::move(base), {}};
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside quotes.
        bool quoted = false;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (line[c] == '"') quoted = !quoted;
            if (line[c] == '#' && !quoted) {
                line.resize(c);
                break;
            }
        }
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw InvalidArgument("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = unquote(trim(std::string_view(t).substr(eq + 1)));
        if (!section.empty() && section != "variables") {
            cfg.extra[section + "." + key] = value;
            continue;
        }
        auto& m = cfg.map;
        if (key == "lon") m.lon = value;
        else if (key == "lat") m.lat = value;
        else if (key == "depth") m.depth = value;
        else if (key == "time") m.time = value;
        else if (key == "fill_value") {
            if (value.empty()) {
                m.fill_value.reset();
            } else {
                try {
                    m.fill_value = std::stod(value);
                } catch (const std::exception&) {
                    throw InvalidArgument("config line " + std::to_string(lineno) + ": fill_value is not a number");
                }
            }
        } else {
            bool is_role = false;
            for (auto role : kAllRoles) {
                if (key == to_string(role)) {
                    is_role = true;
                    if (value.empty()) m.name_of(role).reset();
                    else m.name_of(role) = value;
                }
            }
            if (!is_role) cfg.extra[section.empty() ? key : section + "." + key] = value;
        }
    }
    cfg.map.validate();
    return cfg;
}

ConfigFile load_config(const fs::path& path, VariableMap base) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

namespace {

// Memory layout of one timestep of a source variable relative to canonical order.
struct Layout {
    std::size_t nx = 1, ny = 1, nz = 1;
    std::size_t stride_x = 1, stride_y = 1, stride_z = 1;
    bool flip_x = false, flip_y = false, flip_z = false;

    std::vector<double> canonical(const std::vector<double>& src) const {
        std::vector<double> out(nx * ny * nz);
        std::size_t o = 0;
        for (std::size_t k = 0; k < nz; ++k) {
            const std::size_t sk = (flip_z ? nz - 1 - k : k) * stride_z;
            for (std::size_t j = 0; j < ny; ++j) {
                const std::size_t sj = sk + (flip_y ? ny - 1 - j : j) * stride_y;
                for (std::size_t i = 0; i < nx; ++i) {
                    out[o++] = src[sj + (flip_x ? nx - 1 - i : i) * stride_x];
                }
            }
        }
        return out;
    }
};

// Ascending copy of a monotone axis; `flipped` reports whether it was descending.
std::vector<double> normalize_axis(const std::string& name, std::vector<double> values, bool& flipped) {
    flipped = false;
    if (values.size() >= 2 && values.front() > values.back()) {
        std::reverse(values.begin(), values.end());
        flipped = true;
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw UnsortedAxis("axis '" + name + "' is not strictly monotonic");
        }
    }
    return values;
}

// Positive-up depth coordinates (all values <= 0) are converted to positive-down.
std::vector<double> normalize_depth_sign(std::vector<double> values, bool positive_up) {
    const bool all_nonpositive =
        std::all_of(values.begin(), values.end(), [](double z) { return z <= 0.0; }) &&
        std::any_of(values.begin(), values.end(), [](double z) { return z < 0.0; });
    if (positive_up || all_nonpositive) {
        for (auto& z : values) z = 0.0 - z;
    }
    return values;
}

double time_unit_seconds(std::string units) {
    std::transform(units.begin(), units.end(), units.begin(), [](unsigned char c) { return std::tolower(c); });
    const auto word = units.substr(0, units.find(' '));
    if (word == "days" || word == "day" || word == "d") return 86400.0;
    if (word == "hours" || word == "hour" || word == "h" || word == "hrs") return 3600.0;
    if (word == "minutes" || word == "minute" || word == "min") return 60.0;
    return 1.0;
}

class MemorySource final : public VariableSource {
public:
    explicit MemorySource(std::map<std::string, TimeSeries> data) : data_(std::move(data)) {}
    std::vector<double> read(const std::string& name, std::size_t t) const override {
        auto it = data_.find(name);
        if (it == data_.end()) throw MissingVariable("variable '" + name + "' not present");
        if (t >= it->second.size()) throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range");
        return it->second[t];
    }

private:
    std::map<std::string, TimeSeries> data_;
};

class GeneratorSource final : public VariableSource {
public:
    GeneratorSource(std::map<std::string, VariableRole> roles, FieldGenerator gen)
        : roles_(std::move(roles)), gen_(std::move(gen)) {}
    std::vector<double> read(const std::string& name, std::size_t t) const override {
        auto it = roles_.find(name);
        if (it == roles_.end()) throw MissingVariable("variable '" + name + "' not present");
        return gen_(it->second, t);
    }

private:
    std::map<std::string, VariableRole> roles_;
    FieldGenerator gen_;
};

class SubsetSource final : public VariableSource {
public:
    SubsetSource(std::shared_ptr<const VariableSource> parent, std::array<std::size_t, 3> parent_dims,
                 std::array<std::size_t, 3> offset, std::array<std::size_t, 3> dims, std::size_t t0)
        : parent_(std::move(parent)), pdims_(parent_dims), off_(offset), dims_(dims), t0_(t0) {}

    std::vector<double> read(const std::string& name, std::size_t t) const override {
        const auto full = parent_->read(name, t0_ + t);
        std::vector<double> out(dims_[0] * dims_[1] * dims_[2]);
        std::size_t o = 0;
        for (std::size_t k = 0; k < dims_[2]; ++k) {
            for (std::size_t j = 0; j < dims_[1]; ++j) {
                const std::size_t base = off_[0] + pdims_[0] * ((off_[1] + j) + pdims_[1] * (off_[2] + k));
                std::copy_n(full.begin() + static_cast<std::ptrdiff_t>(base), dims_[0], out.begin() + o);
                o += dims_[0];
            }
        }
        return out;
    }

private:
    std::shared_ptr<const VariableSource> parent_;
    std::array<std::size_t, 3> pdims_, off_, dims_;
    std::size_t t0_;
};

// ---------------------------------------------------------------- raw format

constexpr const char* kRawFormatTag = "seascape-raw";

float read_le_float(const unsigned char* p) {
    const std::uint32_t u = std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
                            (std::uint32_t{p[3]} << 24);
    return std::bit_cast<float>(u);
}

void write_le_float(float f, unsigned char* p) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    p[0] = u & 0xFF;
    p[1] = (u >> 8) & 0xFF;
    p[2] = (u >> 16) & 0xFF;
    p[3] = (u >> 24) & 0xFF;
}

class RawSource final : public VariableSource {
public:
    RawSource(std::map<std::string, fs::path> files, Layout layout, std::size_t nt, std::optional<float> fill)
        : files_(std::move(files)), layout_(layout), nt_(nt), fill_(fill) {}

    std::vector<double> read(const std::string& name, std::size_t t) const override {
        auto it = files_.find(name);
        if (it == files_.end()) throw MissingVariable("variable '" + name + "' not present");
        if (t >= nt_) throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range");
        const std::size_t n = layout_.nx * layout_.ny * layout_.nz;
        std::ifstream in(it->second, std::ios::binary);
        if (!in) throw DataError("cannot open " + it->second.string());
        in.seekg(static_cast<std::streamoff>(t * n * 4));
        std::vector<unsigned char> raw(n * 4);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw FormatError("truncated raw data in " + it->second.string());
        std::vector<double> values(n);
        for (std::size_t e = 0; e < n; ++e) {
            const float f = read_le_float(raw.data() + 4 * e);
            values[e] = (fill_ && f == *fill_) ? kNaN : static_cast<double>(f);
        }
        return layout_.canonical(values);
    }

private:
    std::map<std::string, fs::path> files_;
    Layout layout_;
    std::size_t nt_;
    std::optional<float> fill_;
};

std::vector<double> json_axis_values(const json& axes, const char* key) {
    if (!axes.contains(key) || !axes[key].contains("values")) {
        throw FormatError(std::string("raw header lacks axis '") + key + "'");
    }
    return axes[key]["values"].get<std::vector<double>>();
}

Dataset open_raw(const fs::path& path, const VariableMap& map) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    json h;
    try {
        in >> h;
    } catch (const json::exception& e) {
        throw FormatError("malformed raw header " + path.string() + ": " + e.what());
    }
    try {
        if (h.value("format", std::string{}) != kRawFormatTag) {
            throw FormatError(path.string() + " is not a " + kRawFormatTag + " header");
        }
        const auto& axes = h.at("axes");
        const auto& dims = h.at("dims");
        auto lon = json_axis_values(axes, "lon");
        auto lat = json_axis_values(axes, "lat");
        auto depth = json_axis_values(axes, "depth");
        auto time = json_axis_values(axes, "time");
        auto dim = [&](const char* k) { return dims.at(k).get<std::size_t>(); };
        if (dim("lon") != lon.size() || dim("lat") != lat.size() || dim("depth") != depth.size() ||
            dim("time") != time.size()) {
            throw DimensionMismatch("raw header dims disagree with axis lengths in " + path.string());
        }
        Layout layout;
        layout.nx = lon.size();
        layout.ny = lat.size();
        layout.nz = depth.size();
        layout.stride_x = 1;
        layout.stride_y = layout.nx;
        layout.stride_z = layout.nx * layout.ny;
        bool flip_t = false;
        lon = normalize_axis("lon", std::move(lon), layout.flip_x);
        lat = normalize_axis("lat", std::move(lat), layout.flip_y);
        depth = normalize_axis("depth", normalize_depth_sign(std::move(depth), false), layout.flip_z);
        time = normalize_axis("time", std::move(time), flip_t);
        if (flip_t) throw UnsortedAxis("raw time axis must be ascending");

        std::optional<float> fill;
        if (map.fill_value) fill = static_cast<float>(*map.fill_value);
        else if (h.contains("fill_value") && h["fill_value"].is_number()) fill = h["fill_value"].get<float>();

        const auto frame = h.value("horizontal_frame", std::string("geographic")) == "cartesian"
                               ? HorizontalFrame::cartesian
                               : HorizontalFrame::geographic;
        auto unit_of = [&](const char* k) { return axes[k].value("units", std::string{}); };

        std::map<std::string, std::pair<fs::path, std::string>> declared;
        std::map<std::string, std::string> name_of_role;  // optional "role" tags
        for (const auto& v : h.at("variables")) {
            const auto vname = v.at("name").get<std::string>();
            declared[vname] = {path.parent_path() / v.at("file").get<std::string>(), v.value("units", std::string{})};
            if (v.contains("role")) name_of_role[v.at("role").get<std::string>()] = vname;
        }
        const std::size_t expected_bytes = layout.nx * layout.ny * layout.nz * time.size() * 4;
        std::map<VariableRole, VariableInfo> catalog;
        std::map<std::string, fs::path> files;
        for (auto role : kAllRoles) {
            const auto& name = map.name_of(role);
            if (!name) continue;
            auto it = declared.find(*name);
            if (it == declared.end()) {
                // Files written by write_raw tag each variable with its role.
                const auto tagged = name_of_role.find(std::string(to_string(role)));
                if (tagged != name_of_role.end()) it = declared.find(tagged->second);
            }
            if (it == declared.end()) {
                if (role == VariableRole::w) continue;
                throw MissingVariable("variable '" + *name + "' (" + std::string(to_string(role)) + ") not in " +
                                      path.string());
            }
            if (!fs::exists(it->second.first)) throw DataError("missing data file " + it->second.first.string());
            if (fs::file_size(it->second.first) != expected_bytes) {
                throw DimensionMismatch("data file " + it->second.first.string() + " has wrong size");
            }
            catalog[role] = {it->first, it->second.second};
            files[it->first] = it->second.first;
        }
        RectilinearGrid3D grid(Axis("lon", lon, unit_of("lon")), Axis("lat", lat, unit_of("lat")),
                               Axis("depth", depth, "m"), {}, frame);
        auto source = std::make_shared<RawSource>(std::move(files), layout, time.size(), fill);
        return Dataset(grid, Axis("time", time, "s"), std::move(catalog), std::move(source));
    } catch (const json::exception& e) {
        throw FormatError("malformed raw header " + path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------- NetCDF

class NetcdfSource final : public VariableSource {
public:
    struct Var {
        const netcdf::Variable* var = nullptr;
        Layout layout;
        // Position of the time dimension in the variable's dims (or none).
        std::optional<std::size_t> time_pos;
        std::size_t nt = 1;
        bool flip_t = false;
        std::optional<double> fill;
        std::optional<double> missing;
        double scale = 1.0;
        double offset = 0.0;
        std::vector<std::size_t> shape;
    };

    NetcdfSource(std::shared_ptr<netcdf::File> file, std::map<std::string, Var> vars)
        : file_(std::move(file)), vars_(std::move(vars)) {}

    std::vector<double> read(const std::string& name, std::size_t t) const override {
        auto it = vars_.find(name);
        if (it == vars_.end()) throw MissingVariable("variable '" + name + "' not present");
        const Var& v = it->second;
        if (t >= v.nt) throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range");
        const std::size_t tt = v.flip_t ? v.nt - 1 - t : t;
        std::vector<double> raw;
        if (!v.time_pos) {
            raw = file_->read_all(*v.var);
        } else if (*v.time_pos == 0) {
            raw = file_->read_outer_slab(*v.var, tt);
        } else {
            // Time is not the outermost dimension: gather the hyperslab from the full array.
            const auto all = file_->read_all(*v.var);
            std::vector<std::size_t> strides(v.shape.size(), 1);
            for (std::size_t d = v.shape.size() - 1; d-- > 0;) strides[d] = strides[d + 1] * v.shape[d + 1];
            const std::size_t n = all.size() / v.nt;
            raw.resize(n);
            std::vector<std::size_t> idx(v.shape.size(), 0);
            for (std::size_t e = 0; e < n; ++e) {
                std::size_t rem = e;
                std::size_t off = tt * strides[*v.time_pos];
                for (std::size_t d = v.shape.size(); d-- > 0;) {
                    if (d == *v.time_pos) continue;
                    off += (rem % v.shape[d]) * strides[d];
                    rem /= v.shape[d];
                }
                raw[e] = all[off];
            }
        }
        for (auto& x : raw) {
            if (std::isnan(x) || (v.fill && x == *v.fill) || (v.missing && x == *v.missing)) {
                x = kNaN;
            } else {
                x = x * v.scale + v.offset;
            }
        }
        return v.layout.canonical(raw);
    }

private:
    std::shared_ptr<netcdf::File> file_;
    std::map<std::string, Var> vars_;
};

std::optional<double> numeric_attribute(const netcdf::Variable& v, std::string_view name) {
    if (const auto* a = v.attribute(name)) return a->number();
    return std::nullopt;
}

std::string text_attribute(const netcdf::Variable& v, std::string_view name) {
    if (const auto* a = v.attribute(name); a && a->type == netcdf::Type::character) return a->text;
    return {};
}

Dataset open_netcdf(const fs::path& path, const VariableMap& map) {
    auto file = std::make_shared<netcdf::File>(path);

    const auto dim_lon = file->find_dimension(map.lon);
    const auto dim_lat = file->find_dimension(map.lat);
    const auto dim_depth = file->find_dimension(map.depth);
    const auto dim_time = file->find_dimension(map.time);
    if (!dim_lon || !dim_lat) {
        throw DimensionMismatch("file " + path.string() + " lacks dimension '" + (dim_lon ? map.lat : map.lon) + "'");
    }

    auto coordinate = [&](const std::string& name) -> const netcdf::Variable& {
        const auto* v = file->find_variable(name);
        if (!v) throw MissingVariable("coordinate variable '" + name + "' not in " + path.string());
        return *v;
    };
    bool flip_x = false, flip_y = false, flip_z = false, flip_t = false;
    const auto& lon_var = coordinate(map.lon);
    const auto& lat_var = coordinate(map.lat);
    auto lon = normalize_axis(map.lon, file->read_all(lon_var), flip_x);
    auto lat = normalize_axis(map.lat, file->read_all(lat_var), flip_y);
    std::vector<double> depth{0.0};
    if (dim_depth) {
        const auto& depth_var = coordinate(map.depth);
        const bool up = text_attribute(depth_var, "positive") == "up";
        depth = normalize_axis(map.depth, normalize_depth_sign(file->read_all(depth_var), up), flip_z);
    }
    std::vector<double> time{0.0};
    if (dim_time) {
        const std::size_t nt = file->dimensions()[*dim_time].length;
        if (nt == 0) throw DimensionMismatch("time dimension of " + path.string() + " is empty");
        if (const auto* tv = file->find_variable(map.time)) {
            auto raw = file->read_all(*tv);
            const double unit = time_unit_seconds(text_attribute(*tv, "units"));
            for (auto& x : raw) x *= unit;
            time = normalize_axis(map.time, std::move(raw), flip_t);
        } else {
            time.resize(nt);
            for (std::size_t t = 0; t < nt; ++t) time[t] = 86400.0 * static_cast<double>(t);
        }
    }

    std::map<VariableRole, VariableInfo> catalog;
    std::map<std::string, NetcdfSource::Var> vars;
    for (auto role : kAllRoles) {
        const auto& name = map.name_of(role);
        if (!name) continue;
        const auto* v = file->find_variable(*name);
        if (!v) {
            if (role == VariableRole::w) continue;
            throw MissingVariable("variable '" + *name + "' (" + std::string(to_string(role)) + ") not in " +
                                  path.string());
        }
        std::set<std::size_t> expected{*dim_lon, *dim_lat};
        if (dim_depth) expected.insert(*dim_depth);
        if (dim_time) expected.insert(*dim_time);
        const std::set<std::size_t> actual(v->dim_ids.begin(), v->dim_ids.end());
        if (actual != expected || v->dim_ids.size() != expected.size()) {
            throw DimensionMismatch("variable '" + *name + "' does not have dimensions (" + map.time + ", " +
                                    map.depth + ", " + map.lat + ", " + map.lon + ")");
        }
        NetcdfSource::Var nv;
        nv.var = v;
        nv.shape = file->shape(*v);
        // Strides of the per-timestep slab (time dimension removed).
        std::vector<std::size_t> slab_dims;
        for (std::size_t d = 0; d < v->dim_ids.size(); ++d) {
            if (dim_time && v->dim_ids[d] == *dim_time) {
                nv.time_pos = d;
                nv.nt = nv.shape[d];
            } else {
                slab_dims.push_back(d);
            }
        }
        std::size_t stride = 1;
        nv.layout.nx = lon.size();
        nv.layout.ny = lat.size();
        nv.layout.nz = depth.size();
        for (std::size_t s = slab_dims.size(); s-- > 0;) {
            const std::size_t d = slab_dims[s];
            const std::size_t id = v->dim_ids[d];
            if (id == *dim_lon) nv.layout.stride_x = stride;
            else if (id == *dim_lat) nv.layout.stride_y = stride;
            else nv.layout.stride_z = stride;
            stride *= nv.shape[d];
        }
        nv.layout.flip_x = flip_x;
        nv.layout.flip_y = flip_y;
        nv.layout.flip_z = flip_z;
        nv.flip_t = flip_t;
        nv.fill = map.fill_value ? map.fill_value : numeric_attribute(*v, "_FillValue");
        nv.missing = numeric_attribute(*v, "missing_value");
        nv.scale = numeric_attribute(*v, "scale_factor").value_or(1.0);
        nv.offset = numeric_attribute(*v, "add_offset").value_or(0.0);
        // Float-typed fill values are compared after the float round trip.
        if (nv.fill && v->type == netcdf::Type::float32) nv.fill = static_cast<double>(static_cast<float>(*nv.fill));
        if (nv.missing && v->type == netcdf::Type::float32) {
            nv.missing = static_cast<double>(static_cast<float>(*nv.missing));
        }
        catalog[role] = {*name, text_attribute(*v, "units")};
        vars[*name] = nv;
    }

    const bool degrees = text_attribute(lon_var, "units").find("degree") != std::string::npos ||
                         text_attribute(lon_var, "units").empty();
    RectilinearGrid3D grid(Axis("lon", lon, text_attribute(lon_var, "units")),
                           Axis("lat", lat, text_attribute(lat_var, "units")), Axis("depth", depth, "m"), {},
                           degrees ? HorizontalFrame::geographic : HorizontalFrame::cartesian);
    return Dataset(grid, Axis("time", time, "s"), std::move(catalog),
                   std::make_shared<NetcdfSource>(std::move(file), std::move(vars)));
}

bool has_cdf_magic(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[3] = {};
    in.read(magic, 3);
    return in && magic[0] == 'C' && magic[1] == 'D' && magic[2] == 'F';
}

}  // namespace

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(const RectilinearGrid3D& grid, Axis time, std::map<VariableRole, VariableInfo> catalog,
                 std::shared_ptr<const VariableSource> source)
    : time_(std::move(time)), catalog_(std::move(catalog)), source_(std::move(source)) {
    if (!source_) throw InvalidArgument("dataset has no variable source");
    std::vector<std::uint8_t> land(grid.node_count(), 0);
    if (!catalog_.empty() && time_.size() > 0) {
        const auto values = source_->read(catalog_.begin()->second.name, 0);
        if (values.size() != land.size()) {
            throw DimensionMismatch("variable '" + catalog_.begin()->second.name + "' does not match the grid");
        }
        for (std::size_t idx = 0; idx < values.size(); ++idx) land[idx] = std::isnan(values[idx]);
    }
    grid_ = std::make_shared<const RectilinearGrid3D>(grid.with_land_mask(std::move(land)));
}

const VariableInfo& Dataset::variable(VariableRole role) const {
    auto it = catalog_.find(role);
    if (it == catalog_.end()) {
        throw MissingVariable("dataset has no " + std::string(to_string(role)) + " variable");
    }
    return it->second;
}

std::vector<double> Dataset::read(VariableRole role, std::size_t t) const {
    const auto& info = variable(role);
    if (t >= timestep_count()) {
        throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range [0, " +
                                 std::to_string(timestep_count()) + ")");
    }
    auto values = source_->read(info.name, t);
    if (values.size() != grid_->node_count()) {
        throw DimensionMismatch("variable '" + info.name + "' does not match the grid");
    }
    return values;
}

double Dataset::land_fraction() const {
    const auto land = grid_->land_mask();
    return static_cast<double>(std::count(land.begin(), land.end(), std::uint8_t{1})) /
           static_cast<double>(land.size());
}

Dataset make_memory_dataset(const RectilinearGrid3D& grid, Axis time, std::map<VariableRole, MemoryVariable> vars) {
    std::map<VariableRole, VariableInfo> catalog;
    std::map<std::string, TimeSeries> data;
    for (auto& [role, var] : vars) {
        if (var.values.size() != time.size()) {
            throw DimensionMismatch("variable '" + var.info.name + "' has " + std::to_string(var.values.size()) +
                                    " timesteps, time axis has " + std::to_string(time.size()));
        }
        for (const auto& step : var.values) {
            if (step.size() != grid.node_count()) {
                throw DimensionMismatch("variable '" + var.info.name + "' does not match the grid");
            }
        }
        catalog[role] = var.info;
        data[var.info.name] = std::move(var.values);
    }
    return Dataset(grid, std::move(time), std::move(catalog), std::make_shared<MemorySource>(std::move(data)));
}

Dataset make_generated_dataset(const RectilinearGrid3D& grid, Axis time, std::map<VariableRole, VariableInfo> catalog,
                               FieldGenerator generator) {
    std::map<std::string, VariableRole> roles;
    for (const auto& [role, info] : catalog) roles[info.name] = role;
    return Dataset(grid, std::move(time), std::move(catalog),
                   std::make_shared<GeneratorSource>(std::move(roles), std::move(generator)));
}

Dataset open_dataset(const fs::path& path, const VariableMap& map) {
    map.validate();
    if (!fs::exists(path)) throw DataError("input file " + path.string() + " does not exist");
    if (has_cdf_magic(path)) return open_netcdf(path, map);
    if (path.extension() == ".nc") {
        throw FormatError(path.string() + " is not a NetCDF classic file (NetCDF-4 is not supported)");
    }
    return open_raw(path, map);
}

ScalarField load_scalar(const Dataset& d, VariableRole role, std::size_t t) {
    const auto& info = d.variable(role);
    return ScalarField(d.grid_ptr(), info.name, info.units, d.read(role, t));
}

VectorField load_vector(const Dataset& d, std::size_t t) {
    auto u = d.read(VariableRole::u, t);
    auto v = d.read(VariableRole::v, t);
    std::vector<double> w;
    if (d.has(VariableRole::w)) w = d.read(VariableRole::w, t);
    return VectorField(d.grid_ptr(), std::move(u), std::move(v), std::move(w));
}

namespace {

std::pair<std::size_t, std::size_t> crop(const Axis& axis, const std::optional<ValueRange>& range) {
    if (!range) return {0, axis.size()};
    std::size_t first = axis.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (range->contains(axis[i])) {
            if (count == 0) first = i;
            ++count;
        }
    }
    if (count == 0) {
        throw EmptySubset("no " + axis.name() + " value in [" + std::to_string(range->lo) + ", " +
                          std::to_string(range->hi) + "]");
    }
    return {first, count};
}

Axis slice_axis(const Axis& axis, std::size_t first, std::size_t count) {
    auto v = axis.values().subspan(first, count);
    return Axis(axis.name(), std::vector<double>(v.begin(), v.end()), axis.units());
}

}  // namespace

Dataset subset(const Dataset& d, const SubsetRequest& request) {
    const auto& g = d.grid();
    const auto [i0, ni] = crop(g.lon(), request.lon);
    const auto [j0, nj] = crop(g.lat(), request.lat);
    const auto [k0, nk] = crop(g.depth(), request.depth);
    std::size_t t0 = 0;
    std::size_t nt = d.timestep_count();
    if (request.time) {
        if (request.time->first > request.time->last || request.time->first >= d.timestep_count()) {
            throw EmptySubset("time range [" + std::to_string(request.time->first) + ", " +
                              std::to_string(request.time->last) + "] selects no timestep");
        }
        t0 = request.time->first;
        nt = std::min(request.time->last, d.timestep_count() - 1) - t0 + 1;
    }
    RectilinearGrid3D grid(slice_axis(g.lon(), i0, ni), slice_axis(g.lat(), j0, nj), slice_axis(g.depth(), k0, nk), {},
                           g.frame());
    auto source = std::make_shared<SubsetSource>(d.source(), std::array{g.nx(), g.ny(), g.nz()},
                                                 std::array{i0, j0, k0}, std::array{ni, nj, nk}, t0);
    return Dataset(grid, slice_axis(d.time(), t0, nt), d.catalog(), std::move(source));
}

void write_raw(const Dataset& d, const fs::path& header, std::optional<double> fill_value) {
    const auto& g = d.grid();
    const float fill = fill_value ? static_cast<float>(*fill_value) : std::numeric_limits<float>::quiet_NaN();
    auto axis_json = [](const Axis& a) {
        return json{{"units", a.units()}, {"values", std::vector<double>(a.values().begin(), a.values().end())}};
    };
    json h;
    h["format"] = kRawFormatTag;
    h["version"] = 1;
    h["dims"] = {{"time", d.timestep_count()}, {"depth", g.nz()}, {"lat", g.ny()}, {"lon", g.nx()}};
    h["horizontal_frame"] = g.frame() == HorizontalFrame::cartesian ? "cartesian" : "geographic";
    h["axes"] = {{"lon", axis_json(g.lon())},
                 {"lat", axis_json(g.lat())},
                 {"depth", axis_json(g.depth())},
                 {"time", axis_json(d.time())}};
    h["fill_value"] = fill_value ? json(*fill_value) : json(nullptr);
    h["variables"] = json::array();
    const std::string stem = header.stem().string();
    for (const auto& [role, info] : d.catalog()) {
        const std::string file = stem + "." + info.name + ".f32";
        h["variables"].push_back(
            {{"name", info.name}, {"role", std::string(to_string(role))}, {"units", info.units}, {"file", file}});
        std::ofstream out(header.parent_path() / file, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + (header.parent_path() / file).string());
        std::vector<unsigned char> buf;
        for (std::size_t t = 0; t < d.timestep_count(); ++t) {
            const auto values = d.read(role, t);
            buf.resize(values.size() * 4);
            for (std::size_t e = 0; e < values.size(); ++e) {
                write_le_float(std::isnan(values[e]) ? fill : static_cast<float>(values[e]), buf.data() + 4 * e);
            }
            out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        }
        if (!out) throw DataError("failed writing " + file);
    }
    std::ofstream out(header, std::ios::trunc);
    if (!out) throw DataError("cannot write " + header.string());
    out << h.dump(2) << '\n';
}

}  // namespace seascape
