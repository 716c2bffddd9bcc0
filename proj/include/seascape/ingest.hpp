#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seascape/grid.hpp"

namespace seascape {

enum class VariableRole { salinity, temperature, u, v, w };

inline constexpr std::array<VariableRole, 5> kAllRoles = {VariableRole::salinity, VariableRole::temperature,
                                                          VariableRole::u, VariableRole::v, VariableRole::w};

std::string_view to_string(VariableRole role);
// Accepts role names ("salinity", "u", ...). Throws InvalidArgument.
VariableRole parse_role(std::string_view name);

// Maps physical roles and dimensions onto the names used inside a file.
struct VariableMap {
    std::string lon = "lon";
    std::string lat = "lat";
    std::string depth = "depth";
    std::string time = "time";
    std::optional<std::string> salinity = "salinity";
    std::optional<std::string> temperature = "temperature";
    std::optional<std::string> u = "u";
    std::optional<std::string> v = "v";
    std::optional<std::string> w = "w";
    std::optional<double> fill_value;

    // CMEMS/NEMO reanalysis naming: longitude/latitude/depth/time, so/thetao/uo/vo/wo.
    static VariableMap nemo();

    const std::optional<std::string>& name_of(VariableRole role) const;
    std::optional<std::string>& name_of(VariableRole role);

    // Throws InvalidArgument when two roles map to the same file variable.
    void validate() const;
};

// Parses a key-value configuration (`key = value`, `#` comments, `[section]`
// headers). At top level and in [variables] the recognized keys are lon, lat,
// depth, time, salinity, temperature, u, v, w, fill_value; an empty value unmaps a
// role. Everything else is returned in `extra`, keyed "section.key" inside a section.
struct ConfigFile {
    VariableMap map;
    std::map<std::string, std::string> extra;
};
ConfigFile parse_config(std::string_view text, VariableMap base = {});
ConfigFile load_config(const std::filesystem::path& path, VariableMap base = {});

struct VariableInfo {
    std::string name;
    std::string units;
};

// Supplies one timestep of a variable in canonical order (depth, lat, lon),
// lon fastest, with missing values already replaced by NaN. Implementations
// must be safe to call concurrently.
class VariableSource {
public:
    virtual ~VariableSource() = default;
    virtual std::vector<double> read(const std::string& name, std::size_t t) const = 0;
};

class Dataset {
public:
    // The grid's land mask is recomputed from the NaNs of the first catalogued
    // role (salinity, temperature, u, v, w order) at timestep 0.
    Dataset(const RectilinearGrid3D& grid, Axis time, std::map<VariableRole, VariableInfo> catalog,
            std::shared_ptr<const VariableSource> source);

    const RectilinearGrid3D& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    // Timestamps in seconds.
    const Axis& time() const { return time_; }
    std::size_t timestep_count() const { return time_.size(); }

    bool has(VariableRole role) const { return catalog_.contains(role); }
    const VariableInfo& variable(VariableRole role) const;
    const std::map<VariableRole, VariableInfo>& catalog() const { return catalog_; }
    const std::shared_ptr<const VariableSource>& source() const { return source_; }

    // Canonical-order values for one timestep (NaN = missing). Throws
    // MissingVariable / TimestepOutOfRange.
    std::vector<double> read(VariableRole role, std::size_t t) const;

    // Fraction of grid nodes flagged as land.
    double land_fraction() const;

private:
    GridPtr grid_;
    Axis time_;
    std::map<VariableRole, VariableInfo> catalog_;
    std::shared_ptr<const VariableSource> source_;
};

// Per-timestep arrays, canonical order, NaN for missing.
using TimeSeries = std::vector<std::vector<double>>;

struct MemoryVariable {
    VariableInfo info;
    TimeSeries values;
};

Dataset make_memory_dataset(const RectilinearGrid3D& grid, Axis time, std::map<VariableRole, MemoryVariable> vars);

// Values produced on demand by `generator(role, t)`; useful for large synthetic inputs.
using FieldGenerator = std::function<std::vector<double>(VariableRole, std::size_t)>;
Dataset make_generated_dataset(const RectilinearGrid3D& grid, Axis time, std::map<VariableRole, VariableInfo> catalog,
                               FieldGenerator generator);

// Opens a raw-format header (.json) or a NetCDF classic file (.nc and anything else
// starting with the CDF magic). Throws MissingVariable, DimensionMismatch,
// UnsortedAxis, FormatError.
Dataset open_dataset(const std::filesystem::path& path, const VariableMap& map = {});

ScalarField load_scalar(const Dataset& d, VariableRole role, std::size_t t);
// w is loaded when catalogued; otherwise the field has no vertical component.
VectorField load_vector(const Dataset& d, std::size_t t);

struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
};

// Crops every axis to the closed coordinate ranges (time by inclusive timestep
// indices). Unset ranges keep the full extent. Throws EmptySubset.
struct SubsetRequest {
    std::optional<ValueRange> lon;
    std::optional<ValueRange> lat;
    std::optional<ValueRange> depth;
    std::optional<IndexRange> time;
};
Dataset subset(const Dataset& d, const SubsetRequest& request);

// Writes `d` in the raw format: `header` (JSON) plus one little-endian float32
// file per variable next to it, named <stem>.<variable>.f32.
void write_raw(const Dataset& d, const std::filesystem::path& header, std::optional<double> fill_value = std::nullopt);

}  // namespace seascape
