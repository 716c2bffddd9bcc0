#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

// Reader and writer for the NetCDF classic (CDF-1) and 64-bit offset (CDF-2) formats.
// NetCDF-4/HDF5 files are not supported.
namespace seascape::netcdf {

enum class Type : std::int32_t {
    byte = 1,
    character = 2,
    short_int = 3,
    int32 = 4,
    float32 = 5,
    float64 = 6,
};

std::size_t type_size(Type type);

struct Dimension {
    std::string name;
    std::size_t length = 0;  // current record count for the unlimited dimension
    bool unlimited = false;
};

struct Attribute {
    std::string name;
    Type type = Type::character;
    std::string text;             // Type::character
    std::vector<double> numbers;  // numeric types

    std::optional<double> number() const {
        if (numbers.empty()) return std::nullopt;
        return numbers.front();
    }
};

struct Variable {
    std::string name;
    std::vector<std::size_t> dim_ids;
    std::vector<Attribute> attributes;
    Type type = Type::float32;
    std::uint64_t vsize = 0;
    std::uint64_t begin = 0;
    bool is_record = false;

    const Attribute* attribute(std::string_view attr_name) const;
};

class File {
public:
    // Parses the header. Throws FormatError on malformed or unsupported files.
    explicit File(std::filesystem::path path);

    const std::filesystem::path& path() const { return path_; }
    const std::vector<Dimension>& dimensions() const { return dims_; }
    const std::vector<Attribute>& attributes() const { return global_attributes_; }
    const std::vector<Variable>& variables() const { return vars_; }
    std::size_t record_count() const { return numrecs_; }

    const Variable* find_variable(std::string_view name) const;
    std::optional<std::size_t> find_dimension(std::string_view name) const;
    std::vector<std::size_t> shape(const Variable& var) const;

    // Reads var[outer_index, ...] where outer_index selects along the first dimension,
    // returning the remaining dimensions in row-major order. Values are unconverted
    // (no fill or scale handling).
    std::vector<double> read_outer_slab(const Variable& var, std::size_t outer_index) const;
    std::vector<double> read_all(const Variable& var) const;

private:
    std::uint64_t record_stride() const;

    std::filesystem::path path_;
    int version_ = 1;
    std::size_t numrecs_ = 0;
    std::vector<Dimension> dims_;
    std::vector<Attribute> global_attributes_;
    std::vector<Variable> vars_;
};

// Writer input. Data is given in row-major order of `dims` and converted to `type`.
struct WriteVariable {
    std::string name;
    std::vector<std::string> dims;
    Type type = Type::float32;
    std::vector<Attribute> attributes;
    std::vector<double> data;
};

struct WriteDimension {
    std::string name;
    std::size_t length = 0;  // record count when unlimited
    bool unlimited = false;
};

// Writes a CDF-1 file (CDF-2 when `offset64`).
void write_file(const std::filesystem::path& path, std::span<const WriteDimension> dims,
                std::span<const Attribute> global_attributes, std::span<const WriteVariable> vars,
                bool offset64 = false);

Attribute text_attribute(std::string name, std::string text);
Attribute number_attribute(std::string name, Type type, double value);

}  // namespace seascape::netcdf
