#include "seascape/netcdf_classic.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>

#include "seascape/error.hpp"

namespace seascape::netcdf {

namespace {

constexpr std::uint32_t kTagDimension = 0x0A;
constexpr std::uint32_t kTagVariable = 0x0B;
constexpr std::uint32_t kTagAttribute = 0x0C;
constexpr std::uint32_t kStreamingRecords = 0xFFFFFFFFu;

std::size_t padded4(std::size_t n) { return (n + 3) & ~std::size_t{3}; }

template <typename T>
T from_big_endian(const unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
                                 std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                    std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
        u = static_cast<U>((u << 8) | p[b]);
    }
    return std::bit_cast<T>(u);
}

template <typename T>
void to_big_endian(T value, unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
                                 std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                    std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U u = std::bit_cast<U>(value);
    for (std::size_t b = sizeof(T); b-- > 0;) {
        p[b] = static_cast<unsigned char>(u & 0xFF);
        u = static_cast<U>(u >> 8);
    }
}

double decode(Type type, const unsigned char* p) {
    switch (type) {
        case Type::byte: return static_cast<double>(static_cast<std::int8_t>(p[0]));
        case Type::character: return static_cast<double>(p[0]);
        case Type::short_int: return from_big_endian<std::int16_t>(p);
        case Type::int32: return from_big_endian<std::int32_t>(p);
        case Type::float32: return from_big_endian<float>(p);
        case Type::float64: return from_big_endian<double>(p);
    }
    return 0.0;
}

void encode(Type type, double value, unsigned char* p) {
    switch (type) {
        case Type::byte: p[0] = static_cast<unsigned char>(static_cast<std::int8_t>(std::lround(value))); break;
        case Type::character: p[0] = static_cast<unsigned char>(value); break;
        case Type::short_int: to_big_endian(static_cast<std::int16_t>(std::lround(value)), p); break;
        case Type::int32: to_big_endian(static_cast<std::int32_t>(std::lround(value)), p); break;
        case Type::float32: to_big_endian(static_cast<float>(value), p); break;
        case Type::float64: to_big_endian(value, p); break;
    }
}

Type checked_type(std::int32_t raw) {
    if (raw < 1 || raw > 6) {
        throw FormatError("unsupported NetCDF data type " + std::to_string(raw));
    }
    return static_cast<Type>(raw);
}

class HeaderReader {
public:
    explicit HeaderReader(std::istream& in, const std::filesystem::path& path) : in_(in), path_(path) {}

    void bytes(unsigned char* out, std::size_t n) {
        in_.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(n));
        if (!in_) throw FormatError("truncated NetCDF header in " + path_.string());
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(b, 4);
        return from_big_endian<std::uint32_t>(b);
    }
    std::uint64_t u64() {
        unsigned char b[8];
        bytes(b, 8);
        return from_big_endian<std::uint64_t>(b);
    }
    std::string name() {
        const std::uint32_t n = u32();
        if (n > (1u << 20)) throw FormatError("implausible name length in " + path_.string());
        std::string s(padded4(n), '\0');
        bytes(reinterpret_cast<unsigned char*>(s.data()), s.size());
        s.resize(n);
        return s;
    }
    std::vector<Attribute> attributes() {
        const std::uint32_t tag = u32();
        const std::uint32_t count = u32();
        if (tag == 0 && count == 0) return {};
        if (tag != kTagAttribute) throw FormatError("expected attribute list in " + path_.string());
        std::vector<Attribute> out(count);
        for (auto& a : out) {
            a.name = name();
            a.type = checked_type(static_cast<std::int32_t>(u32()));
            const std::uint32_t n = u32();
            const std::size_t sz = type_size(a.type);
            std::vector<unsigned char> raw(padded4(n * sz));
            bytes(raw.data(), raw.size());
            if (a.type == Type::character) {
                a.text.assign(reinterpret_cast<const char*>(raw.data()), n);
                while (!a.text.empty() && a.text.back() == '\0') a.text.pop_back();
            } else {
                a.numbers.resize(n);
                for (std::uint32_t e = 0; e < n; ++e) a.numbers[e] = decode(a.type, raw.data() + e * sz);
            }
        }
        return out;
    }

private:
    std::istream& in_;
    const std::filesystem::path& path_;
};

}  // namespace

std::size_t type_size(Type type) {
    switch (type) {
        case Type::byte:
        case Type::character: return 1;
        case Type::short_int: return 2;
        case Type::int32:
        case Type::float32: return 4;
        case Type::float64: return 8;
    }
    return 0;
}

const Attribute* Variable::attribute(std::string_view attr_name) const {
    for (const auto& a : attributes) {
        if (a.name == attr_name) return &a;
    }
    return nullptr;
}

File::File(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw DataError("cannot open " + path_.string());
    HeaderReader r(in, path_);
    unsigned char magic[4];
    r.bytes(magic, 4);
    if (magic[0] != 'C' || magic[1] != 'D' || magic[2] != 'F') {
        throw FormatError(path_.string() + " is not a NetCDF classic file");
    }
    if (magic[3] != 1 && magic[3] != 2) {
        throw FormatError(path_.string() + ": unsupported NetCDF format version " + std::to_string(magic[3]));
    }
    version_ = magic[3];
    const std::uint32_t numrecs = r.u32();

    std::uint32_t tag = r.u32();
    std::uint32_t count = r.u32();
    if (!(tag == 0 && count == 0)) {
        if (tag != kTagDimension) throw FormatError("expected dimension list in " + path_.string());
        dims_.resize(count);
        for (auto& d : dims_) {
            d.name = r.name();
            d.length = r.u32();
            d.unlimited = d.length == 0;
        }
    }
    global_attributes_ = r.attributes();

    tag = r.u32();
    count = r.u32();
    if (!(tag == 0 && count == 0)) {
        if (tag != kTagVariable) throw FormatError("expected variable list in " + path_.string());
        vars_.resize(count);
        for (auto& v : vars_) {
            v.name = r.name();
            const std::uint32_t ndims = r.u32();
            v.dim_ids.resize(ndims);
            for (auto& id : v.dim_ids) {
                id = r.u32();
                if (id >= dims_.size()) throw FormatError("variable '" + v.name + "' references unknown dimension");
            }
            v.attributes = r.attributes();
            v.type = checked_type(static_cast<std::int32_t>(r.u32()));
            v.vsize = r.u32();
            v.begin = version_ == 1 ? r.u32() : r.u64();
            v.is_record = !v.dim_ids.empty() && dims_[v.dim_ids.front()].unlimited;
        }
    }

    if (numrecs == kStreamingRecords) {
        // Derive the record count from the file size.
        const auto size = std::filesystem::file_size(path_);
        std::uint64_t first = 0;
        bool any = false;
        for (const auto& v : vars_) {
            if (v.is_record && (!any || v.begin < first)) {
                first = v.begin;
                any = true;
            }
        }
        const std::uint64_t stride = any ? record_stride() : 0;
        numrecs_ = stride ? static_cast<std::size_t>((size - first) / stride) : 0;
    } else {
        numrecs_ = numrecs;
    }
    for (auto& d : dims_) {
        if (d.unlimited) d.length = numrecs_;
    }
}

const Variable* File::find_variable(std::string_view name) const {
    for (const auto& v : vars_) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

std::optional<std::size_t> File::find_dimension(std::string_view name) const {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i].name == name) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> File::shape(const Variable& var) const {
    std::vector<std::size_t> out;
    for (auto id : var.dim_ids) out.push_back(id < dims_.size() ? dims_[id].length : 0);
    return out;
}

std::uint64_t File::record_stride() const {
    std::uint64_t stride = 0;
    std::size_t record_vars = 0;
    const Variable* only = nullptr;
    for (const auto& v : vars_) {
        if (!v.is_record) continue;
        stride += v.vsize;
        ++record_vars;
        only = &v;
    }
    if (record_vars == 1) {
        // A lone record variable is stored without per-record padding.
        std::uint64_t n = type_size(only->type);
        for (std::size_t d = 1; d < only->dim_ids.size(); ++d) n *= dims_[only->dim_ids[d]].length;
        return n;
    }
    return stride;
}

std::vector<double> File::read_outer_slab(const Variable& var, std::size_t outer_index) const {
    const auto shp = shape(var);
    if (shp.empty()) {
        if (outer_index != 0) throw InvalidArgument("scalar variable has no outer dimension");
        return read_all(var);
    }
    if (outer_index >= shp.front()) {
        throw InvalidArgument("index " + std::to_string(outer_index) + " out of range for '" + var.name + "'");
    }
    std::size_t inner = 1;
    for (std::size_t d = 1; d < shp.size(); ++d) inner *= shp[d];
    const std::size_t sz = type_size(var.type);
    const std::uint64_t offset = var.is_record ? var.begin + outer_index * record_stride()
                                               : var.begin + static_cast<std::uint64_t>(outer_index) * inner * sz;
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw DataError("cannot open " + path_.string());
    in.seekg(static_cast<std::streamoff>(offset));
    std::vector<unsigned char> raw(inner * sz);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw FormatError("truncated data for variable '" + var.name + "' in " + path_.string());
    std::vector<double> out(inner);
    for (std::size_t e = 0; e < inner; ++e) out[e] = decode(var.type, raw.data() + e * sz);
    return out;
}

std::vector<double> File::read_all(const Variable& var) const {
    const auto shp = shape(var);
    if (shp.empty()) {
        std::ifstream in(path_, std::ios::binary);
        in.seekg(static_cast<std::streamoff>(var.begin));
        unsigned char raw[8] = {};
        in.read(reinterpret_cast<char*>(raw), static_cast<std::streamsize>(type_size(var.type)));
        if (!in) throw FormatError("truncated data for variable '" + var.name + "'");
        return {decode(var.type, raw)};
    }
    std::vector<double> out;
    for (std::size_t t = 0; t < shp.front(); ++t) {
        auto slab = read_outer_slab(var, t);
        out.insert(out.end(), slab.begin(), slab.end());
    }
    return out;
}

Attribute text_attribute(std::string name, std::string text) {
    Attribute a;
    a.name = std::move(name);
    a.type = Type::character;
    a.text = std::move(text);
    return a;
}

Attribute number_attribute(std::string name, Type type, double value) {
    Attribute a;
    a.name = std::move(name);
    a.type = type;
    a.numbers = {value};
    return a;
}

namespace {

class ByteWriter {
public:
    std::vector<unsigned char> buf;

    void u32(std::uint32_t v) {
        unsigned char b[4];
        to_big_endian(v, b);
        buf.insert(buf.end(), b, b + 4);
    }
    void u64(std::uint64_t v) {
        unsigned char b[8];
        to_big_endian(v, b);
        buf.insert(buf.end(), b, b + 8);
    }
    void pad() {
        while (buf.size() % 4) buf.push_back(0);
    }
    void name(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf.insert(buf.end(), s.begin(), s.end());
        pad();
    }
    void attributes(std::span<const Attribute> attrs) {
        if (attrs.empty()) {
            u32(0);
            u32(0);
            return;
        }
        u32(kTagAttribute);
        u32(static_cast<std::uint32_t>(attrs.size()));
        for (const auto& a : attrs) {
            name(a.name);
            u32(static_cast<std::uint32_t>(a.type));
            if (a.type == Type::character) {
                u32(static_cast<std::uint32_t>(a.text.size()));
                buf.insert(buf.end(), a.text.begin(), a.text.end());
            } else {
                u32(static_cast<std::uint32_t>(a.numbers.size()));
                const std::size_t sz = type_size(a.type);
                for (double x : a.numbers) {
                    unsigned char b[8];
                    encode(a.type, x, b);
                    buf.insert(buf.end(), b, b + sz);
                }
            }
            pad();
        }
    }
};

}  // namespace

void write_file(const std::filesystem::path& path, std::span<const WriteDimension> dims,
                std::span<const Attribute> global_attributes, std::span<const WriteVariable> vars, bool offset64) {
    auto dim_id = [&](const std::string& n) -> std::size_t {
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (dims[i].name == n) return i;
        }
        throw InvalidArgument("unknown dimension '" + n + "'");
    };
    std::size_t numrecs = 0;
    for (const auto& d : dims) {
        if (d.unlimited) numrecs = d.length;
    }

    struct Layout {
        std::vector<std::size_t> ids;
        bool record = false;
        std::size_t slab = 0;  // elements per record (or total for fixed vars)
        std::uint64_t vsize = 0;
        std::uint64_t begin = 0;
    };
    std::vector<Layout> layout(vars.size());
    std::size_t record_vars = 0;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        auto& l = layout[v];
        std::size_t total = 1;
        for (std::size_t d = 0; d < vars[v].dims.size(); ++d) {
            const std::size_t id = dim_id(vars[v].dims[d]);
            l.ids.push_back(id);
            if (dims[id].unlimited) {
                if (d != 0) throw InvalidArgument("unlimited dimension must come first");
                l.record = true;
            } else {
                l.slab = (l.slab ? l.slab : 1) * dims[id].length;
            }
            total *= dims[id].length;
        }
        if (l.slab == 0) l.slab = 1;
        if (vars[v].data.size() != total) {
            throw InvalidArgument("variable '" + vars[v].name + "' has " + std::to_string(vars[v].data.size()) +
                                  " values, expected " + std::to_string(total));
        }
        l.vsize = padded4(l.slab * type_size(vars[v].type));
        record_vars += l.record;
    }

    auto header = [&](bool final_pass) {
        ByteWriter w;
        w.buf = {'C', 'D', 'F', static_cast<unsigned char>(offset64 ? 2 : 1)};
        w.u32(static_cast<std::uint32_t>(numrecs));
        if (dims.empty()) {
            w.u32(0);
            w.u32(0);
        } else {
            w.u32(kTagDimension);
            w.u32(static_cast<std::uint32_t>(dims.size()));
            for (const auto& d : dims) {
                w.name(d.name);
                w.u32(d.unlimited ? 0u : static_cast<std::uint32_t>(d.length));
            }
        }
        w.attributes(global_attributes);
        if (vars.empty()) {
            w.u32(0);
            w.u32(0);
        } else {
            w.u32(kTagVariable);
            w.u32(static_cast<std::uint32_t>(vars.size()));
            for (std::size_t v = 0; v < vars.size(); ++v) {
                w.name(vars[v].name);
                w.u32(static_cast<std::uint32_t>(layout[v].ids.size()));
                for (auto id : layout[v].ids) w.u32(static_cast<std::uint32_t>(id));
                w.attributes(vars[v].attributes);
                w.u32(static_cast<std::uint32_t>(vars[v].type));
                w.u32(static_cast<std::uint32_t>(layout[v].vsize));
                if (offset64) {
                    w.u64(final_pass ? layout[v].begin : 0);
                } else {
                    w.u32(static_cast<std::uint32_t>(final_pass ? layout[v].begin : 0));
                }
            }
        }
        return w.buf;
    };

    std::uint64_t offset = header(false).size();
    for (auto& l : layout) {
        if (!l.record) {
            l.begin = offset;
            offset += l.vsize;
        }
    }
    const std::uint64_t record_start = offset;
    std::uint64_t record_stride = 0;
    for (auto& l : layout) {
        if (l.record) {
            l.begin = record_start + record_stride;
            record_stride += l.vsize;
        }
    }
    if (record_vars == 1) {
        for (std::size_t v = 0; v < vars.size(); ++v) {
            if (layout[v].record) record_stride = layout[v].slab * type_size(vars[v].type);
        }
    }

    std::vector<unsigned char> out = header(true);
    out.resize(record_start + record_stride * numrecs, 0);
    for (std::size_t v = 0; v < vars.size(); ++v) {
        const auto& l = layout[v];
        const std::size_t sz = type_size(vars[v].type);
        const std::size_t outer = l.record ? numrecs : 1;
        for (std::size_t r = 0; r < outer; ++r) {
            const std::uint64_t base = l.begin + r * record_stride;
            for (std::size_t e = 0; e < l.slab; ++e) {
                encode(vars[v].type, vars[v].data[r * l.slab + e], out.data() + base + e * sz);
            }
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw DataError("failed writing " + path.string());
}

}  // namespace seascape::netcdf
