#include "seascape/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "seascape/eddy.hpp"
#include "seascape/error.hpp"
#include "seascape/export.hpp"
#include "seascape/fields.hpp"
#include "seascape/fronts.hpp"
#include "seascape/ingest.hpp"
#include "seascape/profile.hpp"
#include "seascape/tracer.hpp"

namespace seascape {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config;
    bool nemo = false;
    unsigned jobs = 0;
    std::uint64_t rng_seed = 0;
};

// Output file with a clear error on failure.
class OutputFile {
public:
    explicit OutputFile(const fs::path& path) : path_(path), os_(path, std::ios::binary) {
        if (!os_) throw DataError("cannot write '" + path.string() + "'");
    }
    std::ostream& stream() { return os_; }
    void close() {
        os_.close();
        if (!os_) throw DataError("failed writing '" + path_.string() + "'");
    }

private:
    fs::path path_;
    std::ofstream os_;
};

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
    OutputFile f(path);
    fn(f.stream());
    f.close();
}

fs::path with_suffix(const std::string& prefix, const char* suffix) { return fs::path(prefix + suffix); }

ConfigFile load_globals_config(const Globals& g) {
    const VariableMap base = g.nemo ? VariableMap::nemo() : VariableMap{};
    if (g.config.empty()) return {base, {}};
    if (!fs::exists(g.config)) throw DataError("config file '" + g.config + "' not found");
    return load_config(g.config, base);
}

Dataset open_input(const std::string& input, const VariableMap& map) {
    if (!fs::exists(input)) throw DataError("input '" + input + "' not found");
    return open_dataset(input, map);
}

std::size_t check_timestep(const Dataset& d, std::size_t t) {
    if (t >= d.timestep_count())
        throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range (dataset has " +
                                 std::to_string(d.timestep_count()) + ")");
    return t;
}

std::vector<VariableRole> parse_roles(const std::vector<std::string>& names) {
    std::vector<VariableRole> roles;
    for (const auto& n : names) roles.push_back(parse_role(n));
    return roles;
}

// A scalar by role name or derived-field kind.
ScalarField scalar_by_name(const Dataset& d, const std::string& name, std::size_t t, unsigned jobs) {
    for (const auto role : kAllRoles)
        if (name == to_string(role)) return load_scalar(d, role, t);
    return derive(load_vector(d, t), parse_derived_field_kind(name), jobs);
}

MaskPolicy parse_mask_policy(const std::string& s) {
    if (s == "reject") return MaskPolicy::reject;
    if (s == "nearest" || s == "nearest-valid" || s == "nearest_valid") return MaskPolicy::nearest_valid;
    throw InvalidArgument("unknown mask policy '" + s + "'");
}

IntegrationDirection parse_direction(const std::string& s) {
    if (s == "forward") return IntegrationDirection::forward;
    if (s == "backward") return IntegrationDirection::backward;
    if (s == "both") return IntegrationDirection::both;
    throw InvalidArgument("unknown direction '" + s + "'");
}

// "role:lo:hi"
RangeConstraint parse_constraint(const std::string& text, const Dataset& d, std::size_t t, unsigned jobs,
                                 std::vector<std::unique_ptr<ScalarField>>& storage) {
    const auto a = text.find(':');
    const auto b = text.rfind(':');
    if (a == std::string::npos || a == b) throw InvalidArgument("constraint '" + text + "' is not name:lo:hi");
    double lo = 0.0, hi = 0.0;
    try {
        lo = std::stod(text.substr(a + 1, b - a - 1));
        hi = std::stod(text.substr(b + 1));
    } catch (const std::exception&) {
        throw InvalidArgument("constraint '" + text + "' has a non-numeric bound");
    }
    storage.push_back(std::make_unique<ScalarField>(scalar_by_name(d, text.substr(0, a), t, jobs)));
    return {storage.back().get(), {lo, hi}};
}

// Options not given on the command line take "<command>.<option>" values from the config file.
void apply_config_defaults(CLI::App& app, const std::vector<std::string>& args) {
    std::string config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    }
    if (config.empty() || !fs::exists(config)) return;
    const auto extra = load_config(config).extra;
    for (auto* sub : app.get_subcommands({})) {
        for (auto* opt : sub->get_options()) {
            const auto& names = opt->get_lnames();
            if (names.empty()) continue;
            const auto it = extra.find(sub->get_name() + "." + names.front());
            if (it == extra.end()) continue;
            opt->required(false);
            if (opt->get_type_size() == 0) {
                opt->default_str(it->second);
                if (it->second == "true" || it->second == "1") opt->add_result("true");
            } else {
                opt->default_val(it->second);
            }
        }
    }
}

int cmd_info(const Globals& g, const std::string& input, std::ostream& out) {
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(input, cfg.map);
    const auto& grid = d.grid();
    auto axis_line = [&](const char* label, const Axis& a) {
        out << label << ": " << a.size() << " [" << format_number(a.front()) << ", " << format_number(a.back())
            << "]" << (a.units().empty() ? "" : " " + a.units()) << '\n';
    };
    out << "input: " << input << '\n';
    out << "frame: " << (grid.frame() == HorizontalFrame::geographic ? "geographic" : "cartesian") << '\n';
    axis_line("lon", grid.lon());
    axis_line("lat", grid.lat());
    axis_line("depth", grid.depth());
    out << "time: " << d.timestep_count() << " steps [" << format_number(d.time().front()) << ", "
        << format_number(d.time().back()) << "] s\n";
    out << "variables:\n";
    for (const auto& [role, info] : d.catalog())
        out << "  " << to_string(role) << " = " << info.name << (info.units.empty() ? "" : " (" + info.units + ")")
            << '\n';
    out << "land_fraction: " << format_number(d.land_fraction()) << '\n';
    return kExitOk;
}

struct DeriveArgs {
    std::string input, output;
    std::vector<std::string> kinds{"okubo_weiss"};
    std::size_t t = 0;
};

int cmd_derive(const Globals& g, const DeriveArgs& a, std::ostream& out) {
    std::vector<DerivedFieldKind> kinds;
    for (const auto& k : a.kinds) kinds.push_back(parse_derived_field_kind(k));
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(a.input, cfg.map);
    const auto vf = load_vector(d, check_timestep(d, a.t));
    std::vector<ScalarField> fields;
    for (const auto k : kinds) fields.push_back(derive(vf, k, g.jobs));
    std::vector<const ScalarField*> ptrs;
    for (const auto& f : fields) ptrs.push_back(&f);
    write_file(a.output, [&](std::ostream& os) { write_vtk_fields(os, ptrs); });
    out << "wrote " << a.output << '\n';
    return kExitOk;
}

struct TraceArgs {
    std::string input, output;
    std::string seeding = "uniform";
    std::size_t count = 100;
    std::size_t t = 0;
    bool pathlines = false;
    std::string weight = "okubo_weiss";
    std::string transform = "absolute";
    std::vector<std::string> constraints;
    double step = 1000.0;
    std::size_t max_steps = 1000;
    double min_speed = 1e-6;
    std::string direction = "forward";
    bool vertical = false;
    std::string mask_policy = "reject";
    std::vector<std::string> attach;
};

int cmd_trace(const Globals& g, const TraceArgs& a, std::ostream& out) {
    IntegrationParams p;
    p.step_length = a.step;
    p.max_steps = a.max_steps;
    p.min_speed = a.min_speed;
    p.direction = parse_direction(a.direction);
    p.include_vertical = a.vertical;
    p.mask_policy = parse_mask_policy(a.mask_policy);
    p.validate();
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(a.input, cfg.map);
    check_timestep(d, a.t);

    std::vector<Seed> seeds;
    if (a.seeding == "uniform") {
        seeds = seed_uniform(d.grid(), a.count, g.rng_seed);
    } else if (a.seeding == "weighted") {
        seeds = seed_weighted(scalar_by_name(d, a.weight, a.t, g.jobs), a.count, g.rng_seed,
                              parse_weight_transform(a.transform));
    } else if (a.seeding == "isovolume") {
        if (a.constraints.empty()) throw InvalidArgument("isovolume seeding needs at least one --constraint");
        std::vector<std::unique_ptr<ScalarField>> storage;
        std::vector<RangeConstraint> cs;
        for (const auto& c : a.constraints) cs.push_back(parse_constraint(c, d, a.t, g.jobs, storage));
        seeds = seed_in_isovolume(cs, a.count, g.rng_seed);
    } else {
        throw InvalidArgument("unknown seeding '" + a.seeding + "'");
    }
    for (auto& s : seeds) s.birth_time = static_cast<double>(a.t);

    std::vector<FieldLine> lines;
    if (a.pathlines) {
        const UnsteadyVectorField field(d);
        lines = integrate_pathlines(field, seeds, p, g.jobs);
    } else {
        lines = integrate_streamlines(load_vector(d, a.t), seeds, p, g.jobs);
    }
    for (const auto& name : a.attach) {
        const auto f = scalar_by_name(d, name, a.t, g.jobs);
        for (auto& l : lines) attach_scalar(l, f);
    }
    write_file(a.output, [&](std::ostream& os) { write_vtk_polylines(os, lines, a.pathlines ? "pathlines" : "streamlines"); });
    out << "wrote " << lines.size() << (a.pathlines ? " pathlines" : " streamlines") << " to " << a.output << '\n';
    return kExitOk;
}

struct EddyArgs {
    std::string input, output;
    std::size_t t = 0;
    double persistence = 0.0;
    double r_max = 250e3;
    int iterations = 12;
    bool no_boundary = false;
    std::optional<std::size_t> depth_index;
};

int cmd_eddies(const Globals& g, const EddyArgs& a, std::ostream& out, std::ostream& err) {
    EddyParams p;
    p.persistence_threshold = a.persistence;
    p.boundary.r_max = a.r_max;
    p.boundary.iterations = a.iterations;
    p.compute_boundary = !a.no_boundary;
    p.jobs = g.jobs;
    const auto cfg = load_globals_config(g);
    Dataset d = open_input(a.input, cfg.map);
    check_timestep(d, a.t);
    if (a.depth_index) {
        if (*a.depth_index >= d.grid().nz()) throw InvalidArgument("depth index out of range");
        SubsetRequest r;
        const double z = d.grid().depth()[*a.depth_index];
        r.depth = ValueRange{z, z};
        d = subset(d, r);
    }
    const auto vf = load_vector(d, a.t);
    const auto eddies = detect_eddies_3d(vf, p);
    const double time = d.time()[a.t];
    write_file(with_suffix(a.output, ".json"),
               [&](std::ostream& os) { os << eddies_to_json(eddies, time).dump(2) << '\n'; });
    write_file(with_suffix(a.output, ".csv"), [&](std::ostream& os) { write_eddy_csv(os, eddies, time); });
    std::vector<FieldLine> lines;
    for (const auto& e : eddies)
        for (const auto& lvl : e.levels)
            for (const auto& pl : lvl.lines) lines.push_back(pl.line);
    write_file(with_suffix(a.output, ".vtk"), [&](std::ostream& os) { write_vtk_polylines(os, lines, "eddy profiles"); });
    for (const auto& e : eddies)
        for (const auto& msg : e.diagnostics) err << "note: " << msg << '\n';
    out << eddies.size() << " eddies written to " << a.output << ".{json,csv,vtk}\n";
    return eddies.empty() ? kExitEmpty : kExitOk;
}

struct FrontArgs {
    std::string input, output;
    std::string variable = "salinity";
    std::vector<double> range;
    std::vector<std::size_t> t_range;
    std::size_t min_length = 1;
    double jaccard = 0.0;
};

int cmd_fronts(const Globals& g, const FrontArgs& a, std::ostream& out) {
    if (a.range.size() != 2 || a.range[0] > a.range[1]) throw InvalidArgument("--range needs lo <= hi");
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(a.input, cfg.map);
    IndexRange tr{0, d.timestep_count() - 1};
    if (!a.t_range.empty()) {
        if (a.t_range.size() != 2 || a.t_range[0] > a.t_range[1]) throw InvalidArgument("--t-range needs first <= last");
        tr = {a.t_range[0], a.t_range[1]};
    }
    FrontParams p;
    p.range = {a.range[0], a.range[1]};
    p.min_jaccard = a.jaccard;
    p.jobs = g.jobs;
    const auto graph = build_track_graph(d, parse_role(a.variable), tr, p);
    const auto tracks = extract_tracks(graph, a.min_length);
    write_file(with_suffix(a.output, ".json"),
               [&](std::ostream& os) { os << track_graph_to_json(graph, tracks, d.time()).dump(2) << '\n'; });
    write_file(with_suffix(a.output, ".csv"), [&](std::ostream& os) { write_tracks_csv(os, graph, tracks, d.time()); });
    write_file(with_suffix(a.output, ".vtk"), [&](std::ostream& os) { write_vtk_tracks(os, graph, tracks); });
    out << graph.node_count() << " fronts, " << graph.edges.size() << " edges, " << tracks.size()
        << " tracks written to " << a.output << ".{json,csv,vtk}\n";
    return tracks.empty() ? kExitEmpty : kExitOk;
}

struct ProfileArgs {
    std::string input, output;
    double lon = 0.0, lat = 0.0;
    std::size_t t = 0;
    std::vector<std::string> variables{"temperature", "salinity"};
    bool nearest = false;
    std::string mask_policy = "reject";
};

int cmd_profile(const Globals& g, const ProfileArgs& a, std::ostream& out) {
    const auto roles = parse_roles(a.variables);
    const auto policy = parse_mask_policy(a.mask_policy);
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(a.input, cfg.map);
    const auto p = depth_profile(d, a.lon, a.lat, check_timestep(d, a.t), roles,
                                 a.nearest ? NeedleMode::nearest_column : NeedleMode::interpolated, policy);
    write_file(a.output, [&](std::ostream& os) { write_profile_csv(os, p); });
    out << p.rows.size() << " levels written to " << a.output << '\n';
    return kExitOk;
}

struct SliceArgs {
    std::string input, output;
    double lon = 0.0;
    std::size_t t = 0;
    std::string variable = "temperature";
    bool nearest = false;
};

int cmd_slice(const Globals& g, const SliceArgs& a, std::ostream& out) {
    const auto role = parse_role(a.variable);
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(a.input, cfg.map);
    const auto s = vertical_slice(d, a.lon, check_timestep(d, a.t), role,
                                  a.nearest ? NeedleMode::nearest_column : NeedleMode::interpolated);
    write_file(a.output, [&](std::ostream& os) { write_vtk_vertical_slice(os, s, a.variable); });
    out << "wrote " << a.output << '\n';
    return kExitOk;
}

struct IsoArgs {
    std::string input, output;
    std::string variable = "temperature";
    double iso = 27.0;
    std::size_t t = 0;
};

int cmd_isodepth(const Globals& g, const IsoArgs& a, std::ostream& out) {
    const auto role = parse_role(a.variable);
    const auto cfg = load_globals_config(g);
    const Dataset d = open_input(a.input, cfg.map);
    const auto m = isosurface_depth(d, role, a.iso, check_timestep(d, a.t));
    write_file(a.output, [&](std::ostream& os) { write_vtk_depth_map(os, m, a.variable + "_iso_depth"); });
    std::size_t present = 0;
    for (const auto v : m.present) present += v;
    out << present << " of " << m.present.size() << " columns cross " << format_number(a.iso) << ", wrote "
        << a.output << '\n';
    return present == 0 ? kExitEmpty : kExitOk;
}

struct ConvertArgs {
    std::string input, output;
    std::vector<double> lon, lat, depth;
    std::vector<std::size_t> t_range;
};

int cmd_convert(const Globals& g, const ConvertArgs& a, std::ostream& out) {
    auto range = [](const std::vector<double>& v, const char* name) -> std::optional<ValueRange> {
        if (v.empty()) return std::nullopt;
        if (v.size() != 2 || v[0] > v[1]) throw InvalidArgument(std::string("--") + name + " needs lo <= hi");
        return ValueRange{v[0], v[1]};
    };
    SubsetRequest r;
    r.lon = range(a.lon, "lon");
    r.lat = range(a.lat, "lat");
    r.depth = range(a.depth, "depth");
    if (!a.t_range.empty()) {
        if (a.t_range.size() != 2 || a.t_range[0] > a.t_range[1]) throw InvalidArgument("--t-range needs first <= last");
        r.time = IndexRange{a.t_range[0], a.t_range[1]};
    }
    const auto cfg = load_globals_config(g);
    const Dataset d = subset(open_input(a.input, cfg.map), r);
    write_raw(d, a.output, cfg.map.fill_value);
    out << "wrote " << d.grid().nx() << "x" << d.grid().ny() << "x" << d.grid().nz() << "x" << d.timestep_count()
        << " to " << a.output << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"seascape: analysis of gridded ocean model output", "seascape"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "Key-value config: variable mapping and per-command defaults");
    app.add_flag("--nemo", g.nemo, "Start from the NEMO/CMEMS variable naming");
    app.add_option("--jobs,-j", g.jobs, "Worker threads (0 = all cores)");
    app.add_option("--rng-seed", g.rng_seed, "Seed for randomized seeding");

    std::string info_input;
    auto* info = app.add_subcommand("info", "Summarize a dataset");
    info->add_option("input", info_input)->required();

    DeriveArgs da;
    auto* derive_cmd = app.add_subcommand("derive", "Compute derived flow fields to VTK");
    derive_cmd->add_option("input", da.input)->required();
    derive_cmd->add_option("--kind,-k", da.kinds, "speed, speed_horizontal, vorticity_z, curl_magnitude, okubo_weiss");
    derive_cmd->add_option("--t,-t", da.t, "Timestep index");
    derive_cmd->add_option("--output,-o", da.output)->required();

    TraceArgs ta;
    auto* trace = app.add_subcommand("trace", "Seed and integrate streamlines or pathlines");
    trace->add_option("input", ta.input)->required();
    trace->add_option("--output,-o", ta.output)->required();
    trace->add_option("--seeding", ta.seeding, "uniform, weighted, isovolume");
    trace->add_option("--count,-n", ta.count);
    trace->add_option("--t,-t", ta.t, "Timestep index (birth time for pathlines)");
    trace->add_flag("--pathlines", ta.pathlines);
    trace->add_option("--weight", ta.weight, "Weight field: variable role or derived kind");
    trace->add_option("--transform", ta.transform, "absolute, positive-part, negative-part");
    trace->add_option("--constraint", ta.constraints, "name:lo:hi, repeatable");
    trace->add_option("--step", ta.step, "Step length in meters");
    trace->add_option("--max-steps", ta.max_steps);
    trace->add_option("--min-speed", ta.min_speed);
    trace->add_option("--direction", ta.direction, "forward, backward, both");
    trace->add_flag("--vertical", ta.vertical, "Use w");
    trace->add_option("--mask-policy", ta.mask_policy, "reject, nearest");
    trace->add_option("--attach", ta.attach, "Scalars to sample along lines");

    EddyArgs ea;
    std::size_t depth_index = 0;
    auto* eddies = app.add_subcommand("eddies", "Detect eddies and their boundaries");
    eddies->add_option("input", ea.input)->required();
    eddies->add_option("--output,-o", ea.output, "Output prefix")->required();
    eddies->add_option("--t,-t", ea.t);
    eddies->add_option("--persistence", ea.persistence, "Speed persistence threshold (m/s)");
    eddies->add_option("--r-max", ea.r_max, "Boundary search radius (m)");
    eddies->add_option("--iterations", ea.iterations);
    eddies->add_flag("--no-boundary", ea.no_boundary);
    auto* depth_opt = eddies->add_option("--depth-index", depth_index, "Only this depth level");

    FrontArgs fa;
    auto* fronts = app.add_subcommand("fronts", "Extract surface fronts and their track graph");
    fronts->add_option("input", fa.input)->required();
    fronts->add_option("--output,-o", fa.output, "Output prefix")->required();
    fronts->add_option("--variable", fa.variable);
    fronts->add_option("--range", fa.range, "lo hi")->expected(2)->required();
    fronts->add_option("--t-range", fa.t_range, "first last")->expected(2);
    fronts->add_option("--min-length", fa.min_length);
    fronts->add_option("--jaccard", fa.jaccard, "Minimum overlap/union for an edge");

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "Sample a vertical needle to CSV");
    profile->add_option("input", pa.input)->required();
    profile->add_option("--output,-o", pa.output)->required();
    profile->add_option("--lon", pa.lon)->required();
    profile->add_option("--lat", pa.lat)->required();
    profile->add_option("--t,-t", pa.t);
    profile->add_option("--variables", pa.variables)->delimiter(',');
    profile->add_flag("--nearest", pa.nearest, "Nearest grid column instead of bilinear");
    profile->add_option("--mask-policy", pa.mask_policy, "reject, nearest");

    SliceArgs sa;
    auto* slice = app.add_subcommand("slice", "Vertical slice at a longitude to VTK");
    slice->add_option("input", sa.input)->required();
    slice->add_option("--output,-o", sa.output)->required();
    slice->add_option("--lon", sa.lon)->required();
    slice->add_option("--t,-t", sa.t);
    slice->add_option("--variable", sa.variable);
    slice->add_flag("--nearest", sa.nearest);

    IsoArgs ia;
    auto* iso = app.add_subcommand("isodepth", "Depth of an isosurface per column to VTK");
    iso->add_option("input", ia.input)->required();
    iso->add_option("--output,-o", ia.output)->required();
    iso->add_option("--variable", ia.variable);
    iso->add_option("--iso", ia.iso);
    iso->add_option("--t,-t", ia.t);

    ConvertArgs ca;
    auto* convert = app.add_subcommand("convert", "Subset and write the raw format");
    convert->add_option("input", ca.input)->required();
    convert->add_option("--output,-o", ca.output, "Header path (.json)")->required();
    convert->add_option("--lon", ca.lon)->expected(2);
    convert->add_option("--lat", ca.lat)->expected(2);
    convert->add_option("--depth", ca.depth)->expected(2);
    convert->add_option("--t-range", ca.t_range)->expected(2);

    try {
        apply_config_defaults(app, args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    if (depth_opt->count() > 0) ea.depth_index = depth_index;

    try {
        if (info->parsed()) return cmd_info(g, info_input, out);
        if (derive_cmd->parsed()) return cmd_derive(g, da, out);
        if (trace->parsed()) return cmd_trace(g, ta, out);
        if (eddies->parsed()) return cmd_eddies(g, ea, out, err);
        if (fronts->parsed()) return cmd_fronts(g, fa, out);
        if (profile->parsed()) return cmd_profile(g, pa, out);
        if (slice->parsed()) return cmd_slice(g, sa, out);
        if (iso->parsed()) return cmd_isodepth(g, ia, out);
        if (convert->parsed()) return cmd_convert(g, ca, out);
    } catch (const EmptyResult& e) {
        err << "empty result: " << e.what() << '\n';
        return kExitEmpty;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    err << "error: no command\n";
    return kExitUsage;
}

}  // namespace seascape
