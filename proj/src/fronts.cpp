#include "seascape/fronts.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "seascape/error.hpp"
#include "seascape/parallel.hpp"

namespace seascape {

std::size_t IsoVolume::count() const {
    return static_cast<std::size_t>(std::count(member.begin(), member.end(), std::uint8_t{1}));
}

IsoVolume extract_isovolume(const ScalarField& f, const ValueRange& range) {
    IsoVolume v{f.grid_ptr(), std::vector<std::uint8_t>(f.values().size(), 0)};
    for (std::size_t n = 0; n < v.member.size(); ++n) {
        v.member[n] = f.is_valid(n) && range.contains(f[n]) ? 1 : 0;
    }
    return v;
}

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;  // root is the smallest index
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<SurfaceFront> surface_fronts(const IsoVolume& v, std::size_t t) {
    if (!v.grid) throw InvalidArgument("isovolume has no grid");
    const auto& g = *v.grid;
    const std::size_t nx = g.nx(), ny = g.ny(), nz = g.nz();
    if (v.member.size() != g.node_count()) throw DimensionMismatch("isovolume size does not match its grid");

    auto member = [&](std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) {
        if (i < 0 || j < 0 || k < 0 || i >= std::ptrdiff_t(nx) || j >= std::ptrdiff_t(ny) || k >= std::ptrdiff_t(nz))
            return false;
        return v.member[g.index(i, j, k)] != 0;
    };

    std::vector<std::size_t> boundary;
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                if (!v.member[g.index(i, j, k)]) continue;
                const auto I = std::ptrdiff_t(i), J = std::ptrdiff_t(j), K = std::ptrdiff_t(k);
                if (!member(I - 1, J, K) || !member(I + 1, J, K) || !member(I, J - 1, K) || !member(I, J + 1, K) ||
                    !member(I, J, K - 1) || !member(I, J, K + 1))
                    boundary.push_back(g.index(i, j, k));
            }

    // Dense slot per boundary node; -1 elsewhere.
    std::unordered_map<std::size_t, std::size_t> slot;
    slot.reserve(boundary.size() * 2);
    for (std::size_t s = 0; s < boundary.size(); ++s) slot.emplace(boundary[s], s);

    DisjointSet sets(boundary.size());
    for (std::size_t s = 0; s < boundary.size(); ++s) {
        const auto c = g.unravel(boundary[s]);
        // Only look at neighbours with a larger linear index; the rest were handled earlier.
        for (int dk = 0; dk <= 1; ++dk)
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (dk == 0 && (dj < 0 || (dj == 0 && di <= 0))) continue;
                    const auto i = std::ptrdiff_t(c.i) + di, j = std::ptrdiff_t(c.j) + dj,
                               k = std::ptrdiff_t(c.k) + dk;
                    if (!member(i, j, k)) continue;
                    const auto it = slot.find(g.index(i, j, k));
                    if (it != slot.end()) sets.unite(s, it->second);
                }
    }

    std::vector<SurfaceFront> fronts;
    std::vector<std::size_t> label(boundary.size());
    std::unordered_map<std::size_t, std::size_t> root_label;
    for (std::size_t s = 0; s < boundary.size(); ++s) {
        const std::size_t r = sets.find(s);
        auto [it, inserted] = root_label.emplace(r, fronts.size());
        if (inserted) {
            SurfaceFront f;
            f.id = {t, fronts.size()};
            fronts.push_back(std::move(f));
        }
        fronts[it->second].nodes.push_back(boundary[s]);
    }
    for (auto& f : fronts) {
        double lon = 0.0, lat = 0.0, depth = 0.0;
        for (const auto n : f.nodes) {
            const auto c = g.unravel(n);
            lon += g.lon()[c.i];
            lat += g.lat()[c.j];
            depth += g.depth()[c.k];
        }
        const double inv = 1.0 / static_cast<double>(f.nodes.size());
        f.centroid = {lon * inv, lat * inv, depth * inv};
    }
    return fronts;
}

std::vector<FrontEdge> link_fronts(const std::vector<SurfaceFront>& a, const std::vector<SurfaceFront>& b,
                                   double min_jaccard) {
    std::unordered_map<std::size_t, std::size_t> owner;
    for (std::size_t f = 0; f < b.size(); ++f)
        for (const auto n : b[f].nodes) owner.emplace(n, f);

    std::vector<FrontEdge> edges;
    for (const auto& fa : a) {
        std::vector<std::size_t> overlap(b.size(), 0);
        for (const auto n : fa.nodes) {
            const auto it = owner.find(n);
            if (it != owner.end()) ++overlap[it->second];
        }
        for (std::size_t f = 0; f < b.size(); ++f) {
            if (overlap[f] == 0) continue;
            const double jaccard =
                static_cast<double>(overlap[f]) / static_cast<double>(fa.size() + b[f].size() - overlap[f]);
            if (jaccard < min_jaccard) continue;
            edges.push_back({fa.id, b[f].id, overlap[f]});
        }
    }
    return edges;
}

std::size_t TrackGraph::node_count() const {
    std::size_t n = 0;
    for (const auto& f : fronts) n += f.size();
    return n;
}

const SurfaceFront& TrackGraph::front(const FrontId& id) const {
    if (id.t < first_timestep || id.t - first_timestep >= fronts.size() ||
        id.index >= fronts[id.t - first_timestep].size())
        throw InvalidArgument("front id not in graph");
    return fronts[id.t - first_timestep][id.index];
}

TrackGraph build_track_graph(const FieldAtTime& field, const IndexRange& time_range, const FrontParams& params) {
    if (time_range.last < time_range.first) throw InvalidArgument("empty time range");
    if (params.range.hi < params.range.lo) throw InvalidArgument("front range has lo > hi");
    const std::size_t count = time_range.last - time_range.first + 1;
    TrackGraph g;
    g.first_timestep = time_range.first;
    g.fronts.resize(count);
    parallel_for(count, params.jobs, [&](std::size_t s) {
        const std::size_t t = time_range.first + s;
        g.fronts[s] = surface_fronts(extract_isovolume(field(t), params.range), t);
    });
    std::vector<std::vector<FrontEdge>> links(count > 0 ? count - 1 : 0);
    parallel_for(links.size(), params.jobs,
                 [&](std::size_t s) { links[s] = link_fronts(g.fronts[s], g.fronts[s + 1], params.min_jaccard); });
    for (auto& l : links) g.edges.insert(g.edges.end(), l.begin(), l.end());
    return g;
}

TrackGraph build_track_graph(const Dataset& d, VariableRole variable, const IndexRange& time_range,
                             const FrontParams& params) {
    if (time_range.last >= d.timestep_count())
        throw TimestepOutOfRange("time range ends at " + std::to_string(time_range.last) + " but dataset has " +
                                 std::to_string(d.timestep_count()) + " timesteps");
    return build_track_graph([&](std::size_t t) { return load_scalar(d, variable, t); }, time_range, params);
}

std::vector<Track> extract_tracks(const TrackGraph& g, std::size_t min_length) {
    std::vector<std::size_t> offset(g.fronts.size() + 1, 0);
    for (std::size_t s = 0; s < g.fronts.size(); ++s) offset[s + 1] = offset[s] + g.fronts[s].size();
    auto flat = [&](const FrontId& id) { return offset[id.t - g.first_timestep] + id.index; };

    std::vector<std::vector<const FrontEdge*>> out_edges(offset.back());
    for (const auto& e : g.edges) out_edges[flat(e.from)].push_back(&e);

    std::vector<bool> visited(offset.back(), false);
    std::vector<Track> tracks;
    for (std::size_t s = 0; s < g.fronts.size(); ++s) {
        for (const auto& start : g.fronts[s]) {
            if (visited[flat(start.id)]) continue;
            Track track;
            FrontId cur = start.id;
            for (;;) {
                visited[flat(cur)] = true;
                track.fronts.push_back(cur);
                const FrontEdge* best = nullptr;
                for (const auto* e : out_edges[flat(cur)]) {
                    if (visited[flat(e->to)]) continue;
                    if (!best || e->weight > best->weight || (e->weight == best->weight && e->to.index > best->to.index))
                        best = e;
                }
                if (!best) break;
                cur = best->to;
            }
            if (track.length() >= min_length) tracks.push_back(std::move(track));
        }
    }
    std::stable_sort(tracks.begin(), tracks.end(),
                     [](const Track& a, const Track& b) { return a.length() > b.length(); });
    return tracks;
}

}  // namespace seascape
