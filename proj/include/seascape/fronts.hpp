#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "seascape/grid.hpp"
#include "seascape/ingest.hpp"

namespace seascape {

struct IsoVolume {
    GridPtr grid;
    std::vector<std::uint8_t> member;  // per node

    std::size_t count() const;
};

// member = valid && lo <= value <= hi.
IsoVolume extract_isovolume(const ScalarField& f, const ValueRange& range);

struct FrontId {
    std::size_t t = 0;
    std::size_t index = 0;

    friend bool operator==(const FrontId&, const FrontId&) = default;
    friend auto operator<=>(const FrontId&, const FrontId&) = default;
};

struct SurfaceFront {
    FrontId id;
    std::vector<std::size_t> nodes;  // sorted linear indices
    Position centroid;

    std::size_t size() const { return nodes.size(); }
};

// Member nodes with a non-member face neighbour (the domain border counts as
// non-member), grouped into 26-connected components ordered by smallest node index.
std::vector<SurfaceFront> surface_fronts(const IsoVolume& v, std::size_t t);

struct FrontEdge {
    FrontId from;
    FrontId to;
    std::size_t weight = 0;  // shared nodes
};

// Edges between fronts sharing at least one node. With min_jaccard > 0, edges whose
// overlap / union falls below it are dropped.
std::vector<FrontEdge> link_fronts(const std::vector<SurfaceFront>& a, const std::vector<SurfaceFront>& b,
                                   double min_jaccard = 0.0);

struct TrackGraph {
    std::size_t first_timestep = 0;
    std::vector<std::vector<SurfaceFront>> fronts;  // per timestep, starting at first_timestep
    std::vector<FrontEdge> edges;                   // sorted by (from, to)

    std::size_t node_count() const;
    const SurfaceFront& front(const FrontId& id) const;
};

struct FrontParams {
    ValueRange range;
    double min_jaccard = 0.0;
    unsigned jobs = 0;
};

// Scalar field of one timestep; called concurrently.
using FieldAtTime = std::function<ScalarField(std::size_t t)>;

TrackGraph build_track_graph(const FieldAtTime& field, const IndexRange& time_range, const FrontParams& params);
TrackGraph build_track_graph(const Dataset& d, VariableRole variable, const IndexRange& time_range,
                             const FrontParams& params);

struct Track {
    std::vector<FrontId> fronts;  // one per consecutive timestep

    std::size_t length() const { return fronts.size(); }
};

// Greedy max-overlap paths; node-disjoint, longest first.
std::vector<Track> extract_tracks(const TrackGraph& g, std::size_t min_length = 1);

}  // namespace seascape
