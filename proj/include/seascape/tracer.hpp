#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seascape/grid.hpp"
#include "seascape/ingest.hpp"

namespace seascape {

struct Seed {
    Position position;
    double birth_time = 0.0;  // timestep index (fractional allowed); pathlines only
};

enum class IntegrationDirection { forward, backward, both };

struct IntegrationParams {
    double step_length = 1000.0;  // meters travelled per step
    std::size_t max_steps = 1000;
    double min_speed = 1e-6;  // m/s
    bool include_vertical = false;
    IntegrationDirection direction = IntegrationDirection::forward;
    // Optional cap on integrated time per direction (seconds).
    std::optional<double> max_time;
    MaskPolicy mask_policy = MaskPolicy::reject;

    // Throws InvalidArgument.
    void validate() const;
};

enum class Termination { out_of_domain, masked, max_steps, stagnation, time_exhausted };

std::string_view to_string(Termination t);

struct FieldLine {
    std::vector<Position> vertices;
    std::vector<double> time;   // seconds; relative to the seed for streamlines, absolute for pathlines
    std::vector<double> speed;  // m/s at each vertex
    std::vector<std::pair<std::string, std::vector<double>>> scalars;
    std::size_t seed_vertex = 0;  // index of the seed inside `vertices`
    Termination termination = Termination::max_steps;
    std::optional<Termination> backward_termination;

    std::size_t size() const { return vertices.size(); }
};

// Classical RK4 in physical space. The time step is step_length / |v| evaluated at
// the start of each step, so every step advances roughly step_length meters.
// Positions are advanced in grid coordinates using the local metric at each stage.
// w is positive upward, so depth decreases when w > 0.
FieldLine integrate_streamline(const VectorField& vf, const Seed& seed, const IntegrationParams& params);

// As above, forward only; stops early (reported as max_steps) once `stop` returns
// true for a newly appended vertex.
FieldLine integrate_streamline_until(const VectorField& vf, const Seed& seed, const IntegrationParams& params,
                                     const std::function<bool(const Position&)>& stop);

// A sequence of velocity frames with linear interpolation in time.
class UnsteadyVectorField {
public:
    // Frames share a grid; times are in seconds and strictly increasing.
    UnsteadyVectorField(std::vector<VectorField> frames, Axis times);
    // Loads frames from the dataset on first use; safe for concurrent callers.
    explicit UnsteadyVectorField(const Dataset& dataset);

    const RectilinearGrid3D& grid() const { return *grid_; }
    const Axis& times() const { return times_; }
    const VectorField& frame(std::size_t t) const;

    // Timestep index (fractional) -> seconds. Throws InvalidArgument outside the axis.
    double time_of(double timestep) const;

    SampleStatus sample(const Position& p, double time, bool include_vertical, MaskPolicy policy, Vec3& out) const;

private:
    GridPtr grid_;
    Axis times_;
    const Dataset* dataset_ = nullptr;
    mutable std::mutex mutex_;
    mutable std::vector<std::shared_ptr<const VectorField>> frames_;
};

// RK4 through the time-varying field starting at seed.birth_time. Terminates with
// time_exhausted at the ends of the time axis.
FieldLine integrate_pathline(const UnsteadyVectorField& field, const Seed& seed, const IntegrationParams& params);
FieldLine integrate_pathline(const Dataset& dataset, const Seed& seed, const IntegrationParams& params);

// One field line per seed, integrated concurrently.
std::vector<FieldLine> integrate_streamlines(const VectorField& vf, std::span<const Seed> seeds,
                                             const IntegrationParams& params, unsigned jobs = 0);
std::vector<FieldLine> integrate_pathlines(const UnsteadyVectorField& field, std::span<const Seed> seeds,
                                           const IntegrationParams& params, unsigned jobs = 0);

// Adds a per-vertex attribute sampled from f (NaN where sampling fails).
void attach_scalar(FieldLine& line, const ScalarField& f);

// ---------------------------------------------------------------- seeding

// Cells whose 8 corners are all non-land, chosen with probability proportional to
// their physical volume; positions uniform inside the chosen cell. Deterministic
// for a fixed rng_seed. Throws EmptySelection when no valid cell exists.
std::vector<Seed> seed_uniform(const RectilinearGrid3D& grid, std::size_t n, std::uint64_t rng_seed);

enum class WeightTransform {
    positive_part,
    negative_part,
    absolute,
};

WeightTransform parse_weight_transform(std::string_view name);

// Cell probability proportional to transform(mean of corner weights) times cell volume;
// cells with an invalid corner get zero. Throws AllZeroWeights.
std::vector<Seed> seed_weighted(const ScalarField& weight, std::size_t n, std::uint64_t rng_seed,
                                WeightTransform transform = WeightTransform::absolute);

struct RangeConstraint {
    const ScalarField* field = nullptr;
    ValueRange range;
};

// Rejection sampling over seed_uniform's candidate stream: a candidate is kept iff
// every field interpolates inside its range. Stops after `candidate_cap` candidates;
// throws EmptySelection if none was accepted, otherwise returns the accepted seeds.
std::vector<Seed> seed_in_isovolume(std::span<const RangeConstraint> constraints, std::size_t n,
                                    std::uint64_t rng_seed, std::size_t candidate_cap = 1'000'000);

}  // namespace seascape
