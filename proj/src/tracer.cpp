#include "seascape/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "seascape/error.hpp"
#include "seascape/parallel.hpp"

namespace seascape {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void IntegrationParams::validate() const {
    if (!(step_length > 0.0) || !std::isfinite(step_length)) {
        throw InvalidArgument("step_length must be positive");
    }
    if (max_steps < 1) throw InvalidArgument("max_steps must be at least 1");
    if (!(min_speed >= 0.0)) throw InvalidArgument("min_speed must be non-negative");
    if (max_time && !(*max_time >= 0.0)) throw InvalidArgument("max_time must be non-negative");
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::out_of_domain: return "out_of_domain";
        case Termination::masked: return "masked";
        case Termination::max_steps: return "max_steps";
        case Termination::stagnation: return "stagnation";
        case Termination::time_exhausted: return "time_exhausted";
    }
    return "unknown";
}

namespace {

Termination termination_of(SampleStatus s) {
    return s == SampleStatus::out_of_domain ? Termination::out_of_domain : Termination::masked;
}

struct Trace {
    std::vector<Position> vertices;
    std::vector<double> time;
    std::vector<double> speed;
    Termination termination = Termination::max_steps;
};

// Velocity is a callable (const Position&, double time, Vec3&) -> SampleStatus.
// Integrates one direction (sign = +1 forward, -1 backward) from a seed whose
// velocity sampled successfully. The seed itself is not appended.
using StopFn = std::function<bool(const Position&)>;

template <typename Velocity>
Trace integrate_direction(const Velocity& velocity, HorizontalFrame frame, const Position& seed, Vec3 seed_velocity,
                          double t0, double sign, std::optional<double> time_limit, const IntegrationParams& p,
                          const StopFn* stop = nullptr) {
    Trace out;
    // Converts a velocity (m/s, w up) into coordinate rates.
    auto rate = [frame](const Position& pos, const Vec3& v) {
        const auto m = metric_at_latitude(frame, pos.lat);
        return Vec3{m.dx > 0.0 ? v.x / m.dx : 0.0, v.y / m.dy, -v.z};
    };
    auto advance = [](const Position& pos, double dt, const Vec3& r) {
        return Position{pos.lon + dt * r.x, pos.lat + dt * r.y, pos.depth + dt * r.z};
    };

    Position pos = seed;
    Vec3 vel = seed_velocity;
    double t = t0;
    std::size_t steps = 0;
    for (;;) {
        double remaining = std::numeric_limits<double>::infinity();
        if (time_limit) {
            remaining = sign > 0 ? *time_limit - t : t - *time_limit;
            if (remaining <= 0.0) {
                out.termination = Termination::time_exhausted;
                return out;
            }
        }
        const double speed = vel.norm();
        if (speed < p.min_speed || speed == 0.0) {
            out.termination = Termination::stagnation;
            return out;
        }
        if (steps >= p.max_steps) {
            out.termination = Termination::max_steps;
            return out;
        }
        const double h = std::min(p.step_length / speed, remaining);
        const double dt = sign * h;

        const Vec3 k1 = rate(pos, vel);
        Vec3 v2, v3, v4;
        const Position p2 = advance(pos, 0.5 * dt, k1);
        if (auto s = velocity(p2, t + 0.5 * dt, v2); s != SampleStatus::ok) {
            out.termination = termination_of(s);
            return out;
        }
        const Vec3 k2 = rate(p2, v2);
        const Position p3 = advance(pos, 0.5 * dt, k2);
        if (auto s = velocity(p3, t + 0.5 * dt, v3); s != SampleStatus::ok) {
            out.termination = termination_of(s);
            return out;
        }
        const Vec3 k3 = rate(p3, v3);
        const Position p4 = advance(pos, dt, k3);
        if (auto s = velocity(p4, t + dt, v4); s != SampleStatus::ok) {
            out.termination = termination_of(s);
            return out;
        }
        const Vec3 k4 = rate(p4, v4);
        const Vec3 slope = (1.0 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Position next = advance(pos, dt, slope);
        // Snap to the limit so floating error cannot leave a sliver of time.
        const double t_next = (time_limit && h == remaining) ? *time_limit : t + dt;
        Vec3 v_next;
        if (auto s = velocity(next, t_next, v_next); s != SampleStatus::ok) {
            out.termination = termination_of(s);
            return out;
        }
        pos = next;
        vel = v_next;
        t = t_next;
        ++steps;
        out.vertices.push_back(pos);
        out.time.push_back(t);
        out.speed.push_back(vel.norm());
        if (stop && (*stop)(pos)) {
            out.termination = Termination::max_steps;
            return out;
        }
    }
}

template <typename Velocity>
FieldLine integrate(const Velocity& velocity, HorizontalFrame frame, const Seed& seed, double t0,
                    std::optional<double> t_min, std::optional<double> t_max, const IntegrationParams& p,
                    const StopFn* stop = nullptr) {
    p.validate();
    FieldLine line;
    line.vertices.push_back(seed.position);
    line.time.push_back(t0);
    Vec3 v0;
    if (auto s = velocity(seed.position, t0, v0); s != SampleStatus::ok) {
        line.speed.push_back(kNaN);
        line.termination = termination_of(s);
        return line;
    }
    line.speed.push_back(v0.norm());

    auto limit = [&](double sign) -> std::optional<double> {
        std::optional<double> bound = sign > 0 ? t_max : t_min;
        if (p.max_time) {
            const double cap = t0 + sign * *p.max_time;
            bound = bound ? (sign > 0 ? std::min(*bound, cap) : std::max(*bound, cap)) : cap;
        }
        return bound;
    };

    if (p.direction == IntegrationDirection::backward || p.direction == IntegrationDirection::both) {
        Trace back = integrate_direction(velocity, frame, seed.position, v0, t0, -1.0, limit(-1.0), p);
        std::reverse(back.vertices.begin(), back.vertices.end());
        std::reverse(back.time.begin(), back.time.end());
        std::reverse(back.speed.begin(), back.speed.end());
        line.vertices.insert(line.vertices.begin(), back.vertices.begin(), back.vertices.end());
        line.time.insert(line.time.begin(), back.time.begin(), back.time.end());
        line.speed.insert(line.speed.begin(), back.speed.begin(), back.speed.end());
        line.seed_vertex = back.vertices.size();
        if (p.direction == IntegrationDirection::backward) {
            line.termination = back.termination;
            return line;
        }
        line.backward_termination = back.termination;
    }
    Trace fwd = integrate_direction(velocity, frame, seed.position, v0, t0, 1.0, limit(1.0), p, stop);
    line.vertices.insert(line.vertices.end(), fwd.vertices.begin(), fwd.vertices.end());
    line.time.insert(line.time.end(), fwd.time.begin(), fwd.time.end());
    line.speed.insert(line.speed.end(), fwd.speed.begin(), fwd.speed.end());
    line.termination = fwd.termination;
    return line;
}

}  // namespace

FieldLine integrate_streamline(const VectorField& vf, const Seed& seed, const IntegrationParams& params) {
    auto velocity = [&](const Position& pos, double, Vec3& out) {
        return sample_vector(vf, pos, params.include_vertical, params.mask_policy, out);
    };
    return integrate(velocity, vf.grid().frame(), seed, 0.0, std::nullopt, std::nullopt, params);
}

FieldLine integrate_streamline_until(const VectorField& vf, const Seed& seed, const IntegrationParams& params,
                                     const std::function<bool(const Position&)>& stop) {
    IntegrationParams forward = params;
    forward.direction = IntegrationDirection::forward;
    auto velocity = [&](const Position& pos, double, Vec3& out) {
        return sample_vector(vf, pos, forward.include_vertical, forward.mask_policy, out);
    };
    return integrate(velocity, vf.grid().frame(), seed, 0.0, std::nullopt, std::nullopt, forward, &stop);
}

UnsteadyVectorField::UnsteadyVectorField(std::vector<VectorField> frames, Axis times) : times_(std::move(times)) {
    if (frames.empty() || frames.size() != times_.size()) {
        throw InvalidArgument("unsteady field needs one frame per timestamp");
    }
    grid_ = frames.front().grid_ptr();
    for (auto& f : frames) {
        if (f.grid_ptr() != grid_ && !(f.grid() == *grid_)) {
            throw DimensionMismatch("unsteady field frames live on different grids");
        }
        frames_.push_back(std::make_shared<const VectorField>(std::move(f)));
    }
}

UnsteadyVectorField::UnsteadyVectorField(const Dataset& dataset)
    : grid_(dataset.grid_ptr()), times_(dataset.time()), dataset_(&dataset), frames_(dataset.timestep_count()) {
    if (!dataset.has(VariableRole::u) || !dataset.has(VariableRole::v)) {
        throw MissingVariable("dataset has no velocity components");
    }
}

const VectorField& UnsteadyVectorField::frame(std::size_t t) const {
    if (t >= times_.size()) throw TimestepOutOfRange("timestep " + std::to_string(t) + " out of range");
    {
        std::lock_guard lock(mutex_);
        if (frames_[t]) return *frames_[t];
    }
    auto loaded = std::make_shared<const VectorField>(load_vector(*dataset_, t));
    std::lock_guard lock(mutex_);
    if (!frames_[t]) frames_[t] = std::move(loaded);
    return *frames_[t];
}

double UnsteadyVectorField::time_of(double timestep) const {
    const double last = static_cast<double>(times_.size() - 1);
    if (!(timestep >= 0.0 && timestep <= last)) {
        throw InvalidArgument("birth time " + std::to_string(timestep) + " outside [0, " + std::to_string(last) + "]");
    }
    const auto i = static_cast<std::size_t>(std::floor(timestep));
    if (i + 1 >= times_.size()) return times_.back();
    const double a = timestep - static_cast<double>(i);
    return (1.0 - a) * times_[i] + a * times_[i + 1];
}

SampleStatus UnsteadyVectorField::sample(const Position& p, double time, bool include_vertical, MaskPolicy policy,
                                         Vec3& out) const {
    if (time < times_.front() || time > times_.back()) return SampleStatus::out_of_domain;
    auto [i, a] = times_.interval(time);
    Vec3 v0;
    if (auto s = sample_vector(frame(i), p, include_vertical, policy, v0); s != SampleStatus::ok) return s;
    if (a == 0.0 || times_.size() == 1) {
        out = v0;
        return SampleStatus::ok;
    }
    Vec3 v1;
    if (auto s = sample_vector(frame(i + 1), p, include_vertical, policy, v1); s != SampleStatus::ok) return s;
    out = (1.0 - a) * v0 + a * v1;
    return SampleStatus::ok;
}

FieldLine integrate_pathline(const UnsteadyVectorField& field, const Seed& seed, const IntegrationParams& params) {
    const double t0 = field.time_of(seed.birth_time);
    auto velocity = [&](const Position& pos, double t, Vec3& out) {
        return field.sample(pos, t, params.include_vertical, params.mask_policy, out);
    };
    return integrate(velocity, field.grid().frame(), seed, t0, field.times().front(), field.times().back(), params);
}

FieldLine integrate_pathline(const Dataset& dataset, const Seed& seed, const IntegrationParams& params) {
    const UnsteadyVectorField field(dataset);
    return integrate_pathline(field, seed, params);
}

std::vector<FieldLine> integrate_streamlines(const VectorField& vf, std::span<const Seed> seeds,
                                             const IntegrationParams& params, unsigned jobs) {
    params.validate();
    std::vector<FieldLine> lines(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t s) { lines[s] = integrate_streamline(vf, seeds[s], params); });
    return lines;
}

std::vector<FieldLine> integrate_pathlines(const UnsteadyVectorField& field, std::span<const Seed> seeds,
                                           const IntegrationParams& params, unsigned jobs) {
    params.validate();
    std::vector<FieldLine> lines(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t s) { lines[s] = integrate_pathline(field, seeds[s], params); });
    return lines;
}

void attach_scalar(FieldLine& line, const ScalarField& f) {
    std::vector<double> values(line.vertices.size(), kNaN);
    for (std::size_t v = 0; v < line.vertices.size(); ++v) {
        double x = 0.0;
        if (sample_scalar(f, line.vertices[v], MaskPolicy::reject, x) == SampleStatus::ok) values[v] = x;
    }
    line.scalars.emplace_back(f.name(), std::move(values));
}

// ---------------------------------------------------------------- seeding

namespace {

// Cell lattice of a grid. An axis with a single node contributes one flat cell.
class CellLattice {
public:
    explicit CellLattice(const RectilinearGrid3D& grid)
        : grid_(grid), cx_(cells(grid.nx())), cy_(cells(grid.ny())), cz_(cells(grid.nz())) {}

    std::size_t count() const { return cx_ * cy_ * cz_; }
    CellIndex cell(std::size_t c) const { return {c % cx_, (c / cx_) % cy_, c / (cx_ * cy_)}; }

    template <typename Fn>
    void for_each_corner(const CellIndex& c, Fn&& fn) const {
        for (std::size_t dk = 0; dk <= (grid_.nz() > 1 ? 1u : 0u); ++dk)
            for (std::size_t dj = 0; dj <= (grid_.ny() > 1 ? 1u : 0u); ++dj)
                for (std::size_t di = 0; di <= (grid_.nx() > 1 ? 1u : 0u); ++di)
                    fn(grid_.index(c.i + di, c.j + dj, c.k + dk));
    }

    bool corners_valid(const CellIndex& c, std::span<const std::uint8_t> valid) const {
        bool ok = true;
        for_each_corner(c, [&](std::size_t idx) { ok = ok && valid[idx] != 0; });
        return ok;
    }
    bool corners_wet(const CellIndex& c) const {
        bool ok = true;
        for_each_corner(c, [&](std::size_t idx) { ok = ok && !grid_.is_land(idx); });
        return ok;
    }

    double volume(const CellIndex& c) const {
        const double lat_mid = grid_.ny() > 1 ? 0.5 * (grid_.lat()[c.j] + grid_.lat()[c.j + 1]) : grid_.lat()[0];
        const auto m = metric_at_latitude(grid_.frame(), lat_mid);
        const double wx = grid_.nx() > 1 ? (grid_.lon()[c.i + 1] - grid_.lon()[c.i]) * m.dx : 1.0;
        const double wy = grid_.ny() > 1 ? (grid_.lat()[c.j + 1] - grid_.lat()[c.j]) * m.dy : 1.0;
        const double wz = grid_.nz() > 1 ? grid_.depth()[c.k + 1] - grid_.depth()[c.k] : 1.0;
        return wx * wy * wz;
    }

    Position point_in(const CellIndex& c, double a, double b, double d) const {
        auto lerp = [](const Axis& ax, std::size_t i, double f) {
            return ax.size() > 1 ? ax[i] + f * (ax[i + 1] - ax[i]) : ax[0];
        };
        return {lerp(grid_.lon(), c.i, a), lerp(grid_.lat(), c.j, b), lerp(grid_.depth(), c.k, d)};
    }

private:
    static std::size_t cells(std::size_t n) { return n > 1 ? n - 1 : 1; }
    const RectilinearGrid3D& grid_;
    std::size_t cx_, cy_, cz_;
};

// Draws positions cell-by-cell from a discrete distribution over cells.
class CellSampler {
public:
    CellSampler(const RectilinearGrid3D& grid, std::vector<double> weights, std::uint64_t rng_seed)
        : lattice_(grid), cumulative_(std::move(weights)), rng_(rng_seed) {
        double acc = 0.0;
        for (auto& w : cumulative_) {
            acc += w;
            w = acc;
        }
    }

    double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    Position draw() {
        const double target = unit_(rng_) * total();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        if (it == cumulative_.end()) --it;
        // Skip zero-weight cells that share the cumulative value.
        while (it != cumulative_.begin() && *it == *(it - 1)) --it;
        const auto c = lattice_.cell(static_cast<std::size_t>(it - cumulative_.begin()));
        const double a = unit_(rng_);
        const double b = unit_(rng_);
        const double d = unit_(rng_);
        return lattice_.point_in(c, a, b, d);
    }

private:
    CellLattice lattice_;
    std::vector<double> cumulative_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

std::vector<double> uniform_weights(const RectilinearGrid3D& grid) {
    const CellLattice lattice(grid);
    std::vector<double> w(lattice.count(), 0.0);
    for (std::size_t c = 0; c < w.size(); ++c) {
        const auto cell = lattice.cell(c);
        if (lattice.corners_wet(cell)) w[c] = lattice.volume(cell);
    }
    return w;
}

}  // namespace

std::vector<Seed> seed_uniform(const RectilinearGrid3D& grid, std::size_t n, std::uint64_t rng_seed) {
    CellSampler sampler(grid, uniform_weights(grid), rng_seed);
    if (!(sampler.total() > 0.0)) throw EmptySelection("grid has no cell free of land");
    std::vector<Seed> seeds(n);
    for (auto& s : seeds) s.position = sampler.draw();
    return seeds;
}

WeightTransform parse_weight_transform(std::string_view name) {
    if (name == "positive-part" || name == "positive_part") return WeightTransform::positive_part;
    if (name == "negative-part" || name == "negative_part") return WeightTransform::negative_part;
    if (name == "absolute") return WeightTransform::absolute;
    throw InvalidArgument("unknown weight transform '" + std::string(name) + "'");
}

std::vector<Seed> seed_weighted(const ScalarField& weight, std::size_t n, std::uint64_t rng_seed,
                                WeightTransform transform) {
    const auto& grid = weight.grid();
    const CellLattice lattice(grid);
    std::vector<double> w(lattice.count(), 0.0);
    for (std::size_t c = 0; c < w.size(); ++c) {
        const auto cell = lattice.cell(c);
        if (!lattice.corners_valid(cell, weight.valid())) continue;
        double sum = 0.0;
        int count = 0;
        lattice.for_each_corner(cell, [&](std::size_t idx) {
            sum += weight[idx];
            ++count;
        });
        const double mean = sum / count;
        double t = 0.0;
        switch (transform) {
            case WeightTransform::positive_part: t = std::max(mean, 0.0); break;
            case WeightTransform::negative_part: t = std::max(-mean, 0.0); break;
            case WeightTransform::absolute: t = std::abs(mean); break;
        }
        w[c] = t * lattice.volume(cell);
    }
    CellSampler sampler(grid, std::move(w), rng_seed);
    if (!(sampler.total() > 0.0)) {
        throw AllZeroWeights("weight field '" + weight.name() + "' has no positive transformed weight");
    }
    std::vector<Seed> seeds(n);
    for (auto& s : seeds) s.position = sampler.draw();
    return seeds;
}

std::vector<Seed> seed_in_isovolume(std::span<const RangeConstraint> constraints, std::size_t n,
                                    std::uint64_t rng_seed, std::size_t candidate_cap) {
    if (constraints.empty() || !constraints.front().field) {
        throw InvalidArgument("isovolume seeding needs at least one constrained field");
    }
    const auto& grid = constraints.front().field->grid();
    for (const auto& c : constraints) {
        if (!c.field || !(c.field->grid() == grid || c.field->grid_ptr() == constraints.front().field->grid_ptr())) {
            throw DimensionMismatch("isovolume constraints must share one grid");
        }
        if (c.range.lo > c.range.hi) throw InvalidArgument("constraint range has lo > hi");
    }
    CellSampler sampler(grid, uniform_weights(grid), rng_seed);
    if (!(sampler.total() > 0.0)) throw EmptySelection("grid has no cell free of land");
    std::vector<Seed> seeds;
    seeds.reserve(n);
    for (std::size_t tried = 0; tried < candidate_cap && seeds.size() < n; ++tried) {
        const Position p = sampler.draw();
        bool keep = true;
        for (const auto& c : constraints) {
            double x = 0.0;
            if (sample_scalar(*c.field, p, MaskPolicy::reject, x) != SampleStatus::ok || !c.range.contains(x)) {
                keep = false;
                break;
            }
        }
        if (keep) seeds.push_back({p, 0.0});
    }
    if (seeds.empty() && n > 0) {
        throw EmptySelection("no candidate among " + std::to_string(candidate_cap) + " fell inside the selection");
    }
    return seeds;
}

}  // namespace seascape
