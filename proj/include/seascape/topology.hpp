#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "seascape/grid.hpp"

namespace seascape {

// Non-owning view of a 2-D scalar slice; i runs fastest.
struct Slice2D {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::span<const double> values;
    std::span<const std::uint8_t> valid;

    std::size_t index(std::size_t i, std::size_t j) const { return i + nx * j; }
};

// Depth slice k of a field.
Slice2D depth_slice(const ScalarField& f, std::size_t k);

inline constexpr double kUnsetPersistence = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInfinitePersistence = std::numeric_limits<double>::infinity();

struct Minimum2D {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
    double persistence = kUnsetPersistence;

    bool is_essential() const { return persistence == kInfinitePersistence; }
};

// Nodes preceding every valid 8-neighbour in the (value, linear index) order.
// Sorted by linear index. Throws InvalidArgument when the slice has no valid node.
std::vector<Minimum2D> local_minima(const Slice2D& slice);

// Sublevel-set persistence of every local minimum under 8-connectivity (elder rule).
// The oldest minimum of each connected valid region gets infinite persistence.
std::vector<Minimum2D> persistence_of_minima(const Slice2D& slice);

// Minima with persistence >= threshold; essential minima are always kept.
std::vector<Minimum2D> simplify_minima(std::span<const Minimum2D> minima, double threshold);

}  // namespace seascape
