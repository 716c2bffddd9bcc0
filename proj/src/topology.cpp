#include "seascape/topology.hpp"

#include <algorithm>
#include <numeric>

#include "seascape/error.hpp"

namespace seascape {

Slice2D depth_slice(const ScalarField& f, std::size_t k) {
    const auto& grid = f.grid();
    if (k >= grid.nz()) {
        throw InvalidArgument("depth index " + std::to_string(k) + " out of range");
    }
    const std::size_t n = grid.slice_size();
    return {grid.nx(), grid.ny(), f.values().subspan(k * n, n), f.valid().subspan(k * n, n)};
}

namespace {

void check_slice(const Slice2D& slice) {
    const std::size_t n = slice.nx * slice.ny;
    if (slice.values.size() != n || slice.valid.size() != n) {
        throw InvalidArgument("slice spans do not match its dimensions");
    }
    if (std::find(slice.valid.begin(), slice.valid.end(), std::uint8_t{1}) == slice.valid.end()) {
        throw InvalidArgument("slice has no valid node");
    }
}

template <typename Fn>
void for_each_neighbour(const Slice2D& s, std::size_t idx, Fn&& fn) {
    const std::size_t i = idx % s.nx;
    const std::size_t j = idx / s.nx;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            if ((di < 0 && i == 0) || (dj < 0 && j == 0)) continue;
            const std::size_t ni = i + di;
            const std::size_t nj = j + dj;
            if (ni >= s.nx || nj >= s.ny) continue;
            const std::size_t nidx = s.index(ni, nj);
            if (s.valid[nidx]) fn(nidx);
        }
    }
}

// Simulation of simplicity: ties in value are broken by linear index.
bool precedes(const Slice2D& s, std::size_t a, std::size_t b) {
    const double va = s.values[a];
    const double vb = s.values[b];
    return va < vb || (va == vb && a < b);
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void attach(std::size_t child_root, std::size_t new_root) { parent_[child_root] = new_root; }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<Minimum2D> local_minima(const Slice2D& slice) {
    check_slice(slice);
    std::vector<Minimum2D> out;
    for (std::size_t idx = 0; idx < slice.values.size(); ++idx) {
        if (!slice.valid[idx]) continue;
        bool is_min = true;
        for_each_neighbour(slice, idx, [&](std::size_t nidx) {
            if (precedes(slice, nidx, idx)) is_min = false;
        });
        if (is_min) {
            out.push_back({idx % slice.nx, idx / slice.nx, slice.values[idx], kUnsetPersistence});
        }
    }
    return out;
}

std::vector<Minimum2D> persistence_of_minima(const Slice2D& slice) {
    check_slice(slice);
    const std::size_t n = slice.values.size();
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (slice.valid[idx]) order.push_back(idx);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return precedes(slice, a, b); });

    UnionFind uf(n);
    std::vector<std::uint8_t> processed(n, 0);
    // Oldest (first-born) minimum of the component rooted at each root.
    std::vector<std::size_t> oldest(n);
    std::vector<double> persistence(n, kUnsetPersistence);
    std::vector<std::size_t> roots;

    for (const std::size_t s : order) {
        roots.clear();
        for_each_neighbour(slice, s, [&](std::size_t nidx) {
            if (!processed[nidx]) return;
            const std::size_t r = uf.find(nidx);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        });
        processed[s] = 1;
        if (roots.empty()) {
            oldest[s] = s;
            persistence[s] = kInfinitePersistence;
            continue;
        }
        std::size_t survivor = roots.front();
        for (const std::size_t r : roots) {
            if (precedes(slice, oldest[r], oldest[survivor])) survivor = r;
        }
        for (const std::size_t r : roots) {
            if (r == survivor) continue;
            const std::size_t dying = oldest[r];
            persistence[dying] = slice.values[s] - slice.values[dying];
            uf.attach(r, survivor);
        }
        uf.attach(s, survivor);
    }

    std::vector<Minimum2D> out;
    for (std::size_t idx = 0; idx < n; ++idx) {
        if (slice.valid[idx] && !std::isnan(persistence[idx])) {
            out.push_back({idx % slice.nx, idx / slice.nx, slice.values[idx], persistence[idx]});
        }
    }
    return out;
}

std::vector<Minimum2D> simplify_minima(std::span<const Minimum2D> minima, double threshold) {
    std::vector<Minimum2D> out;
    for (const auto& m : minima) {
        if (m.is_essential() || m.persistence >= threshold) out.push_back(m);
    }
    return out;
}

}  // namespace seascape
