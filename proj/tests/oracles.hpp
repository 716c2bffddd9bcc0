#pragma once

// Brute-force reference implementations used only by tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace seascape::testing {

struct OracleSlice {
    std::size_t nx = 0, ny = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
};

inline bool precedes(const OracleSlice& s, std::size_t a, std::size_t b) {
    return s.values[a] < s.values[b] || (s.values[a] == s.values[b] && a < b);
}

template <typename Fn>
void for_neighbours8(const OracleSlice& s, std::size_t n, Fn&& fn) {
    const long i = static_cast<long>(n % s.nx), j = static_cast<long>(n / s.nx);
    for (long dj = -1; dj <= 1; ++dj)
        for (long di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const long a = i + di, b = j + dj;
            if (a < 0 || b < 0 || a >= long(s.nx) || b >= long(s.ny)) continue;
            fn(static_cast<std::size_t>(a + long(s.nx) * b));
        }
}

// Linear indices of nodes that precede every valid 8-neighbour.
inline std::vector<std::size_t> oracle_minima(const OracleSlice& s) {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < s.values.size(); ++n) {
        if (!s.valid[n]) continue;
        bool low = true;
        for_neighbours8(s, n, [&](std::size_t m) {
            if (s.valid[m] && precedes(s, m, n)) low = false;
        });
        if (low) out.push_back(n);
    }
    return out;
}

// Grows the sublevel set one node at a time in (value, index) order and relabels every
// component by flood fill after each step. When a component holds several surviving
// minima, all but the oldest die at the current value.
inline std::map<std::size_t, double> oracle_persistence(const OracleSlice& s) {
    std::vector<std::size_t> order;
    for (std::size_t n = 0; n < s.values.size(); ++n)
        if (s.valid[n]) order.push_back(n);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return precedes(s, a, b); });

    std::map<std::size_t, double> persistence;
    std::vector<std::uint8_t> alive(s.values.size(), 0);
    for (const auto m : oracle_minima(s)) {
        alive[m] = 1;
        persistence[m] = std::numeric_limits<double>::infinity();
    }

    std::vector<std::uint8_t> in_set(s.values.size(), 0);
    std::vector<long> label(s.values.size(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t t = 0; t < order.size(); ++t) {
        in_set[order[t]] = 1;
        std::fill(label.begin(), label.end(), -1);
        long next = 0;
        std::vector<std::vector<std::size_t>> members;
        for (std::size_t u = 0; u <= t; ++u) {
            const std::size_t start = order[u];
            if (label[start] >= 0) continue;
            members.emplace_back();
            label[start] = next;
            stack.assign(1, start);
            while (!stack.empty()) {
                const std::size_t n = stack.back();
                stack.pop_back();
                members.back().push_back(n);
                for_neighbours8(s, n, [&](std::size_t m) {
                    if (in_set[m] && label[m] < 0) {
                        label[m] = next;
                        stack.push_back(m);
                    }
                });
            }
            ++next;
        }
        const double level = s.values[order[t]];
        for (auto& comp : members) {
            std::vector<std::size_t> survivors;
            for (const auto n : comp)
                if (alive[n]) survivors.push_back(n);
            if (survivors.size() < 2) continue;
            std::sort(survivors.begin(), survivors.end(), [&](std::size_t a, std::size_t b) { return precedes(s, a, b); });
            for (std::size_t k = 1; k < survivors.size(); ++k) {
                alive[survivors[k]] = 0;
                persistence[survivors[k]] = level - s.values[survivors[k]];
            }
        }
    }
    return persistence;
}

// Boundary nodes of a member set on an nx x ny x nz lattice, labelled by 26-connected
// flood fill. Labels are -1 off the boundary, otherwise 0.. in discovery order.
inline std::vector<long> oracle_front_labels(std::size_t nx, std::size_t ny, std::size_t nz,
                                             const std::vector<std::uint8_t>& member) {
    auto at = [&](long i, long j, long k) -> bool {
        if (i < 0 || j < 0 || k < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny) ||
            k >= static_cast<long>(nz))
            return false;
        return member[static_cast<std::size_t>(i) + nx * (static_cast<std::size_t>(j) + ny * static_cast<std::size_t>(k))];
    };
    std::vector<std::uint8_t> boundary(member.size(), 0);
    for (long k = 0; k < static_cast<long>(nz); ++k)
        for (long j = 0; j < static_cast<long>(ny); ++j)
            for (long i = 0; i < static_cast<long>(nx); ++i) {
                if (!at(i, j, k)) continue;
                const bool inner = at(i - 1, j, k) && at(i + 1, j, k) && at(i, j - 1, k) && at(i, j + 1, k) &&
                                   at(i, j, k - 1) && at(i, j, k + 1);
                boundary[static_cast<std::size_t>(i) + nx * (static_cast<std::size_t>(j) + ny * static_cast<std::size_t>(k))] = !inner;
            }
    std::vector<long> label(member.size(), -1);
    long next = 0;
    for (std::size_t start = 0; start < member.size(); ++start) {
        if (!boundary[start] || label[start] >= 0) continue;
        std::vector<std::size_t> stack{start};
        label[start] = next;
        while (!stack.empty()) {
            const std::size_t n = stack.back();
            stack.pop_back();
            const long i = static_cast<long>(n % nx), j = static_cast<long>((n / nx) % ny),
                       k = static_cast<long>(n / (nx * ny));
            for (long dk = -1; dk <= 1; ++dk)
                for (long dj = -1; dj <= 1; ++dj)
                    for (long di = -1; di <= 1; ++di) {
                        const long a = i + di, b = j + dj, c = k + dk;
                        if (a < 0 || b < 0 || c < 0 || a >= static_cast<long>(nx) || b >= static_cast<long>(ny) ||
                            c >= static_cast<long>(nz))
                            continue;
                        const std::size_t m = static_cast<std::size_t>(a) +
                                              nx * (static_cast<std::size_t>(b) + ny * static_cast<std::size_t>(c));
                        if (boundary[m] && label[m] < 0) {
                            label[m] = next;
                            stack.push_back(m);
                        }
                    }
        }
        ++next;
    }
    return label;
}

}  // namespace seascape::testing
