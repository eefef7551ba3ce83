#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "orbsafe/grid.hpp"

namespace orbsafe {

namespace {

struct Segment {
    std::uint64_t a = 0;  // edge-crossing point ids
    std::uint64_t b = 0;
    bool used = false;
};

// Edge ids: ((j * na + i) << 1) | dir, dir 0 = edge along the first free axis
// (from (i,j) to (i+1,j)), dir 1 = edge along the second (to (i,j+1)).
std::uint64_t edge_id(std::size_t i, std::size_t j, std::size_t na, unsigned dir) {
    return ((static_cast<std::uint64_t>(j) * na + i) << 1) | dir;
}

}  // namespace

std::vector<Polyline> zero_contour_slice(const ScalarField& field,
                                         const std::array<std::optional<double>, kAxes>& fixed) {
    const auto& spec = field.spec;
    std::array<std::size_t, 2> free_axes{};
    std::size_t nfree = 0, nfixed = 0;
    for (std::size_t a = 0; a < kAxes; ++a) {
        if (fixed[a]) {
            ++nfixed;
            if (*fixed[a] < spec.axes[a].min || *fixed[a] > spec.axes[a].max)
                throw std::invalid_argument(std::string("zero_contour_slice: fixed value for ") +
                                            kAxisNames[a] + " outside grid bounds");
        } else {
            if (nfree < 2) free_axes[nfree] = a;
            ++nfree;
        }
    }
    if (nfixed != 2)
        throw std::invalid_argument("zero_contour_slice: exactly two axes must be fixed");

    const std::size_t fa = free_axes[0], fb = free_axes[1];
    const std::size_t na = spec.axes[fa].count, nb = spec.axes[fb].count;

    // Slice values; interpolated when the fixed values are off-node.
    std::vector<double> slice(na * nb);
    {
        StateVec probe;
        for (std::size_t a = 0; a < kAxes; ++a)
            if (fixed[a]) probe[a] = *fixed[a];
        for (std::size_t j = 0; j < nb; ++j) {
            probe[fb] = spec.axes[fb].coord(j);
            for (std::size_t i = 0; i < na; ++i) {
                probe[fa] = spec.axes[fa].coord(i);
                slice[j * na + i] = sample(field, probe).value;
            }
        }
    }
    const auto val = [&](std::size_t i, std::size_t j) { return slice[j * na + i]; };
    const auto inside = [&](std::size_t i, std::size_t j) { return val(i, j) < 0.0; };

    // One crossing point per sign-change edge, shared between the two
    // adjacent cells so chained endpoints compare bitwise-equal.
    std::unordered_map<std::uint64_t, std::array<double, 2>> points;
    const auto crossing = [&](std::size_t i, std::size_t j, unsigned dir) {
        const std::uint64_t id = edge_id(i, j, na, dir);
        if (!points.count(id)) {
            const std::size_t i2 = dir == 0 ? i + 1 : i;
            const std::size_t j2 = dir == 0 ? j : j + 1;
            const double v0 = val(i, j), v1 = val(i2, j2);
            const double t = v0 / (v0 - v1);
            const double a0 = spec.axes[fa].coord(i), b0 = spec.axes[fb].coord(j);
            std::array<double, 2> p{a0, b0};
            if (dir == 0)
                p[0] += t * spec.axes[fa].spacing();
            else
                p[1] += t * spec.axes[fb].spacing();
            points.emplace(id, p);
        }
        return id;
    };

    std::vector<Segment> segments;
    for (std::size_t j = 0; j + 1 < nb; ++j) {
        for (std::size_t i = 0; i + 1 < na; ++i) {
            unsigned code = 0;
            if (inside(i, j)) code |= 1;          // bottom-left
            if (inside(i + 1, j)) code |= 2;      // bottom-right
            if (inside(i + 1, j + 1)) code |= 4;  // top-right
            if (inside(i, j + 1)) code |= 8;      // top-left
            if (code == 0 || code == 15) continue;

            const auto B = [&] { return crossing(i, j, 0); };
            const auto T = [&] { return crossing(i, j + 1, 0); };
            const auto L = [&] { return crossing(i, j, 1); };
            const auto R = [&] { return crossing(i + 1, j, 1); };
            const auto add = [&](std::uint64_t p, std::uint64_t q) {
                segments.push_back({p, q, false});
            };

            switch (code) {
                case 1: add(L(), B()); break;
                case 2: add(B(), R()); break;
                case 3: add(L(), R()); break;
                case 4: add(T(), R()); break;
                case 6: add(B(), T()); break;
                case 7: add(L(), T()); break;
                case 8: add(L(), T()); break;
                case 9: add(B(), T()); break;
                case 11: add(T(), R()); break;
                case 12: add(L(), R()); break;
                case 13: add(B(), R()); break;
                case 14: add(L(), B()); break;
                case 5: {  // bottom-left and top-right inside
                    const double center =
                        0.25 * (val(i, j) + val(i + 1, j) + val(i, j + 1) + val(i + 1, j + 1));
                    if (center < 0.0) {
                        add(B(), R());
                        add(L(), T());
                    } else {
                        add(L(), B());
                        add(T(), R());
                    }
                    break;
                }
                case 10: {  // bottom-right and top-left inside
                    const double center =
                        0.25 * (val(i, j) + val(i + 1, j) + val(i, j + 1) + val(i + 1, j + 1));
                    if (center < 0.0) {
                        add(L(), B());
                        add(T(), R());
                    } else {
                        add(B(), R());
                        add(L(), T());
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // Chain segments into polylines. Every crossing point touches at most two
    // segments, so chains are simple paths or closed loops.
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_point;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_point[segments[s].a].push_back(s);
        by_point[segments[s].b].push_back(s);
    }

    const auto next_segment = [&](std::uint64_t point, std::size_t except) -> std::ptrdiff_t {
        for (std::size_t s : by_point[point])
            if (s != except && !segments[s].used) return static_cast<std::ptrdiff_t>(s);
        return -1;
    };

    std::vector<Polyline> out;
    for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (segments[s0].used) continue;

        // Walk backwards to find the chain start (or detect a loop).
        std::size_t start_seg = s0;
        std::uint64_t start_pt = segments[s0].a;
        {
            std::size_t cur = s0;
            std::uint64_t pt = segments[s0].a;
            while (true) {
                const std::ptrdiff_t prev = next_segment(pt, cur);
                if (prev < 0) break;
                cur = static_cast<std::size_t>(prev);
                pt = segments[cur].a == pt ? segments[cur].b : segments[cur].a;
                if (cur == s0) break;  // loop
            }
            start_seg = cur;
            start_pt = pt;
        }

        Polyline poly;
        poly.points.push_back(points.at(start_pt));
        std::size_t cur = start_seg;
        std::uint64_t pt = start_pt;
        while (true) {
            segments[cur].used = true;
            pt = segments[cur].a == pt ? segments[cur].b : segments[cur].a;
            poly.points.push_back(points.at(pt));
            const std::ptrdiff_t nxt = next_segment(pt, cur);
            if (nxt < 0) break;
            cur = static_cast<std::size_t>(nxt);
        }
        poly.closed = poly.points.size() > 2 && poly.points.front() == poly.points.back();
        out.push_back(std::move(poly));
    }
    return out;
}

}  // namespace orbsafe
