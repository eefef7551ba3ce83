#include "orbsafe/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "orbsafe/parallel.hpp"

namespace orbsafe {

void GridSpec::validate() const {
    for (std::size_t a = 0; a < kAxes; ++a) {
        const auto& ax = axes[a];
        if (!std::isfinite(ax.min) || !std::isfinite(ax.max) || !(ax.min < ax.max))
            throw std::invalid_argument(std::string("GridSpec: axis ") + kAxisNames[a] +
                                        " requires min < max");
        if (ax.count < 3)
            throw std::invalid_argument(std::string("GridSpec: axis ") + kAxisNames[a] +
                                        " requires count >= 3");
    }
}

std::array<std::size_t, kAxes> GridSpec::strides() const {
    std::array<std::size_t, kAxes> s{};
    s[3] = 1;
    s[2] = axes[3].count;
    s[1] = s[2] * axes[2].count;
    s[0] = s[1] * axes[1].count;
    return s;
}

std::size_t GridSpec::index(std::size_t ix, std::size_t iy, std::size_t ivx,
                            std::size_t ivy) const {
    const auto s = strides();
    return ix * s[0] + iy * s[1] + ivx * s[2] + ivy * s[3];
}

StateVec GridSpec::node_state(std::size_t flat) const {
    const auto s = strides();
    const std::size_t ix = flat / s[0];
    flat %= s[0];
    const std::size_t iy = flat / s[1];
    flat %= s[1];
    const std::size_t ivx = flat / s[2];
    const std::size_t ivy = flat % s[2];
    return {axes[0].coord(ix), axes[1].coord(iy), axes[2].coord(ivx), axes[3].coord(ivy)};
}

StateBox GridSpec::bounds() const {
    StateBox b;
    for (std::size_t a = 0; a < kAxes; ++a) b[a] = {axes[a].min, axes[a].max};
    return b;
}

GridSpec default_grid() {
    GridSpec g;
    g.axes[0] = {-1500.0, 1500.0, 31};
    g.axes[1] = {-750.0, 750.0, 31};
    g.axes[2] = {-5.0, 5.0, 31};
    g.axes[3] = {-5.0, 5.0, 31};
    return g;
}

void TargetSetSpec::validate() const {
    if (kind == Kind::Disc) {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw std::invalid_argument("TargetSetSpec: disc radius must be finite and > 0");
        return;
    }
    bool any = false;
    for (std::size_t a = 0; a < kAxes; ++a) {
        if (!intervals[a]) continue;
        any = true;
        if (!std::isfinite(intervals[a]->lo) || !std::isfinite(intervals[a]->hi) ||
            !(intervals[a]->lo < intervals[a]->hi))
            throw std::invalid_argument(std::string("TargetSetSpec: box axis ") + kAxisNames[a] +
                                        " requires lo < hi");
    }
    if (!any) throw std::invalid_argument("TargetSetSpec: box must constrain at least one axis");
}

TargetSetSpec disc_target(double radius) {
    TargetSetSpec t;
    t.kind = TargetSetSpec::Kind::Disc;
    t.radius = radius;
    return t;
}

TargetSetSpec box_target(const std::array<std::optional<AxisRange>, kAxes>& intervals) {
    TargetSetSpec t;
    t.kind = TargetSetSpec::Kind::Box;
    t.intervals = intervals;
    return t;
}

double target_value(const TargetSetSpec& target, const StateVec& state) {
    if (target.kind == TargetSetSpec::Kind::Disc)
        return std::hypot(state.x, state.y) - target.radius;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < kAxes; ++a) {
        if (!target.intervals[a]) continue;
        const double lo = target.intervals[a]->lo;
        const double hi = target.intervals[a]->hi;
        worst = std::max(worst, std::max(lo - state[a], state[a] - hi));
    }
    return worst;
}

ScalarField build_target_field(const GridSpec& spec, const TargetSetSpec& target) {
    spec.validate();
    target.validate();
    ScalarField f;
    f.spec = spec;
    f.values.resize(spec.size());
    parallel_for(spec.size(), 0, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            f.values[i] = target_value(target, spec.node_state(i));
    });
    return f;
}

SampleResult sample(const ScalarField& field, const StateVec& state) {
    const auto& spec = field.spec;
    std::array<std::size_t, kAxes> i0{};
    std::array<double, kAxes> frac{};
    double clamp_dist = 0.0;
    for (std::size_t a = 0; a < kAxes; ++a) {
        const auto& ax = spec.axes[a];
        double v = state[a];
        if (v < ax.min) {
            clamp_dist = std::max(clamp_dist, ax.min - v);
            v = ax.min;
        } else if (v > ax.max) {
            clamp_dist = std::max(clamp_dist, v - ax.max);
            v = ax.max;
        }
        double u = (v - ax.min) / ax.spacing();
        // Snap to the nearest node so on-node queries return stored values
        // exactly despite the rounding of the coordinate map.
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-9 * std::max(1.0, std::abs(u))) u = r;
        double cell = std::floor(u);
        if (cell > static_cast<double>(ax.count - 2)) cell = static_cast<double>(ax.count - 2);
        i0[a] = static_cast<std::size_t>(cell);
        frac[a] = u - cell;
    }

    const auto s = spec.strides();
    const std::size_t base = i0[0] * s[0] + i0[1] * s[1] + i0[2] * s[2] + i0[3] * s[3];
    double acc = 0.0;
    for (unsigned corner = 0; corner < 16; ++corner) {
        double w = 1.0;
        std::size_t idx = base;
        for (std::size_t a = 0; a < kAxes; ++a) {
            if (corner & (1u << a)) {
                w *= frac[a];
                idx += s[a];
            } else {
                w *= 1.0 - frac[a];
            }
        }
        if (w != 0.0) acc += w * field.values[idx];
    }
    return {acc + clamp_dist, clamp_dist > 0.0};
}

namespace {

// Neighbor value along axis `a`, with linear-extrapolation ghosts past the edge.
inline double neighbor(const std::vector<double>& v, std::size_t flat, std::size_t i,
                       std::size_t count, std::size_t stride, int dir) {
    if (dir < 0) {
        if (i == 0) return 2.0 * v[flat] - v[flat + stride];
        return v[flat - stride];
    }
    if (i + 1 == count) return 2.0 * v[flat] - v[flat - stride];
    return v[flat + stride];
}

template <typename Fn>
void for_each_node(const GridSpec& spec, Fn&& fn) {
    const auto s = spec.strides();
    std::size_t flat = 0;
    for (std::size_t ix = 0; ix < spec.axes[0].count; ++ix)
        for (std::size_t iy = 0; iy < spec.axes[1].count; ++iy)
            for (std::size_t ivx = 0; ivx < spec.axes[2].count; ++ivx)
                for (std::size_t ivy = 0; ivy < spec.axes[3].count; ++ivy, ++flat)
                    fn(flat, std::array<std::size_t, 4>{ix, iy, ivx, ivy}, s);
}

}  // namespace

UpwindGradients gradient_upwind(const ScalarField& field) {
    const auto& spec = field.spec;
    UpwindGradients g;
    for (std::size_t a = 0; a < kAxes; ++a) {
        g.lower[a].resize(spec.size());
        g.upper[a].resize(spec.size());
    }
    std::array<double, kAxes> inv_dx{};
    for (std::size_t a = 0; a < kAxes; ++a) inv_dx[a] = 1.0 / spec.axes[a].spacing();

    for_each_node(spec, [&](std::size_t flat, const std::array<std::size_t, 4>& idx,
                            const std::array<std::size_t, 4>& s) {
        const double v = field.values[flat];
        for (std::size_t a = 0; a < kAxes; ++a) {
            const double lo = neighbor(field.values, flat, idx[a], spec.axes[a].count, s[a], -1);
            const double hi = neighbor(field.values, flat, idx[a], spec.axes[a].count, s[a], +1);
            g.lower[a][flat] = (v - lo) * inv_dx[a];
            g.upper[a][flat] = (hi - v) * inv_dx[a];
        }
    });
    return g;
}

std::array<std::vector<double>, kAxes> gradient_central(const ScalarField& field) {
    const auto& spec = field.spec;
    std::array<std::vector<double>, kAxes> g;
    for (std::size_t a = 0; a < kAxes; ++a) g[a].resize(spec.size());
    std::array<double, kAxes> half_inv_dx{};
    for (std::size_t a = 0; a < kAxes; ++a) half_inv_dx[a] = 0.5 / spec.axes[a].spacing();

    for_each_node(spec, [&](std::size_t flat, const std::array<std::size_t, 4>& idx,
                            const std::array<std::size_t, 4>& s) {
        for (std::size_t a = 0; a < kAxes; ++a) {
            const double lo = neighbor(field.values, flat, idx[a], spec.axes[a].count, s[a], -1);
            const double hi = neighbor(field.values, flat, idx[a], spec.axes[a].count, s[a], +1);
            g[a][flat] = (hi - lo) * half_inv_dx[a];
        }
    });
    return g;
}

}  // namespace orbsafe
