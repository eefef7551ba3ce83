#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbsafe/dynamics.hpp"

namespace orbsafe {

// Axis order is fixed as (x, y, vx, vy).
inline constexpr std::size_t kAxes = 4;
inline constexpr const char* kAxisNames[kAxes] = {"x", "y", "vx", "vy"};

struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    std::uint32_t count = 0;

    double spacing() const { return (max - min) / static_cast<double>(count - 1); }
    double coord(std::size_t i) const {
        return min + spacing() * static_cast<double>(i);
    }
    bool operator==(const AxisSpec&) const = default;
};

struct GridSpec {
    std::array<AxisSpec, kAxes> axes;

    // Throws std::invalid_argument unless min < max and count >= 3 on every axis.
    void validate() const;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.count;
        return n;
    }
    // Row-major, x slowest / vy fastest.
    std::array<std::size_t, kAxes> strides() const;
    std::size_t index(std::size_t ix, std::size_t iy, std::size_t ivx, std::size_t ivy) const;
    StateVec node_state(std::size_t flat) const;
    StateBox bounds() const;
    bool operator==(const GridSpec&) const = default;
};

// Defaults sized for kilometre-scale proximity operations; every axis
// configurable.
GridSpec default_grid();

struct ScalarField {
    GridSpec spec;
    std::vector<double> values;

    double at(std::size_t flat) const { return values[flat]; }
};

// Implicit target set: disc in the position plane, or an axis-aligned box
// constraining any subset of the four axes.
struct TargetSetSpec {
    enum class Kind { Disc, Box };
    Kind kind = Kind::Disc;
    double radius = 0.0;  // disc only
    std::array<std::optional<AxisRange>, kAxes> intervals{};  // box only

    void validate() const;
    bool operator==(const TargetSetSpec&) const = default;
};

TargetSetSpec disc_target(double radius);
TargetSetSpec box_target(const std::array<std::optional<AxisRange>, kAxes>& intervals);

// Analytic implicit function of the target: disc -> planar signed distance
// sqrt(x^2+y^2) - r; box -> max over constrained axes of (lo - s_i, s_i - hi).
double target_value(const TargetSetSpec& target, const StateVec& state);

// Samples target_value at every node. Throws on degenerate target or grid.
ScalarField build_target_field(const GridSpec& spec, const TargetSetSpec& target);

struct SampleResult {
    double value = 0.0;
    bool out_of_domain = false;
};

// Multilinear interpolation over the 16 enclosing nodes; exact at nodes.
// Outside the grid: value at the clamped boundary point plus the L-inf
// clamped-out distance, with out_of_domain set.
SampleResult sample(const ScalarField& field, const StateVec& state);

// One-sided differences per axis per node. At boundaries the outward stencil
// uses linearly extrapolated ghost values (ghost = 2*edge - interior).
struct UpwindGradients {
    std::array<std::vector<double>, kAxes> lower;  // D^-
    std::array<std::vector<double>, kAxes> upper;  // D^+
};
UpwindGradients gradient_upwind(const ScalarField& field);

// Central differences (ghost-extrapolated at boundaries), one field per axis.
std::array<std::vector<double>, kAxes> gradient_central(const ScalarField& field);

// --- Binary field format ("HJF1") ------------------------------------------
// magic "HJF1", LE u32 axis count (=4), per axis {f64 min, f64 max, u32 count},
// then row-major f64 values. Round-trips bit-exactly.
void write_field(const std::string& path, const ScalarField& field);
ScalarField read_field(const std::string& path);

// --- Zero-contour extraction ------------------------------------------------
struct Polyline {
    std::vector<std::array<double, 2>> points;
    bool closed = false;
};

// Marching squares on the 2D slice obtained by fixing exactly two axes
// (values must lie within bounds). Free-plane coordinates keep axis order.
// Uniform-sign slices produce an empty list.
std::vector<Polyline> zero_contour_slice(const ScalarField& field,
                                         const std::array<std::optional<double>, kAxes>& fixed);

}  // namespace orbsafe
