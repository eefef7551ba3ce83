#pragma once

#include <array>
#include <optional>

#include "orbsafe/dynamics.hpp"
#include "orbsafe/solver.hpp"

namespace orbsafe {

// Operational modes; transitions only along the cycle
// Nominal -> Evasive -> Return -> Nominal.
enum class Mode { Nominal, Evasive, Return };

const char* mode_name(Mode m);

enum class EscapeMode {
    RaiseDriftBack = 1,    // climb radially, drift backward
    LowerAccelForward,     // descend radially, accelerate forward
    TangentialBrake,       // pure tangential braking
    TangentialAccel,       // pure tangential acceleration
};

struct PdGains {
    double kp_x = 0.0;  // 1/s^2
    double kp_y = 0.0;
    double kd_x = 0.0;  // 1/s
    double kd_y = 0.0;
    bool operator==(const PdGains&) const = default;
};

// Gain columns for the station-keeping and evasive phases; Return reuses the
// nominal column.
struct GainTable {
    PdGains nominal{1.0e-4, 1.0e-4, 2.0e-2, 2.0e-2};
    PdGains evasive{5.0e-4, 5.0e-4, 4.4e-2, 4.4e-2};
    bool operator==(const GainTable&) const = default;
};

struct GuardConfig {
    double guard_band = 0.0;   // Nominal -> Evasive when phi <= guard_band
    double safe_margin = 0.0;  // Evasive -> Return when phi >= safe_margin
    TargetSetSpec recovery_target;  // box; Return -> Nominal inside it
    double eps_vx = 0.01;  // velocity tolerances for the recovery guard (m/s)
    double eps_vy = 0.01;

    void validate() const;
    bool operator==(const GuardConfig&) const = default;
};

struct EscapeOffsets {
    double radial = 200.0;      // m
    double drift_x = 300.0;     // m
    double tangential = 500.0;  // m
    bool operator==(const EscapeOffsets&) const = default;
};

struct SupervisorState {
    Mode mode = Mode::Nominal;
    std::optional<EscapeMode> escape;  // present iff mode == Evasive
    StateVec nominal_target{};         // (x_f, y_f, vx_f, vy_f)
    double time_in_mode = 0.0;
};

// Saturated PD law: u_i = clamp(-kp_i*(pos_i - pos_f) - kd_i*(vel_i - vel_f)).
InputVec pd_control(const StateVec& state, const StateVec& target, const PdGains& gains,
                    double u_max);

// Waypoint for one escape mode, relative to the current state, with zero
// target velocity.
StateVec escape_waypoint(EscapeMode mode, const StateVec& state, const EscapeOffsets& offsets);

// Previews each candidate waypoint under the evasive PD law with zero
// disturbance for `lookahead` seconds and picks the mode whose preview keeps
// the largest minimum value-function margin. Ties break toward the lowest
// mode number.
EscapeMode select_escape_mode(const StateVec& state, const ValueFunctionResult& value,
                              const std::array<StateVec, 4>& candidates,
                              const PdGains& evasive_gains, const OrbitGameParams& params,
                              double lookahead, double dt);

// 2 cells' worth of typical per-node field variation: the default margin used
// to trigger evasion strictly before the tube boundary.
double guard_band_estimate(const ScalarField& field);

// Median over nodes of max_i |D0_i phi| * dx_i (one-cell field variation).
double median_cell_variation(const ScalarField& field);

struct SupervisorStep {
    SupervisorState next;
    InputVec u;
};

// One guard evaluation (fixed order, at most one transition) followed by the
// active mode's control law. Off-grid value samples read clamped, safe-side
// positive.
SupervisorStep step_supervisor(const SupervisorState& sup, const StateVec& state,
                               const ValueFunctionResult& value, const GuardConfig& guards,
                               const GainTable& gains, const EscapeOffsets& offsets,
                               double lookahead, const OrbitGameParams& params, double dt);

}  // namespace orbsafe
