#include "orbsafe/supervisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace orbsafe {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Nominal: return "Nominal";
        case Mode::Evasive: return "Evasive";
        case Mode::Return: return "Return";
    }
    return "?";
}

void GuardConfig::validate() const {
    if (!(guard_band >= 0.0) || !std::isfinite(guard_band))
        throw std::invalid_argument("GuardConfig: guard_band must be finite and >= 0");
    if (!(safe_margin > guard_band) || !std::isfinite(safe_margin))
        throw std::invalid_argument("GuardConfig: safe_margin must be finite and > guard_band");
    if (!(eps_vx > 0.0) || !(eps_vy > 0.0))
        throw std::invalid_argument("GuardConfig: velocity tolerances must be > 0");
    if (recovery_target.kind != TargetSetSpec::Kind::Box)
        throw std::invalid_argument("GuardConfig: recovery_target must be a box");
    recovery_target.validate();
}

namespace {
inline double clamp(double v, double bound) { return std::clamp(v, -bound, bound); }
}  // namespace

InputVec pd_control(const StateVec& state, const StateVec& target, const PdGains& gains,
                    double u_max) {
    const double ux = -gains.kp_x * (state.x - target.x) - gains.kd_x * (state.vx - target.vx);
    const double uy = -gains.kp_y * (state.y - target.y) - gains.kd_y * (state.vy - target.vy);
    return {clamp(ux, u_max), clamp(uy, u_max)};
}

StateVec escape_waypoint(EscapeMode mode, const StateVec& state, const EscapeOffsets& offsets) {
    switch (mode) {
        case EscapeMode::RaiseDriftBack:
            return {state.x - offsets.drift_x, state.y + offsets.radial, 0.0, 0.0};
        case EscapeMode::LowerAccelForward:
            return {state.x + offsets.drift_x, state.y - offsets.radial, 0.0, 0.0};
        case EscapeMode::TangentialBrake:
            return {state.x - offsets.tangential, state.y, 0.0, 0.0};
        case EscapeMode::TangentialAccel:
            return {state.x + offsets.tangential, state.y, 0.0, 0.0};
    }
    return state;
}

EscapeMode select_escape_mode(const StateVec& state, const ValueFunctionResult& value,
                              const std::array<StateVec, 4>& candidates,
                              const PdGains& evasive_gains, const OrbitGameParams& params,
                              double lookahead, double dt) {
    const std::size_t steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(lookahead / dt)));

    double best_min = -std::numeric_limits<double>::infinity();
    EscapeMode best = EscapeMode::RaiseDriftBack;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const StateVec& waypoint = candidates[c];
        const InputPolicy preview = [&](double, const StateVec& s) {
            return pd_control(s, waypoint, evasive_gains, params.u_max);
        };
        const auto path = propagate(state, preview, nullptr, dt, steps, params);
        double min_phi = std::numeric_limits<double>::infinity();
        for (const auto& s : path) min_phi = std::min(min_phi, sample(value.final, s).value);
        if (min_phi > best_min) {
            best_min = min_phi;
            best = static_cast<EscapeMode>(c + 1);
        }
    }
    return best;
}

double median_cell_variation(const ScalarField& field) {
    const auto grads = gradient_central(field);
    std::array<double, kAxes> dx{};
    for (std::size_t a = 0; a < kAxes; ++a) dx[a] = field.spec.axes[a].spacing();
    std::vector<double> variation(field.values.size());
    for (std::size_t i = 0; i < variation.size(); ++i) {
        double v = 0.0;
        for (std::size_t a = 0; a < kAxes; ++a)
            v = std::max(v, std::abs(grads[a][i]) * dx[a]);
        variation[i] = v;
    }
    const std::size_t mid = variation.size() / 2;
    std::nth_element(variation.begin(), variation.begin() + mid, variation.end());
    return variation[mid];
}

double guard_band_estimate(const ScalarField& field) { return 2.0 * median_cell_variation(field); }

SupervisorStep step_supervisor(const SupervisorState& sup, const StateVec& state,
                               const ValueFunctionResult& value, const GuardConfig& guards,
                               const GainTable& gains, const EscapeOffsets& offsets,
                               double lookahead, const OrbitGameParams& params, double dt) {
    SupervisorStep out;
    out.next = sup;

    const double phi = sample(value.final, state).value;

    // Guards in cycle order; at most one edge fires per step.
    switch (sup.mode) {
        case Mode::Nominal:
            if (phi <= guards.guard_band) {
                out.next.mode = Mode::Evasive;
                std::array<StateVec, 4> candidates;
                for (std::size_t c = 0; c < 4; ++c)
                    candidates[c] =
                        escape_waypoint(static_cast<EscapeMode>(c + 1), state, offsets);
                out.next.escape = select_escape_mode(state, value, candidates, gains.evasive,
                                                     params, lookahead, dt);
                out.next.time_in_mode = 0.0;
            }
            break;
        case Mode::Evasive:
            if (phi >= guards.safe_margin) {
                out.next.mode = Mode::Return;
                out.next.escape.reset();
                out.next.time_in_mode = 0.0;
            }
            break;
        case Mode::Return: {
            const bool in_box = target_value(guards.recovery_target, state) <= 0.0;
            if (in_box && std::abs(state.vx) <= guards.eps_vx &&
                std::abs(state.vy) <= guards.eps_vy) {
                out.next.mode = Mode::Nominal;
                out.next.time_in_mode = 0.0;
            }
            break;
        }
    }
    if (out.next.mode == sup.mode) out.next.time_in_mode = sup.time_in_mode + dt;

    switch (out.next.mode) {
        case Mode::Nominal:
            out.u = pd_control(state, out.next.nominal_target, gains.nominal, params.u_max);
            break;
        case Mode::Evasive: {
            const StateVec waypoint = escape_waypoint(*out.next.escape, state, offsets);
            out.u = pd_control(state, waypoint, gains.evasive, params.u_max);
            break;
        }
        case Mode::Return: {
            StateVec center{};
            for (std::size_t a = 0; a < kAxes; ++a) {
                const auto& iv = guards.recovery_target.intervals[a];
                center[a] = iv ? 0.5 * (iv->lo + iv->hi) : 0.0;
            }
            center.vx = 0.0;
            center.vy = 0.0;
            out.u = pd_control(state, center, gains.nominal, params.u_max);
            break;
        }
    }
    return out;
}

}  // namespace orbsafe
