#include "orbsafe/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace orbsafe {

void OrbitGameParams::validate() const {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("OrbitGameParams: omega must be finite and >= 0");
    if (!(u_max >= 0.0) || !std::isfinite(u_max))
        throw std::invalid_argument("OrbitGameParams: u_max must be finite and >= 0");
    if (!(d_max >= 0.0) || !std::isfinite(d_max))
        throw std::invalid_argument("OrbitGameParams: d_max must be finite and >= 0");
    if (!(d_fcc > 0.0) || !std::isfinite(d_fcc))
        throw std::invalid_argument("OrbitGameParams: d_fcc must be finite and > 0");
}

std::vector<std::string> OrbitGameParams::warnings() const {
    std::vector<std::string> out;
    if (d_max >= u_max)
        out.push_back(
            "d_max >= u_max: disturbance authority matches or exceeds control authority; "
            "the avoidance guarantee does not hold");
    return out;
}

Mat4 Mat4::identity() {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i) r(i, i) = 1.0;
    return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) {
            double a = (*this)(i, k);
            for (std::size_t j = 0; j < 4; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

StateVec Mat4::operator*(const StateVec& v) const {
    StateVec r;
    for (std::size_t i = 0; i < 4; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 4; ++j) acc += (*this)(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

StateVec hcw_vector_field(const StateVec& s, const InputVec& u, const InputVec& d,
                          const OrbitGameParams& params) {
    const double w = params.omega;
    return {s.vx, s.vy, -2.0 * w * s.vy + u.ax + d.ax,
            2.0 * w * s.vx + 3.0 * w * w * s.y + u.ay + d.ay};
}

Mat4 hcw_transition_matrix(double t, const OrbitGameParams& params) {
    const double w = params.omega;
    Mat4 p;
    if (w == 0.0) {
        // Free drift: positions advance linearly, velocities constant.
        p = Mat4::identity();
        p(0, 2) = t;
        p(1, 3) = t;
        return p;
    }
    const double wt = w * t;
    const double c = std::cos(wt);
    const double s = std::sin(wt);

    // Row order (x, y, vx, vy); x tangential, y radial.
    p(0, 0) = 1.0;
    p(0, 1) = 6.0 * (s - wt);
    p(0, 2) = (4.0 * s - 3.0 * wt) / w;
    p(0, 3) = 2.0 * (c - 1.0) / w;

    p(1, 1) = 4.0 - 3.0 * c;
    p(1, 2) = 2.0 * (1.0 - c) / w;
    p(1, 3) = s / w;

    p(2, 1) = 6.0 * w * (c - 1.0);
    p(2, 2) = 4.0 * c - 3.0;
    p(2, 3) = -2.0 * s;

    p(3, 1) = 3.0 * w * s;
    p(3, 2) = 2.0 * s;
    p(3, 3) = c;
    return p;
}

std::vector<StateVec> propagate(const StateVec& state, const InputPolicy& u_policy,
                                const InputPolicy& d_policy, double dt, std::size_t steps,
                                const OrbitGameParams& params) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("propagate: dt must be finite and > 0");
    if (steps < 1) throw std::invalid_argument("propagate: steps must be >= 1");

    std::vector<StateVec> out;
    out.reserve(steps + 1);
    out.push_back(state);
    StateVec x = state;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const InputVec u = u_policy ? u_policy(t, x) : InputVec{};
        const InputVec d = d_policy ? d_policy(t, x) : InputVec{};
        const StateVec k1 = hcw_vector_field(x, u, d, params);
        const StateVec k2 = hcw_vector_field(x + (0.5 * dt) * k1, u, d, params);
        const StateVec k3 = hcw_vector_field(x + (0.5 * dt) * k2, u, d, params);
        const StateVec k4 = hcw_vector_field(x + dt * k3, u, d, params);
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(x);
    }
    return out;
}

namespace {
inline double sign_pos(double v) { return v < 0.0 ? -1.0 : 1.0; }
}  // namespace

std::pair<InputVec, InputVec> optimal_inputs(const std::array<double, 4>& costate,
                                             const OrbitGameParams& params) {
    const double s3 = sign_pos(costate[2]);
    const double s4 = sign_pos(costate[3]);
    InputVec u{params.u_max * s3, params.u_max * s4};
    InputVec d{-params.d_max * s3, -params.d_max * s4};
    return {u, d};
}

double hamiltonian(const StateVec& state, const std::array<double, 4>& costate,
                   const OrbitGameParams& params) {
    const double w = params.omega;
    const double drift = costate[0] * state.vx + costate[1] * state.vy +
                         costate[2] * (-2.0 * w * state.vy) +
                         costate[3] * (2.0 * w * state.vx + 3.0 * w * w * state.y);
    const double grad_v = std::abs(costate[2]) + std::abs(costate[3]);
    return drift + (params.u_max - params.d_max) * grad_v;
}

std::array<double, 4> hamiltonian_partials_bound(const StateBox& box,
                                                 const OrbitGameParams& params) {
    const auto absmax = [](const AxisRange& r) { return std::max(std::abs(r.lo), std::abs(r.hi)); };
    const double w = params.omega;
    const double vx_m = absmax(box[2]);
    const double vy_m = absmax(box[3]);
    const double y_m = absmax(box[1]);
    const double input = params.u_max + params.d_max;
    return {vx_m, vy_m, 2.0 * w * vy_m + input, 2.0 * w * vx_m + 3.0 * w * w * y_m + input};
}

}  // namespace orbsafe
