#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace orbsafe {

// Relative state in the rotating in-plane frame: x tangential, y radial (m),
// vx/vy the matching velocities (m/s).
struct StateVec {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;

    double& operator[](std::size_t i) { return (&x)[i]; }
    double operator[](std::size_t i) const { return (&x)[i]; }
    bool operator==(const StateVec&) const = default;
};

inline StateVec operator+(const StateVec& a, const StateVec& b) {
    return {a.x + b.x, a.y + b.y, a.vx + b.vx, a.vy + b.vy};
}
inline StateVec operator*(double s, const StateVec& a) {
    return {s * a.x, s * a.y, s * a.vx, s * a.vy};
}

// Acceleration input, tangential/radial (m/s^2). Used for both the control
// and the disturbance channel.
struct InputVec {
    double ax = 0.0;
    double ay = 0.0;
    bool operator==(const InputVec&) const = default;
};

struct OrbitGameParams {
    double omega = 0.0011;  // mean motion of the reference circular orbit (rad/s)
    double u_max = 0.1;     // symmetric control acceleration bound (m/s^2)
    double d_max = 0.05;    // symmetric disturbance acceleration bound (m/s^2)
    double d_fcc = 200.0;   // collision-disc radius (m); mission config, no canonical value

    // Throws std::invalid_argument on hard violations (omega < 0, negative
    // bounds, d_fcc <= 0). d_max >= u_max is legal but forfeits the avoidance
    // guarantee; see warnings().
    void validate() const;
    std::vector<std::string> warnings() const;
    bool operator==(const OrbitGameParams&) const = default;
};

// Dense 4x4 real matrix, row-major. Enough linear algebra for the state
// transition matrix; not a general-purpose type.
struct Mat4 {
    std::array<double, 16> m{};

    static Mat4 identity();
    double& operator()(std::size_t r, std::size_t c) { return m[4 * r + c]; }
    double operator()(std::size_t r, std::size_t c) const { return m[4 * r + c]; }
    Mat4 operator*(const Mat4& o) const;
    StateVec operator*(const StateVec& v) const;
};

using InputPolicy = std::function<InputVec(double t, const StateVec&)>;

// Right-hand side of the controlled relative-motion equations:
//   xdd = -2*omega*vy + ux + dx
//   ydd =  2*omega*vx + 3*omega^2*y + uy + dy
StateVec hcw_vector_field(const StateVec& state, const InputVec& u, const InputVec& d,
                          const OrbitGameParams& params);

// Closed-form state transition matrix of the unforced system: X(t) = Phi(t) X(0).
// Valid for any finite t (negative rewinds); omega == 0 degenerates to free drift.
Mat4 hcw_transition_matrix(double t, const OrbitGameParams& params);

// Classical RK4 with inputs held constant over each step. Returns steps+1
// states, the first being the initial state. Null policies mean zero input.
// Throws std::invalid_argument for dt <= 0 or steps < 1.
std::vector<StateVec> propagate(const StateVec& state, const InputPolicy& u_policy,
                                const InputPolicy& d_policy, double dt, std::size_t steps,
                                const OrbitGameParams& params);

// Bang-bang saddle inputs for costate p (avoid convention): the control
// maximizes p·B·u over its box, the disturbance minimizes p·B·d over its box.
// sign(0) resolves to +1.
std::pair<InputVec, InputVec> optimal_inputs(const std::array<double, 4>& costate,
                                             const OrbitGameParams& params);

// Input-optimized Hamiltonian H(X, p) = p·f(X, u*, d*) under the avoid
// convention: drift terms plus (u_max - d_max)*(|p3| + |p4|).
double hamiltonian(const StateVec& state, const std::array<double, 4>& costate,
                   const OrbitGameParams& params);

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
};
using StateBox = std::array<AxisRange, 4>;

// Upper bounds alpha_i >= max |dH/dp_i| over the box; the solver's
// Lax-Friedrichs dissipation coefficients.
std::array<double, 4> hamiltonian_partials_bound(const StateBox& box,
                                                 const OrbitGameParams& params);

}  // namespace orbsafe
