#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbsafe/dynamics.hpp"
#include "orbsafe/grid.hpp"

namespace orbsafe {

enum class SolveMode { Tube, Set };

// Which player optimizes the value upward. Avoid: control keeps the value
// positive and the disturbance drives it down; Reach swaps the roles.
enum class GameConvention { Avoid, Reach };

struct SolveConfig {
    double horizon = 300.0;        // backward horizon tau (s); 0 means no steps
    double cfl = 0.5;              // pseudo-time step safety factor, in (0, 1]
    double save_every = 60.0;      // checkpoint interval (s); <= 0 disables
    double convergence_eps = 0.0;  // early stop when max update < eps; 0 disables
    SolveMode mode = SolveMode::Tube;
    GameConvention convention = GameConvention::Avoid;
    int num_threads = 0;  // 0 = hardware concurrency

    void validate() const;
    bool operator==(const SolveConfig&) const = default;
};

struct ValueFunctionResult {
    ScalarField final;
    // (backward time tau', field) in ascending tau'.
    std::vector<std::pair<double, ScalarField>> checkpoints;
    std::optional<double> converged_at;
    std::vector<double> step_max_updates;
    std::array<double, 4> alpha{};  // dissipation coefficients used
    double dt = 0.0;                // nominal CFL step (s)
    std::size_t steps = 0;
};

// Thrown when a pseudo-time step produces a non-finite node value.
struct SolveNumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Backward integration of the level-set equation with the Lax-Friedrichs
// numerical Hamiltonian and first-order upwind gradients. Tube mode applies
// the per-step min with the previous iterate and phi0 (the variational
// inequality); Set mode evolves the PDE alone.
ValueFunctionResult solve(const ScalarField& phi0, const OrbitGameParams& params,
                          const SolveConfig& config);

struct Membership {
    bool inside = false;
    double margin = 0.0;
    bool out_of_domain = false;
};

// Interpolated membership query against the final value field.
// Out-of-domain states report inside=false with the clamped margin.
Membership brt_membership(const ValueFunctionResult& result, const StateVec& state);

// One solve per disturbance bound, everything else fixed. Levels must be
// sorted ascending.
std::vector<ValueFunctionResult> disturbance_sensitivity(const ScalarField& phi0,
                                                         const OrbitGameParams& params,
                                                         const SolveConfig& config,
                                                         const std::vector<double>& d_levels);

// Stats record mirroring the per-solve JSON file.
std::string solve_stats_json(const ValueFunctionResult& result);

}  // namespace orbsafe
